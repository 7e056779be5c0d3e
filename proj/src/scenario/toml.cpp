#include "lathom/scenario/toml.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include "lathom/numerics/types.hpp"

namespace lathom::scenario {
namespace {

using nlohmann::json;

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    for (;;) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        const bool array = s_.compare(pos_, 2, "[[") == 0;
        pos_ += array ? 2 : 1;
        const auto keys = parse_key_path();
        skip_space();
        if (!consume(array ? "]]" : "]")) fail("expected closing bracket of table header");
        end_of_line();
        table = array ? &append_table(root, keys) : &open_table(root, keys);
        continue;
      }
      const std::size_t key_pos = pos_;
      const auto keys = parse_key_path();
      skip_space();
      if (!consume("=")) fail("expected '=' after key");
      skip_space();
      json value = parse_value();
      end_of_line();
      json* target = table;
      for (std::size_t i = 0; i + 1 < keys.size(); ++i) target = &descend(*target, keys[i]);
      if (target->contains(keys.back())) {
        pos_ = key_pos;
        fail("duplicate key '" + keys.back() + "'");
      }
      (*target)[keys.back()] = std::move(value);
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) line += s_[i] == '\n';
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  bool consume(const char* tok) {
    const std::string t(tok);
    if (s_.compare(pos_, t.size(), t) != 0) return false;
    pos_ += t.size();
    return true;
  }
  void skip_space() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++pos_;
  }
  void skip_blank_lines() {
    for (;;) {
      skip_space();
      skip_comment();
      if (peek() == '\r') ++pos_;
      if (peek() != '\n') return;
      ++pos_;
    }
  }
  // whitespace, comments and newlines inside arrays
  void skip_all() {
    for (;;) {
      skip_space();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        ++pos_;
        continue;
      }
      return;
    }
  }
  void end_of_line() {
    skip_space();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (eof()) return;
    if (peek() != '\n') fail("unexpected trailing characters");
    ++pos_;
  }

  std::string parse_key() {
    skip_space();
    if (peek() == '"' || peek() == '\'') return parse_string();
    const std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) ++pos_;
    if (pos_ == start) fail("expected a key");
    return s_.substr(start, pos_ - start);
  }
  std::vector<std::string> parse_key_path() {
    std::vector<std::string> keys{parse_key()};
    for (;;) {
      skip_space();
      if (peek() != '.') return keys;
      ++pos_;
      keys.push_back(parse_key());
    }
  }

  json& descend(json& node, const std::string& key) {
    if (!node.contains(key)) node[key] = json::object();
    json& child = node[key];
    if (child.is_array() && !child.empty() && child.back().is_object()) return child.back();
    if (!child.is_object()) fail("key '" + key + "' is not a table");
    return child;
  }
  json& open_table(json& root, const std::vector<std::string>& keys) {
    json* t = &root;
    for (const auto& k : keys) t = &descend(*t, k);
    return *t;
  }
  json& append_table(json& root, const std::vector<std::string>& keys) {
    json* t = &root;
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) t = &descend(*t, keys[i]);
    json& arr = (*t)[keys.back()];
    if (arr.is_null()) arr = json::array();
    if (!arr.is_array()) fail("key '" + keys.back() + "' is not an array of tables");
    arr.push_back(json::object());
    return arr.back();
  }

  std::string parse_string() {
    const char quote = peek();
    ++pos_;
    std::string out;
    for (;;) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = s_[pos_++];
      if (c == quote) return out;
      if (c == '\\' && quote == '"') {
        if (eof()) fail("unterminated escape");
        const char e = s_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
        continue;
      }
      out += c;
    }
  }

  json parse_number_or_bool() {
    const std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || std::string("+-._").find(peek()) != std::string::npos))
      ++pos_;
    std::string tok = s_.substr(start, pos_ - start);
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok == "inf" || tok == "+inf") return std::numeric_limits<double>::infinity();
    if (tok == "-inf") return -std::numeric_limits<double>::infinity();
    std::string clean;
    for (char c : tok)
      if (c != '_') clean += c;
    if (clean.empty()) fail("expected a value");
    const bool is_float = clean.find_first_of(".eE") != std::string::npos;
    std::size_t used = 0;
    try {
      if (is_float) {
        const double v = std::stod(clean, &used);
        if (used == clean.size()) return v;
      } else {
        const long long v = std::stoll(clean, &used);
        if (used == clean.size()) return v;
      }
    } catch (const std::exception&) {
    }
    pos_ = start;
    fail("invalid value '" + tok + "'");
  }

  json parse_value() {
    const char c = peek();
    if (c == '"' || c == '\'') return parse_string();
    if (c == '[') {
      ++pos_;
      json arr = json::array();
      for (;;) {
        skip_all();
        if (peek() == ']') {
          ++pos_;
          return arr;
        }
        arr.push_back(parse_value());
        skip_all();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ']') {
          ++pos_;
          return arr;
        }
        fail("expected ',' or ']' in array");
      }
    }
    if (c == '{') {
      ++pos_;
      json obj = json::object();
      skip_space();
      if (peek() == '}') {
        ++pos_;
        return obj;
      }
      for (;;) {
        const auto keys = parse_key_path();
        skip_space();
        if (!consume("=")) fail("expected '=' in inline table");
        skip_space();
        json* target = &obj;
        for (std::size_t i = 0; i + 1 < keys.size(); ++i) target = &descend(*target, keys[i]);
        (*target)[keys.back()] = parse_value();
        skip_space();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == '}') {
          ++pos_;
          return obj;
        }
        fail("expected ',' or '}' in inline table");
      }
    }
    return parse_number_or_bool();
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

nlohmann::json parse_toml(const std::string& text) { return Parser(text).parse(); }

nlohmann::json load_toml(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_toml(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace lathom::scenario
