#pragma once

#include <string>

#include <json.hpp>

namespace lathom::scenario {

/// Parses the TOML subset used by scenario files into a JSON tree: comments,
/// [tables], [[arrays of tables]], dotted keys, basic and literal strings,
/// integers, floats, booleans, multi-line arrays and inline tables.
/// Throws ConfigError with the line number on malformed input.
nlohmann::json parse_toml(const std::string& text);
nlohmann::json load_toml(const std::string& path);

}  // namespace lathom::scenario
