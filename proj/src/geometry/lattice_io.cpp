#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "lathom/geometry/generators.hpp"

namespace lathom::geometry {
namespace {

void put(std::string& out, double v) { fmt::format_to(std::back_inserter(out), " {:.17g}", v); }

void put_vec(std::string& out, const Vec3& v, int n_dim) {
  for (int k = 0; k < n_dim; ++k) put(out, v[k]);
}

}  // namespace

std::string format_network(const DualNetwork& net) {
  const int d = net.n_dim;
  std::string out = fmt::format("DIM {} PERIODIC {} CELL", d, net.periodic ? 1 : 0);
  put_vec(out, net.cell, d);
  out += '\n';
  for (const auto& n : net.nodes) {
    out += fmt::format("NODE {}", n.id);
    put_vec(out, n.position, d);
    put(out, n.volume);
    out += '\n';
  }
  for (const auto& e : net.elements) {
    out += fmt::format("ELEM {} {} {}", e.id, e.node_p, e.node_q);
    put(out, e.area);
    put(out, e.projected_area);
    put(out, e.length);
    put_vec(out, e.direction, d);
    put_vec(out, e.normal, d);
    for (int k = 0; k < d; ++k) out += fmt::format(" {}", e.image_shift[k]);
    put(out, e.lambda0);
    out += '\n';
  }
  for (const auto& b : net.boundary) {
    out += fmt::format("BOUND {} {}", b.node, side_name(b.side));
    put(out, b.area);
    put(out, b.distance);
    put_vec(out, b.direction, d);
    put(out, b.lambda0);
    out += '\n';
  }
  return out;
}

void export_network(const DualNetwork& net, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw GeometryError("cannot open '" + path + "' for writing");
  f << format_network(net);
  if (!f) throw GeometryError("failed writing '" + path + "'");
}

DualNetwork parse_network(const std::string& text) {
  DualNetwork net;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_header = false;
  auto fail = [&](const std::string& what) -> GeometryError {
    return GeometryError(fmt::format("lattice line {}: {}", line_no, what));
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    auto num = [&]() {
      std::string tok;
      if (!(ls >> tok)) throw fail("missing field");
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        throw fail("malformed number '" + tok + "'");
      }
      if (used != tok.size()) throw fail("malformed number '" + tok + "'");
      return v;
    };
    auto integer = [&]() {
      const double v = num();
      if (v != std::floor(v)) throw fail("expected an integer");
      return static_cast<int>(v);
    };
    auto vec = [&]() {
      Vec3 v = Vec3::Zero();
      for (int k = 0; k < net.n_dim; ++k) v[k] = num();
      return v;
    };
    if (tag == "DIM") {
      if (have_header) throw fail("duplicate header");
      net.n_dim = integer();
      if (net.n_dim != 2 && net.n_dim != 3) throw fail("DIM must be 2 or 3");
      std::string kw;
      if (!(ls >> kw) || kw != "PERIODIC") throw fail("expected PERIODIC");
      const int per = integer();
      if (per != 0 && per != 1) throw fail("PERIODIC must be 0 or 1");
      net.periodic = per == 1;
      if (!(ls >> kw) || kw != "CELL") throw fail("expected CELL");
      net.cell = Vec3::Ones();
      for (int k = 0; k < net.n_dim; ++k) net.cell[k] = num();
      have_header = true;
    } else if (!have_header) {
      throw fail("record before DIM header");
    } else if (tag == "NODE") {
      LatticeNode n;
      n.id = integer();
      n.position = vec();
      n.volume = num();
      net.nodes.push_back(n);
    } else if (tag == "ELEM") {
      ConduitElement e;
      e.id = integer();
      e.node_p = integer();
      e.node_q = integer();
      e.area = num();
      e.projected_area = num();
      e.length = num();
      e.direction = vec();
      e.normal = vec();
      for (int k = 0; k < net.n_dim; ++k) e.image_shift[k] = integer();
      e.lambda0 = num();
      net.elements.push_back(e);
    } else if (tag == "BOUND") {
      BoundaryFacet b;
      b.node = integer();
      std::string side;
      if (!(ls >> side)) throw fail("missing side");
      try {
        b.side = side_from_name(side);
      } catch (const GeometryError& ex) {
        throw fail(ex.what());
      }
      b.area = num();
      b.distance = num();
      b.direction = vec();
      b.lambda0 = num();
      net.boundary.push_back(b);
    } else {
      throw fail("unknown record '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra) throw fail("trailing field '" + extra + "'");
  }
  if (!have_header) throw GeometryError("lattice: missing DIM header");
  validate(net);
  for (int i = 0; i < static_cast<int>(net.elements.size()); ++i)
    if (net.elements[i].id != i) throw GeometryError(fmt::format("element ids must be consecutive from 0 (element {})", i));
  for (auto& e : net.elements)
    e.centroid = net.nodes[e.node_p].position + 0.5 * e.length * e.direction;
  return net;
}

DualNetwork import_network(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw GeometryError("cannot open lattice file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_network(ss.str());
}

}  // namespace lathom::geometry
