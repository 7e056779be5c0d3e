#include <cmath>
#include <limits>
#include <map>

#include "lathom/geometry/generators.hpp"

namespace lathom::geometry {

BoundaryMode boundary_mode_from_name(const std::string& name) {
  if (name == "cut") return BoundaryMode::Cut;
  if (name == "clip") return BoundaryMode::Clip;
  throw GeometryError("unknown boundary mode '" + name + "' (expected cut or clip)");
}

namespace {

struct Tiler {
  const DualNetwork& rve;
  std::array<int, 3> reps{1, 1, 1};
  Vec3 extent = Vec3::Zero();

  int tile_count() const { return reps[0] * reps[1] * reps[2]; }
  int tile_index(const std::array<int, 3>& t) const { return (t[2] * reps[1] + t[1]) * reps[0] + t[0]; }
  std::array<int, 3> tile_of(int index) const {
    return {index % reps[0], (index / reps[0]) % reps[1], index / (reps[0] * reps[1])};
  }
  bool inside(const std::array<int, 3>& t) const {
    for (int k = 0; k < 3; ++k)
      if (t[k] < 0 || t[k] >= reps[k]) return false;
    return true;
  }
  Vec3 offset(const std::array<int, 3>& t) const {
    Vec3 o = Vec3::Zero();
    for (int k = 0; k < rve.n_dim; ++k) o[k] = t[k] * rve.cell[k];
    return o;
  }
  int node_id(const std::array<int, 3>& t, int local) const {
    return tile_index(t) * static_cast<int>(rve.nodes.size()) + local;
  }
};

// Half link from x along dir, truncated at the first domain plane it crosses.
BoundaryFacet truncate(const Tiler& tl, int node, const Vec3& x, const Vec3& dir, double area, double lambda0) {
  double best = std::numeric_limits<double>::infinity();
  int side = 0;
  for (int k = 0; k < tl.rve.n_dim; ++k) {
    if (dir[k] > 0.0) {
      const double t = (tl.extent[k] - x[k]) / dir[k];
      if (t < best) best = t, side = 2 * k + 1;
    } else if (dir[k] < 0.0) {
      const double t = -x[k] / dir[k];
      if (t < best) best = t, side = 2 * k;
    }
  }
  BoundaryFacet f;
  f.node = node;
  f.side = static_cast<Side>(side);
  f.area = area;
  f.distance = std::max(best, 1e-12 * tl.extent.head(tl.rve.n_dim).maxCoeff());
  f.direction = dir;
  f.lambda0 = lambda0;
  return f;
}

DualNetwork tile_nodes(const Tiler& tl) {
  DualNetwork net;
  net.n_dim = tl.rve.n_dim;
  net.periodic = false;
  net.cell = tl.extent;
  if (net.n_dim == 2) net.cell.z() = 1.0;
  for (int ti = 0; ti < tl.tile_count(); ++ti) {
    const auto t = tl.tile_of(ti);
    for (const auto& n : tl.rve.nodes)
      net.nodes.push_back({tl.node_id(t, n.id), n.position + tl.offset(t), n.volume});
  }
  return net;
}

DualNetwork tile_cut(const Tiler& tl) {
  DualNetwork net = tile_nodes(tl);
  for (int ti = 0; ti < tl.tile_count(); ++ti) {
    const auto t = tl.tile_of(ti);
    for (const auto& e : tl.rve.elements) {
      std::array<int, 3> tq{};
      for (int k = 0; k < 3; ++k) tq[k] = t[k] + e.image_shift[k];
      const int p = tl.node_id(t, e.node_p);
      if (tl.inside(tq)) {
        ConduitElement c = e;
        c.id = static_cast<int>(net.elements.size());
        c.node_p = p;
        c.node_q = tl.node_id(tq, e.node_q);
        c.centroid = e.centroid + tl.offset(t);
        c.image_shift = {0, 0, 0};
        net.elements.push_back(c);
      } else {
        net.boundary.push_back(
            truncate(tl, p, net.nodes[p].position, e.direction, e.projected_area, e.lambda0));
      }
      // The Q end of the same contact seen from a tile whose P end lies outside.
      std::array<int, 3> tp{};
      for (int k = 0; k < 3; ++k) tp[k] = t[k] - e.image_shift[k];
      if (!tl.inside(tp)) {
        const int q = tl.node_id(t, e.node_q);
        net.boundary.push_back(
            truncate(tl, q, net.nodes[q].position, -e.direction, e.projected_area, e.lambda0));
      }
    }
  }
  return net;
}

DualNetwork tile_clip(const Tiler& tl) {
  const DualNetwork seed = tile_nodes(tl);
  std::vector<Vec3> gens;
  gens.reserve(seed.nodes.size());
  for (const auto& n : seed.nodes) gens.push_back(n.position);
  DualNetwork net = build_bounded_voronoi(gens, tl.extent, tl.rve.n_dim);

  // (local p, local q, shift) -> lambda0 of the RVE contact.
  std::map<std::tuple<int, int, std::array<int, 3>>, double> contact;
  double mean = 0.0;
  for (const auto& e : tl.rve.elements) {
    contact[{e.node_p, e.node_q, e.image_shift}] = e.lambda0;
    mean += e.lambda0;
  }
  mean = tl.rve.elements.empty() ? 1.0 : mean / static_cast<double>(tl.rve.elements.size());

  const int n = static_cast<int>(tl.rve.nodes.size());
  for (auto& e : net.elements) {
    const auto tp = tl.tile_of(e.node_p / n), tq = tl.tile_of(e.node_q / n);
    const int lp = e.node_p % n, lq = e.node_q % n;
    std::array<int, 3> s{}, r{};
    for (int k = 0; k < 3; ++k) {
      s[k] = tq[k] - tp[k];
      r[k] = -s[k];
    }
    if (auto it = contact.find({lp, lq, s}); it != contact.end())
      e.lambda0 = it->second;
    else if (auto jt = contact.find({lq, lp, r}); jt != contact.end())
      e.lambda0 = jt->second;
    else
      e.lambda0 = mean;
  }
  for (auto& b : net.boundary) b.lambda0 = mean;
  return net;
}

}  // namespace

DualNetwork tile_full_domain(const DualNetwork& rve, const std::array<int, 3>& repetitions, BoundaryMode mode) {
  if (!rve.periodic) throw GeometryError("tiling requires a periodic RVE");
  Tiler tl{rve};
  for (int k = 0; k < rve.n_dim; ++k) {
    if (repetitions[k] < 1) throw GeometryError("tiling: repetitions must be >= 1");
    tl.reps[k] = repetitions[k];
    tl.extent[k] = repetitions[k] * rve.cell[k];
  }
  if (rve.n_dim == 2) tl.extent.z() = 1.0;
  return mode == BoundaryMode::Cut ? tile_cut(tl) : tile_clip(tl);
}

}  // namespace lathom::geometry
