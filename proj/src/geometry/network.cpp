#include "lathom/geometry/network.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace lathom::geometry {

std::string side_name(Side s) {
  static const char* names[] = {"left", "right", "bottom", "top", "back", "front"};
  return names[static_cast<int>(s)];
}

Side side_from_name(const std::string& name) {
  for (int i = 0; i < 6; ++i)
    if (side_name(static_cast<Side>(i)) == name) return static_cast<Side>(i);
  throw GeometryError("unknown boundary side '" + name + "'");
}

double DualNetwork::cell_volume() const {
  double v = 1.0;
  for (int k = 0; k < n_dim; ++k) v *= cell[k];
  return n_dim == 2 ? v * kPlanarThickness : v;
}

Vec3 DualNetwork::branch_vector(const ConduitElement& e) const {
  Vec3 d = nodes[e.node_q].position - nodes[e.node_p].position;
  for (int k = 0; k < n_dim; ++k) d[k] += e.image_shift[k] * cell[k];
  return d;
}

InvariantReport check_invariants(const DualNetwork& net) {
  InvariantReport rep;
  const int n = static_cast<int>(net.nodes.size());
  std::vector<Vec3> closure(n, Vec3::Zero());
  std::vector<double> area_sum(n, 0.0);
  Mat3 fabric = Mat3::Zero();
  double lmax = net.cell.head(net.n_dim).maxCoeff();

  for (const auto& e : net.elements) {
    const Vec3 se = e.area * e.direction;
    closure[e.node_p] += se;
    closure[e.node_q] -= se;
    area_sum[e.node_p] += e.area;
    area_sum[e.node_q] += e.area;
    fabric += e.length * e.area * e.direction * e.direction.transpose();
    rep.max_unit_error = std::max({rep.max_unit_error, std::abs(e.direction.norm() - 1.0),
                                   std::abs(e.normal.norm() - 1.0)});
    if (e.area > 0.0)
      rep.max_projection_error = std::max(
          rep.max_projection_error, std::abs(e.projected_area - std::abs(e.normal.dot(e.direction)) * e.area) / e.area);
    rep.max_branch_error =
        std::max(rep.max_branch_error, (e.length * e.direction - net.branch_vector(e)).norm() / lmax);
    if (e.normal.cross(e.direction).norm() > 1e-12) rep.parallel = false;
  }
  for (const auto& b : net.boundary) {
    closure[b.node] += b.area * b.direction;
    area_sum[b.node] += b.area;
  }
  for (int i = 0; i < n; ++i)
    if (area_sum[i] > 0.0) rep.max_closure = std::max(rep.max_closure, closure[i].norm() / area_sum[i]);

  const double v0 = net.cell_volume();
  Mat3 ident = Mat3::Zero();
  for (int k = 0; k < net.n_dim; ++k) ident(k, k) = v0;
  rep.fabric_error = (fabric - ident).norm() / (v0 * std::sqrt(static_cast<double>(net.n_dim)));
  double wsum = 0.0;
  for (const auto& node : net.nodes) wsum += node.volume;
  rep.volume_error = std::abs(wsum - v0) / v0;
  return rep;
}

void validate(const DualNetwork& net) {
  if (net.n_dim != 2 && net.n_dim != 3) throw GeometryError("network dimension must be 2 or 3");
  const int n = static_cast<int>(net.nodes.size());
  for (int i = 0; i < n; ++i) {
    if (net.nodes[i].id != i) throw GeometryError("node ids must be consecutive from 0 (node " + std::to_string(i) + ")");
    if (!(net.nodes[i].volume > 0.0))
      throw GeometryError("degenerate control volume at node " + std::to_string(i));
  }
  const double lmax = net.cell.head(net.n_dim).maxCoeff();
  for (const auto& e : net.elements) {
    const std::string where = "element " + std::to_string(e.id);
    if (e.node_p < 0 || e.node_p >= n || e.node_q < 0 || e.node_q >= n)
      throw GeometryError(where + " references a missing node");
    if (!(e.area > 0.0) || !(e.length > 0.0)) throw GeometryError(where + " has non-positive area or length");
    if (std::abs(e.direction.norm() - 1.0) > 1e-9 || std::abs(e.normal.norm() - 1.0) > 1e-9)
      throw GeometryError(where + " has a non-unit direction or normal");
    const double expected = std::abs(e.normal.dot(e.direction)) * e.area;
    if (!(e.projected_area > 0.0) || std::abs(e.projected_area - expected) > 1e-9 * e.area)
      throw GeometryError(where + " violates S* = |o.e| S");
    if ((e.length * e.direction - net.branch_vector(e)).norm() > 1e-9 * lmax)
      throw GeometryError(where + " length/direction inconsistent with node positions and image shift");
    if (!net.periodic && e.image_shift != std::array<int, 3>{0, 0, 0})
      throw GeometryError(where + " has an image shift in a non-periodic network");
    if (!(e.lambda0 > 0.0)) throw GeometryError(where + " has non-positive lambda0");
  }
  for (const auto& b : net.boundary)
    if (b.node < 0 || b.node >= n || !(b.area > 0.0) || !(b.distance > 0.0))
      throw GeometryError("invalid boundary facet at node " + std::to_string(b.node));
}

std::vector<std::vector<int>> connected_components(const DualNetwork& net) {
  const int n = static_cast<int>(net.nodes.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : net.elements) {
    const int a = find(e.node_p), b = find(e.node_q);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> label(n, -1);
  std::vector<std::vector<int>> comps;
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (label[r] < 0) {
      label[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[label[r]].push_back(i);
  }
  return comps;
}

}  // namespace lathom::geometry
