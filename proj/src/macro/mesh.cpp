#include "lathom/macro/mesh.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace lathom::macro {
namespace {

constexpr double kGauss = 0.57735026918962576451;  // 1 / sqrt(3)
const std::array<Vec2, 4> kGaussPoints{Vec2(-kGauss, -kGauss), Vec2(kGauss, -kGauss), Vec2(kGauss, kGauss),
                                       Vec2(-kGauss, kGauss)};
const std::array<Vec2, 4> kCorners{Vec2(-1, -1), Vec2(1, -1), Vec2(1, 1), Vec2(-1, 1)};

Mat2 jacobian(const MacroMesh& mesh, int e, const std::array<Vec2, 4>& dxi) {
  Mat2 J = Mat2::Zero();
  for (int a = 0; a < 4; ++a) J += mesh.nodes[mesh.elements[e][a]] * dxi[a].transpose();
  return J;  // J(i, j) = dx_i / dxi_j
}

}  // namespace

std::array<double, 4> shape_functions(const Vec2& xi) {
  std::array<double, 4> N{};
  for (int a = 0; a < 4; ++a) N[a] = 0.25 * (1 + kCorners[a].x() * xi.x()) * (1 + kCorners[a].y() * xi.y());
  return N;
}

std::array<Vec2, 4> shape_derivatives(const Vec2& xi) {
  std::array<Vec2, 4> d{};
  for (int a = 0; a < 4; ++a)
    d[a] = Vec2(0.25 * kCorners[a].x() * (1 + kCorners[a].y() * xi.y()),
                0.25 * kCorners[a].y() * (1 + kCorners[a].x() * xi.x()));
  return d;
}

MacroMesh MacroMesh::structured(const std::vector<double>& xs, const std::vector<double>& ys, double thickness) {
  if (xs.size() < 2 || ys.size() < 2) throw Error("structured mesh needs at least two breakpoints per axis");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw Error("mesh x breakpoints must be strictly increasing");
  for (std::size_t i = 1; i < ys.size(); ++i)
    if (!(ys[i] > ys[i - 1])) throw Error("mesh y breakpoints must be strictly increasing");
  if (!(thickness > 0.0)) throw Error("mesh thickness must be positive");
  MacroMesh m;
  const int nx = static_cast<int>(xs.size()), ny = static_cast<int>(ys.size());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) m.nodes.emplace_back(xs[i], ys[j]);
  auto id = [&](int i, int j) { return j * nx + i; };
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      m.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
      m.thickness.push_back(thickness);
    }
  for (int j = 0; j < ny; ++j) {
    m.node_sets["left"].push_back(id(0, j));
    m.node_sets["right"].push_back(id(nx - 1, j));
  }
  for (int i = 0; i < nx; ++i) {
    m.node_sets["bottom"].push_back(id(i, 0));
    m.node_sets["top"].push_back(id(i, ny - 1));
  }
  return m;
}

void MacroMesh::validate() const {
  if (thickness.size() != elements.size()) throw Error("mesh: one thickness per element required");
  for (int e = 0; e < static_cast<int>(elements.size()); ++e) {
    for (int a = 0; a < 4; ++a)
      if (elements[e][a] < 0 || elements[e][a] >= static_cast<int>(nodes.size()))
        throw Error("mesh: element " + std::to_string(e) + " references a missing node");
    for (const auto& g : kGaussPoints)
      if (!(jacobian(*this, e, shape_derivatives(g)).determinant() > 0.0))
        throw Error("mesh: non-positive Jacobian determinant in element " + std::to_string(e));
  }
}

const std::vector<int>& MacroMesh::node_set(const std::string& name) const {
  const auto it = node_sets.find(name);
  if (it == node_sets.end()) throw Error("mesh: unknown node set '" + name + "'");
  return it->second;
}

std::vector<IntegrationPoint> integration_points(const MacroMesh& mesh) {
  std::vector<IntegrationPoint> ips;
  ips.reserve(4 * mesh.elements.size());
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e)
    for (const auto& g : kGaussPoints) {
      IntegrationPoint ip;
      ip.element = e;
      ip.N = shape_functions(g);
      const auto dxi = shape_derivatives(g);
      const Mat2 J = jacobian(mesh, e, dxi);
      const double det = J.determinant();
      if (!(det > 0.0)) throw Error("mesh: non-positive Jacobian determinant in element " + std::to_string(e));
      const Mat2 Jinv_t = J.inverse().transpose();
      for (int a = 0; a < 4; ++a) {
        ip.dN[a] = Jinv_t * dxi[a];
        ip.x += ip.N[a] * mesh.nodes[mesh.elements[e][a]];
      }
      ip.weight = det * mesh.thickness[e];
      ips.push_back(ip);
    }
  return ips;
}

std::optional<PointLocation> locate(const MacroMesh& mesh, const Vec2& x) {
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    Vec2 lo = mesh.nodes[mesh.elements[e][0]], hi = lo;
    for (int a = 1; a < 4; ++a) {
      lo = lo.cwiseMin(mesh.nodes[mesh.elements[e][a]]);
      hi = hi.cwiseMax(mesh.nodes[mesh.elements[e][a]]);
    }
    const double tol = 1e-9 * (hi - lo).norm();
    if ((x.array() < lo.array() - tol).any() || (x.array() > hi.array() + tol).any()) continue;
    Vec2 xi = Vec2::Zero();
    for (int it = 0; it < 30; ++it) {
      const auto N = shape_functions(xi);
      Vec2 r = -x;
      for (int a = 0; a < 4; ++a) r += N[a] * mesh.nodes[mesh.elements[e][a]];
      if (r.norm() <= 1e-13 * (hi - lo).norm()) break;
      xi -= jacobian(mesh, e, shape_derivatives(xi)).inverse() * r;
    }
    if (xi.cwiseAbs().maxCoeff() <= 1.0 + 1e-9) return PointLocation{e, xi.cwiseMax(-1.0).cwiseMin(1.0)};
  }
  return std::nullopt;
}

double interpolate(const MacroMesh& mesh, const VectorX& u, int fields, int field, const Vec2& x) {
  const auto loc = locate(mesh, x);
  if (!loc) throw Error("interpolate: point outside the mesh");
  const auto N = shape_functions(loc->xi);
  double v = 0.0;
  for (int a = 0; a < 4; ++a) v += N[a] * u[mesh.elements[loc->element][a] * fields + field];
  return v;
}

VectorX project_to_nodes(const MacroMesh& mesh, const std::vector<IntegrationPoint>& ips,
                         const std::vector<double>& values) {
  VectorX num = VectorX::Zero(static_cast<long>(mesh.nodes.size()));
  VectorX den = VectorX::Zero(static_cast<long>(mesh.nodes.size()));
  for (std::size_t k = 0; k < ips.size(); ++k)
    for (int a = 0; a < 4; ++a) {
      const int n = mesh.elements[ips[k].element][a];
      num[n] += ips[k].N[a] * ips[k].weight * values[k];
      den[n] += ips[k].N[a] * ips[k].weight;
    }
  return num.cwiseQuotient(den);
}

}  // namespace lathom::macro
