#include <cmath>
#include <numbers>

#include "lathom/geometry/generators.hpp"

namespace lathom::geometry {

DualNetwork build_skewed_lattice(const Vec3& cell, int n_dim, const std::array<int, 3>& divisions, double skew_angle) {
  if (n_dim != 2 && n_dim != 3) throw GeometryError("skewed lattice: dimension must be 2 or 3");
  if (!(skew_angle >= 0.0 && skew_angle < 0.5 * std::numbers::pi))
    throw GeometryError("skewed lattice: skew angle must lie in [0, 90) degrees");
  std::array<int, 3> div{1, 1, 1};
  Vec3 spacing = Vec3::Ones();
  for (int k = 0; k < n_dim; ++k) {
    if (divisions[k] < 1) throw GeometryError("skewed lattice: divisions must be >= 1");
    if (!(cell[k] > 0.0)) throw GeometryError("skewed lattice: cell lengths must be positive");
    div[k] = divisions[k];
    spacing[k] = cell[k] / div[k];
  }
  const double thick = n_dim == 2 ? kPlanarThickness : 1.0;

  DualNetwork net;
  net.n_dim = n_dim;
  net.periodic = true;
  net.cell = cell;
  if (n_dim == 2) net.cell.z() = 1.0;

  auto index = [&](int i, int j, int k) { return (k * div[1] + j) * div[0] + i; };
  double volume = thick;
  for (int k = 0; k < n_dim; ++k) volume *= spacing[k];
  for (int k = 0; k < div[2]; ++k)
    for (int j = 0; j < div[1]; ++j)
      for (int i = 0; i < div[0]; ++i) {
        Vec3 x = Vec3::Zero();
        const int ijk[3] = {i, j, k};
        for (int d = 0; d < n_dim; ++d) x[d] = (ijk[d] + 0.5) * spacing[d];
        net.nodes.push_back({index(i, j, k), x, volume});
      }

  const double c = std::cos(skew_angle), s = std::sin(skew_angle);
  for (int k = 0; k < div[2]; ++k)
    for (int j = 0; j < div[1]; ++j)
      for (int i = 0; i < div[0]; ++i)
        for (int d = 0; d < n_dim; ++d) {
          std::array<int, 3> to{i, j, k};
          std::array<int, 3> shift{0, 0, 0};
          if (++to[d] == div[d]) {
            to[d] = 0;
            shift[d] = 1;
          }
          double area = thick;
          for (int a = 0; a < n_dim; ++a)
            if (a != d) area *= spacing[a];
          const double sign = (i + j + k) % 2 == 0 ? 1.0 : -1.0;
          ConduitElement e;
          e.id = static_cast<int>(net.elements.size());
          e.node_p = index(i, j, k);
          e.node_q = index(to[0], to[1], to[2]);
          e.length = spacing[d];
          e.direction = Vec3::Unit(d);
          e.normal = c * Vec3::Unit(d) + sign * s * Vec3::Unit((d + 1) % n_dim);
          e.area = area;
          e.projected_area = c * area;
          e.centroid = net.nodes[e.node_p].position + 0.5 * spacing[d] * Vec3::Unit(d);
          e.image_shift = shift;
          net.elements.push_back(e);
        }
  return net;
}

}  // namespace lathom::geometry
