#include <cmath>
#include <set>

#include "lathom/geometry/generators.hpp"
#include "lathom/numerics/random.hpp"

namespace lathom::geometry {

std::vector<Vec3> generate_periodic_nuclei(const Vec3& cell, int n_dim, double l_min, std::uint64_t seed,
                                           const NucleiOptions& options) {
  if (n_dim != 2 && n_dim != 3) throw GeometryError("nuclei: dimension must be 2 or 3");
  if (!(l_min > 0.0)) throw GeometryError("nuclei: l_min must be positive");
  for (int k = 0; k < n_dim; ++k)
    if (!(cell[k] > 0.0)) throw GeometryError("nuclei: cell lengths must be positive");

  // Bins at least l_min wide: conflicts can only come from the 3^n neighbouring bins.
  std::array<int, 3> nb{1, 1, 1};
  for (int k = 0; k < n_dim; ++k) nb[k] = std::max(1, static_cast<int>(std::floor(cell[k] / l_min)));
  std::vector<std::vector<int>> bins(static_cast<std::size_t>(nb[0]) * nb[1] * nb[2]);
  auto flat = [&](const std::array<int, 3>& b) {
    return (static_cast<std::size_t>(b[2]) * nb[1] + b[1]) * nb[0] + b[0];
  };
  auto bin_of = [&](const Vec3& x) {
    std::array<int, 3> b{0, 0, 0};
    for (int k = 0; k < n_dim; ++k)
      b[k] = std::min(nb[k] - 1, static_cast<int>(x[k] / cell[k] * nb[k]));
    return b;
  };
  auto periodic_dist2 = [&](const Vec3& a, const Vec3& b) {
    double d2 = 0.0;
    for (int k = 0; k < n_dim; ++k) {
      double d = std::abs(a[k] - b[k]);
      d = std::min(d, cell[k] - d);
      d2 += d * d;
    }
    return d2;
  };

  numerics::RandomStream rng(seed);
  std::vector<Vec3> nuclei;
  const double lmin2 = l_min * l_min;
  int rejections = 0;
  std::set<std::size_t> neighbours;
  while (rejections < options.rejection_budget) {
    Vec3 x = Vec3::Zero();
    for (int k = 0; k < n_dim; ++k) x[k] = rng.uniform() * cell[k];
    const auto b = bin_of(x);
    neighbours.clear();
    std::array<int, 3> o{0, 0, 0};
    const int zr = n_dim == 3 ? 1 : 0;
    for (o[2] = -zr; o[2] <= zr; ++o[2])
      for (o[1] = -1; o[1] <= 1; ++o[1])
        for (o[0] = -1; o[0] <= 1; ++o[0]) {
          std::array<int, 3> nbh{};
          for (int k = 0; k < 3; ++k) nbh[k] = ((b[k] + o[k]) % nb[k] + nb[k]) % nb[k];
          neighbours.insert(flat(nbh));
        }
    bool ok = true;
    for (std::size_t f : neighbours) {
      for (int j : bins[f])
        if (periodic_dist2(x, nuclei[j]) < lmin2) {
          ok = false;
          break;
        }
      if (!ok) break;
    }
    if (!ok) {
      ++rejections;
      continue;
    }
    rejections = 0;
    bins[flat(b)].push_back(static_cast<int>(nuclei.size()));
    nuclei.push_back(x);
  }
  if (nuclei.size() < 2 && !options.allow_single)
    throw GeometryError("degenerate cell: fewer than 2 nuclei fit with the given l_min");
  return nuclei;
}

}  // namespace lathom::geometry
