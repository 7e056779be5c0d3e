#include <algorithm>
#include <cmath>

#include "convex_cell.hpp"
#include "lathom/geometry/generators.hpp"

namespace lathom::geometry {
namespace {

struct Candidate {
  double dist2;
  int node;
  std::array<int, 3> shift;
  Vec3 rel;
};

// Clips `cell` by the bisectors of the candidates in order of distance, stopping
// once the remaining candidates cannot reach the cell. Candidates are reordered.
template <class Cell>
void clip_by_candidates(Cell& cell, std::vector<Candidate>& cands) {
  std::size_t done = 0;
  std::size_t k = std::min<std::size_t>(64, cands.size());
  auto closer = [](const Candidate& a, const Candidate& b) {
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    if (a.node != b.node) return a.node < b.node;
    return a.shift < b.shift;
  };
  while (done < cands.size()) {
    std::partial_sort(cands.begin() + static_cast<long>(done), cands.begin() + static_cast<long>(k), cands.end(),
                      closer);
    for (std::size_t c = done; c < k; ++c) {
      if (cands[c].dist2 > 4.0 * cell.max_radius_squared() * (1.0 + 1e-12)) return;
      const double d = std::sqrt(cands[c].dist2);
      if (!cell.clip(cands[c].rel / d, 0.5 * d, static_cast<long>(c)))
        throw GeometryError("voronoi: cell vanished during clipping (coincident nuclei?)");
    }
    done = k;
    k = std::min(cands.size(), 2 * k);
  }
}

bool positive_shift(const std::array<int, 3>& s) {
  for (int v : s)
    if (v != 0) return v > 0;
  return false;
}

template <class Cell>
std::pair<double, std::vector<detail::CellFace>> periodic_cell(int i, const std::vector<Vec3>& pts, const Vec3& cell,
                                                               int n_dim, std::vector<Candidate>& cands) {
  const double lmin = cell.head(n_dim).minCoeff();
  for (int range = 1;; ++range) {
    cands.clear();
    std::array<int, 3> s{0, 0, 0};
    const int zr = n_dim == 3 ? range : 0;
    for (int j = 0; j < static_cast<int>(pts.size()); ++j)
      for (s[0] = -range; s[0] <= range; ++s[0])
        for (s[1] = -range; s[1] <= range; ++s[1])
          for (s[2] = -zr; s[2] <= zr; ++s[2]) {
            if (j == i && s == std::array<int, 3>{0, 0, 0}) continue;
            Vec3 rel = pts[j] - pts[i];
            for (int k = 0; k < n_dim; ++k) rel[k] += s[k] * cell[k];
            cands.push_back({rel.squaredNorm(), j, s, rel});
          }
    Vec3 lo = -cell, hi = cell;
    if (n_dim == 2) lo.z() = hi.z() = 0.0;
    Cell c(lo, hi);
    clip_by_candidates(c, cands);
    if (4.0 * c.max_radius_squared() <= range * range * lmin * lmin) return {c.measure(), c.faces()};
  }
}

template <class Cell>
DualNetwork build_periodic(const std::vector<Vec3>& pts, const Vec3& cell, int n_dim) {
  DualNetwork net;
  net.n_dim = n_dim;
  net.periodic = true;
  net.cell = cell;
  if (n_dim == 2) net.cell.z() = 1.0;
  const double thick = n_dim == 2 ? kPlanarThickness : 1.0;
  const double lmax = cell.head(n_dim).maxCoeff();
  const double drop = 1e-12 * lmax * lmax;

  std::vector<Candidate> cands;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    auto [measure, faces] = periodic_cell<Cell>(i, pts, cell, n_dim, cands);
    net.nodes.push_back({i, pts[i], measure * thick});
    for (const auto& f : faces) {
      if (f.label < 0) throw GeometryError("voronoi: periodic cell touches its bounding box");
      const Candidate& c = cands[static_cast<std::size_t>(f.label)];
      const bool canonical = i < c.node || (i == c.node && positive_shift(c.shift));
      const double area = f.area * thick;
      if (!canonical || area < drop) continue;
      ConduitElement e;
      e.id = static_cast<int>(net.elements.size());
      e.node_p = i;
      e.node_q = c.node;
      e.length = std::sqrt(c.dist2);
      e.direction = c.rel / e.length;
      e.normal = e.direction;
      e.area = area;
      e.projected_area = area;
      e.centroid = pts[i] + f.centroid;
      e.image_shift = c.shift;
      net.elements.push_back(e);
    }
  }
  return net;
}

}  // namespace

DualNetwork build_voronoi_dual(const std::vector<Vec3>& nuclei, const Vec3& cell, int n_dim,
                               const VoronoiOptions& options) {
  if (n_dim != 2 && n_dim != 3) throw GeometryError("voronoi: dimension must be 2 or 3");
  if (nuclei.empty() || (nuclei.size() < 2 && !options.allow_single))
    throw GeometryError("voronoi: fewer than 2 nuclei");
  std::vector<Vec3> pts;
  pts.reserve(nuclei.size());
  for (const auto& x : nuclei) {
    Vec3 w = Vec3::Zero();
    for (int k = 0; k < n_dim; ++k) {
      w[k] = x[k] - std::floor(x[k] / cell[k]) * cell[k];
      if (w[k] >= cell[k]) w[k] = 0.0;
    }
    pts.push_back(w);
  }
  return n_dim == 2 ? build_periodic<detail::ConvexCell2D>(pts, cell, 2)
                    : build_periodic<detail::ConvexCell3D>(pts, cell, 3);
}

namespace {

template <class Cell>
DualNetwork build_bounded(const std::vector<Vec3>& gens, const Vec3& extent, int n_dim) {
  DualNetwork net;
  net.n_dim = n_dim;
  net.periodic = false;
  net.cell = extent;
  if (n_dim == 2) net.cell.z() = 1.0;
  const double thick = n_dim == 2 ? kPlanarThickness : 1.0;
  const double lmax = extent.head(n_dim).maxCoeff();
  const double drop = 1e-12 * lmax * lmax;
  const int n = static_cast<int>(gens.size());

  double vol = 1.0;
  for (int k = 0; k < n_dim; ++k) vol *= extent[k];
  const double bin = 1.5 * std::pow(vol / n, 1.0 / n_dim);
  std::array<int, 3> nb{1, 1, 1};
  for (int k = 0; k < n_dim; ++k) nb[k] = std::max(1, static_cast<int>(std::ceil(extent[k] / bin)));
  auto bin_of = [&](const Vec3& x) {
    std::array<int, 3> b{0, 0, 0};
    for (int k = 0; k < n_dim; ++k) b[k] = std::clamp(static_cast<int>(x[k] / bin), 0, nb[k] - 1);
    return b;
  };
  std::vector<std::vector<int>> bins(static_cast<std::size_t>(nb[0]) * nb[1] * nb[2]);
  auto flat = [&](const std::array<int, 3>& b) { return (static_cast<std::size_t>(b[2]) * nb[1] + b[1]) * nb[0] + b[0]; };
  for (int i = 0; i < n; ++i) bins[flat(bin_of(gens[i]))].push_back(i);
  const int max_ring = std::max({nb[0], nb[1], nb[2]});

  std::vector<Candidate> ring_cands, all;
  for (int i = 0; i < n; ++i) {
    const Vec3 lo = -gens[i];
    Vec3 hi = extent - gens[i];
    Vec3 lo3 = lo;
    if (n_dim == 2) lo3.z() = hi.z() = 0.0;
    Cell cell(lo3, hi);
    const auto bi = bin_of(gens[i]);
    all.clear();
    for (int ring = 0; ring <= max_ring; ++ring) {
      ring_cands.clear();
      std::array<int, 3> o{0, 0, 0};
      const int zr = n_dim == 3 ? ring : 0;
      for (o[2] = -zr; o[2] <= zr; ++o[2])
        for (o[1] = -ring; o[1] <= ring; ++o[1])
          for (o[0] = -ring; o[0] <= ring; ++o[0]) {
            if (std::max({std::abs(o[0]), std::abs(o[1]), std::abs(o[2])}) != ring) continue;
            std::array<int, 3> b{bi[0] + o[0], bi[1] + o[1], bi[2] + o[2]};
            bool inside = true;
            for (int k = 0; k < 3; ++k) inside &= b[k] >= 0 && b[k] < nb[k];
            if (!inside) continue;
            for (int j : bins[flat(b)]) {
              if (j == i) continue;
              const Vec3 rel = gens[j] - gens[i];
              ring_cands.push_back({rel.squaredNorm(), j, {0, 0, 0}, rel});
            }
          }
      std::sort(ring_cands.begin(), ring_cands.end(),
                [](const Candidate& a, const Candidate& b) { return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.node < b.node); });
      for (const auto& c : ring_cands) {
        all.push_back(c);
        if (c.dist2 > 4.0 * cell.max_radius_squared() * (1.0 + 1e-12)) continue;
        const double d = std::sqrt(c.dist2);
        if (!cell.clip(c.rel / d, 0.5 * d, static_cast<long>(all.size() - 1)))
          throw GeometryError("voronoi: cell vanished during clipping (coincident generators?)");
      }
      const double reach = ring * bin;
      if (reach * reach >= 4.0 * cell.max_radius_squared()) break;
    }
    net.nodes.push_back({i, gens[i], cell.measure() * thick});
    for (const auto& f : cell.faces()) {
      const double area = f.area * thick;
      if (area < drop) continue;
      if (f.label < 0) {
        const int side = static_cast<int>(-1 - f.label);
        BoundaryFacet bf;
        bf.node = i;
        bf.side = static_cast<Side>(side);
        bf.area = area;
        bf.distance = f.distance;
        bf.direction = Vec3::Zero();
        bf.direction[side / 2] = side % 2 == 0 ? -1.0 : 1.0;
        net.boundary.push_back(bf);
        continue;
      }
      const Candidate& c = all[static_cast<std::size_t>(f.label)];
      if (i > c.node) continue;
      ConduitElement e;
      e.id = static_cast<int>(net.elements.size());
      e.node_p = i;
      e.node_q = c.node;
      e.length = std::sqrt(c.dist2);
      e.direction = c.rel / e.length;
      e.normal = e.direction;
      e.area = area;
      e.projected_area = area;
      e.centroid = gens[i] + f.centroid;
      net.elements.push_back(e);
    }
  }
  return net;
}

}  // namespace

DualNetwork build_bounded_voronoi(const std::vector<Vec3>& generators, const Vec3& extent, int n_dim) {
  if (n_dim != 2 && n_dim != 3) throw GeometryError("voronoi: dimension must be 2 or 3");
  if (generators.empty()) throw GeometryError("voronoi: no generators");
  for (const auto& g : generators)
    for (int k = 0; k < n_dim; ++k)
      if (g[k] < 0.0 || g[k] > extent[k]) throw GeometryError("voronoi: generator outside the domain box");
  return n_dim == 2 ? build_bounded<detail::ConvexCell2D>(generators, extent, 2)
                    : build_bounded<detail::ConvexCell3D>(generators, extent, 3);
}

}  // namespace lathom::geometry
