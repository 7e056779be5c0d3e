#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lathom/geometry/network.hpp"

namespace lathom::geometry {

struct NucleiOptions {
  /// Placement stops after this many consecutive rejected candidates.
  int rejection_budget = 10000;
  /// Return a single nucleus instead of throwing when no second one fits.
  bool allow_single = false;
};

/// Random sequential placement in a periodic cell: a candidate is rejected when its
/// minimum-image distance to an accepted nucleus is below l_min.
/// Throws GeometryError("degenerate cell") when fewer than two nuclei fit.
std::vector<Vec3> generate_periodic_nuclei(const Vec3& cell, int n_dim, double l_min, std::uint64_t seed,
                                           const NucleiOptions& options = {});

struct VoronoiOptions {
  bool allow_single = false;
};

/// Periodic Voronoi dual network of the nuclei (wrapped into the cell).
/// Every physical contact appears once; facets below 1e-12 L^2 are dropped.
DualNetwork build_voronoi_dual(const std::vector<Vec3>& nuclei, const Vec3& cell, int n_dim,
                               const VoronoiOptions& options = {});

/// Voronoi network of the generators restricted to the box [0, extent]. Box faces
/// become boundary facets. Elements carry lambda0 = 1.
DualNetwork build_bounded_voronoi(const std::vector<Vec3>& generators, const Vec3& extent, int n_dim);

/// Structured periodic lattice whose facet normals are tilted by skew_angle (rad)
/// from the element directions in an alternating pattern; S* = cos(angle) S.
DualNetwork build_skewed_lattice(const Vec3& cell, int n_dim, const std::array<int, 3>& divisions,
                                 double skew_angle);

enum class BoundaryMode {
  Cut,   // elements crossing the outer boundary are removed
  Clip,  // tiled nuclei are re-tessellated inside the box
};

BoundaryMode boundary_mode_from_name(const std::string& name);

/// Tiles a periodic RVE `repetitions` times per axis into a non-periodic network.
/// Element lambda0 values are copied tile-wise. In Cut mode each removed element
/// leaves a BoundaryFacet truncated at the first plane it crosses. In Clip mode
/// elements without a counterpart in the tiled RVE, and the box facets, get the
/// mean RVE lambda0.
DualNetwork tile_full_domain(const DualNetwork& rve, const std::array<int, 3>& repetitions,
                             BoundaryMode mode = BoundaryMode::Cut);

/// Line-oriented ASCII lattice format (17 significant digits).
void export_network(const DualNetwork& network, const std::string& path);
std::string format_network(const DualNetwork& network);
DualNetwork import_network(const std::string& path);
DualNetwork parse_network(const std::string& text);

}  // namespace lathom::geometry
