#pragma once

#include <array>
#include <string>
#include <vector>

#include "lathom/numerics/types.hpp"

namespace lathom::geometry {

/// Out-of-plane thickness carried by 2D networks (m).
inline constexpr double kPlanarThickness = 1.0;

struct LatticeNode {
  int id = 0;
  Vec3 position = Vec3::Zero();
  double volume = 0.0;  // control volume W (m^3)
};

/// Transport link between two nodes across one tessellation facet.
struct ConduitElement {
  int id = 0;
  int node_p = 0;
  int node_q = 0;
  double length = 0.0;                  // h
  Vec3 direction = Vec3::UnitX();       // e_lambda, from P towards the image of Q
  Vec3 normal = Vec3::UnitX();          // facet normal o
  double area = 0.0;                    // S
  double projected_area = 0.0;          // S* = |o . e| S
  Vec3 centroid = Vec3::Zero();         // facet centroid (not persisted in lattice files)
  std::array<int, 3> image_shift{0, 0, 0};
  double lambda0 = 1.0;
};

/// Box faces of a non-periodic domain: axis * 2 + (0 = low, 1 = high).
enum class Side : int { Left = 0, Right = 1, Bottom = 2, Top = 3, Back = 4, Front = 5 };

std::string side_name(Side s);
Side side_from_name(const std::string& name);

/// Part of a control volume boundary that lies on the outer domain boundary.
/// `distance` is the length of the half link from the node to the boundary
/// along `direction`; `area` is the projected transport area of that link.
struct BoundaryFacet {
  int node = 0;
  Side side = Side::Left;
  double area = 0.0;
  double distance = 0.0;
  Vec3 direction = Vec3::UnitX();
  double lambda0 = 1.0;
};

struct DualNetwork {
  int n_dim = 2;
  bool periodic = true;
  Vec3 cell = Vec3::Ones();    // period lengths (periodic) or domain extents (tiled)
  std::vector<LatticeNode> nodes;
  std::vector<ConduitElement> elements;
  std::vector<BoundaryFacet> boundary;  // non-periodic networks only

  /// RVE or domain volume, including the planar thickness in 2D.
  double cell_volume() const;
  /// x_Q + shift * L - x_P for element e.
  Vec3 branch_vector(const ConduitElement& e) const;
};

/// Outcome of the geometric invariant checks.
struct InvariantReport {
  double max_closure = 0.0;          // max_P |sum S e| / sum S
  double fabric_error = 0.0;         // ||sum h S e(x)e - V0 I||_F / (V0 sqrt(n_dim))
  double volume_error = 0.0;         // |sum W - V0| / V0
  double max_unit_error = 0.0;       // max | ||e|| - 1 |, | ||o|| - 1 |
  double max_projection_error = 0.0; // max |S* - |o.e| S| / S
  double max_branch_error = 0.0;     // max |h e - branch| / L
  bool parallel = true;              // o || e for every element
  bool closure_ok(double tol = 1e-9) const { return max_closure <= tol; }
  bool fabric_ok(double tol = 1e-9) const { return fabric_error <= tol; }
  bool volume_ok(double tol = 1e-9) const { return volume_error <= tol; }
};

InvariantReport check_invariants(const DualNetwork& network);

/// Throws GeometryError naming the offending node or element if a type invariant fails.
void validate(const DualNetwork& network);

/// Number of connected components of the element graph (self links ignored).
std::vector<std::vector<int>> connected_components(const DualNetwork& network);

}  // namespace lathom::geometry
