#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lathom/numerics/types.hpp"

namespace lathom::macro {

/// 2D mesh of 4-node bilinear quadrilaterals (counter-clockwise) with thickness.
struct MacroMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 4>> elements;
  std::vector<double> thickness;  // per element (m)
  std::map<std::string, std::vector<int>> node_sets;

  /// Tensor-product mesh on breakpoints xs, ys with node sets left, right, bottom, top.
  static MacroMesh structured(const std::vector<double>& xs, const std::vector<double>& ys, double thickness = 1.0);

  /// Throws Error if an element has a non-positive Jacobian determinant at a Gauss point.
  void validate() const;
  const std::vector<int>& node_set(const std::string& name) const;
  std::size_t node_count() const { return nodes.size(); }
};

/// Bilinear shape functions and reference derivatives at (xi, eta) in [-1, 1]^2.
std::array<double, 4> shape_functions(const Vec2& xi);
std::array<Vec2, 4> shape_derivatives(const Vec2& xi);

struct IntegrationPoint {
  int element = 0;
  Vec2 x = Vec2::Zero();
  double weight = 0.0;             // Gauss weight * det J * thickness
  std::array<double, 4> N{};
  std::array<Vec2, 4> dN{};        // physical gradients
};

/// 2 x 2 Gauss points, element-major.
std::vector<IntegrationPoint> integration_points(const MacroMesh& mesh);

struct PointLocation {
  int element = 0;
  Vec2 xi = Vec2::Zero();
};

/// Element and reference coordinates containing x (inverse bilinear map).
std::optional<PointLocation> locate(const MacroMesh& mesh, const Vec2& x);

/// Finite-element interpolation of field `field` of an interleaved nodal vector.
double interpolate(const MacroMesh& mesh, const VectorX& u, int fields, int field, const Vec2& x);

/// Lumped L2 projection of integration-point values onto the nodes.
VectorX project_to_nodes(const MacroMesh& mesh, const std::vector<IntegrationPoint>& ips,
                         const std::vector<double>& values);

}  // namespace lathom::macro
