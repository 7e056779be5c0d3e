#pragma once

// Convex cells in generator-relative coordinates, clipped by half-spaces.
// Face labels >= 0 identify neighbour candidates; negative labels are box sides.

#include <vector>

#include "lathom/numerics/types.hpp"

namespace lathom::geometry::detail {

struct CellFace {
  long label = 0;
  double area = 0.0;          // edge length (2D) or polygon area (3D)
  Vec3 centroid = Vec3::Zero();
  double distance = 0.0;      // from the generator to the face plane
};

class ConvexCell2D {
 public:
  /// Axis-aligned box [lo, hi] with edge labels -1 - side.
  ConvexCell2D(const Vec3& lo, const Vec3& hi);
  /// Keeps n.y <= offset; returns false if the cell became empty.
  bool clip(const Vec3& normal, double offset, long label);
  double max_radius_squared() const;
  double measure() const;
  std::vector<CellFace> faces() const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<long> labels_;  // label of edge i -> i+1
  double scale_;
};

class ConvexCell3D {
 public:
  ConvexCell3D(const Vec3& lo, const Vec3& hi);
  bool clip(const Vec3& normal, double offset, long label);
  double max_radius_squared() const;
  double measure() const;
  std::vector<CellFace> faces() const;

 private:
  struct Face {
    std::vector<Vec3> vertices;
    long label;
    Vec3 normal;
  };
  std::vector<Face> faces_;
  double scale_;
};

}  // namespace lathom::geometry::detail
