#include "convex_cell.hpp"

#include <algorithm>
#include <cmath>

namespace lathom::geometry::detail {
namespace {

constexpr double kRelEps = 1e-12;

long box_label(int side) { return -1 - side; }

}  // namespace

// ---------------------------------------------------------------------------
// 2D

ConvexCell2D::ConvexCell2D(const Vec3& lo, const Vec3& hi)
    : vertices_{{lo.x(), lo.y()}, {hi.x(), lo.y()}, {hi.x(), hi.y()}, {lo.x(), hi.y()}},
      labels_{box_label(2), box_label(1), box_label(3), box_label(0)},
      scale_((hi - lo).head<2>().maxCoeff()) {}

bool ConvexCell2D::clip(const Vec3& normal, double offset, long label) {
  const Vec2 n = normal.head<2>();
  const double eps = kRelEps * scale_;
  const std::size_t m = vertices_.size();
  std::vector<double> d(m);
  bool any_out = false;
  for (std::size_t i = 0; i < m; ++i) {
    d[i] = n.dot(vertices_[i]) - offset;
    any_out |= d[i] > eps;
  }
  if (!any_out) return true;

  std::vector<Vec2> out;
  std::vector<long> out_labels;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = (i + 1) % m;
    const bool in_a = d[i] <= eps, in_b = d[j] <= eps;
    if (in_a) {
      out.push_back(vertices_[i]);
      out_labels.push_back(labels_[i]);
      if (!in_b) {
        // leaving: the new edge starts at the exit point unless a sits on the line
        if (d[i] < -eps) {
          const double t = d[i] / (d[i] - d[j]);
          out.push_back(vertices_[i] + t * (vertices_[j] - vertices_[i]));
          out_labels.push_back(label);
        } else {
          out_labels.back() = label;
        }
      }
    } else if (in_b) {
      if (d[j] < -eps) {
        const double t = d[i] / (d[i] - d[j]);
        out.push_back(vertices_[i] + t * (vertices_[j] - vertices_[i]));
        out_labels.push_back(labels_[i]);
      }
    }
  }
  vertices_ = std::move(out);
  labels_ = std::move(out_labels);
  return vertices_.size() >= 3;
}

double ConvexCell2D::max_radius_squared() const {
  double r = 0.0;
  for (const auto& v : vertices_) r = std::max(r, v.squaredNorm());
  return r;
}

double ConvexCell2D::measure() const {
  double a = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vec2& p = vertices_[i];
    const Vec2& q = vertices_[(i + 1) % vertices_.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(a);
}

std::vector<CellFace> ConvexCell2D::faces() const {
  std::vector<CellFace> result;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vec2& p = vertices_[i];
    const Vec2& q = vertices_[(i + 1) % vertices_.size()];
    const Vec2 edge = q - p;
    const double len = edge.norm();
    CellFace f;
    f.label = labels_[i];
    f.area = len;
    f.centroid = Vec3(0.5 * (p.x() + q.x()), 0.5 * (p.y() + q.y()), 0.0);
    f.distance = len > 0.0 ? std::abs(p.x() * edge.y() - p.y() * edge.x()) / len : 0.0;
    result.push_back(f);
  }
  return result;
}

// ---------------------------------------------------------------------------
// 3D

ConvexCell3D::ConvexCell3D(const Vec3& lo, const Vec3& hi) : scale_((hi - lo).maxCoeff()) {
  const double x0 = lo.x(), y0 = lo.y(), z0 = lo.z(), x1 = hi.x(), y1 = hi.y(), z1 = hi.z();
  faces_ = {
      {{{x0, y0, z0}, {x0, y0, z1}, {x0, y1, z1}, {x0, y1, z0}}, box_label(0), -Vec3::UnitX()},
      {{{x1, y0, z0}, {x1, y1, z0}, {x1, y1, z1}, {x1, y0, z1}}, box_label(1), Vec3::UnitX()},
      {{{x0, y0, z0}, {x1, y0, z0}, {x1, y0, z1}, {x0, y0, z1}}, box_label(2), -Vec3::UnitY()},
      {{{x0, y1, z0}, {x0, y1, z1}, {x1, y1, z1}, {x1, y1, z0}}, box_label(3), Vec3::UnitY()},
      {{{x0, y0, z0}, {x0, y1, z0}, {x1, y1, z0}, {x1, y0, z0}}, box_label(4), -Vec3::UnitZ()},
      {{{x0, y0, z1}, {x1, y0, z1}, {x1, y1, z1}, {x0, y1, z1}}, box_label(5), Vec3::UnitZ()},
  };
}

bool ConvexCell3D::clip(const Vec3& normal, double offset, long label) {
  const double eps = kRelEps * scale_;
  bool any_out = false;
  for (const auto& f : faces_) {
    for (const auto& v : f.vertices)
      if (normal.dot(v) - offset > eps) {
        any_out = true;
        break;
      }
    if (any_out) break;
  }
  if (!any_out) return true;

  std::vector<Face> kept;
  std::vector<Vec3> cap;
  for (const auto& f : faces_) {
    const std::size_t m = f.vertices.size();
    std::vector<double> d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = normal.dot(f.vertices[i]) - offset;
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = (i + 1) % m;
      const Vec3& a = f.vertices[i];
      const Vec3& b = f.vertices[j];
      if (d[i] <= eps) {
        out.push_back(a);
        if (d[i] >= -eps) cap.push_back(a);
      }
      if ((d[i] < -eps && d[j] > eps) || (d[i] > eps && d[j] < -eps)) {
        const double t = d[i] / (d[i] - d[j]);
        const Vec3 p = a + t * (b - a);
        out.push_back(p);
        cap.push_back(p);
      }
    }
    if (out.size() >= 3) kept.push_back({std::move(out), f.label, f.normal});
  }

  std::vector<Vec3> unique;
  const double tol2 = (1e-10 * scale_) * (1e-10 * scale_);
  for (const auto& p : cap)
    if (std::none_of(unique.begin(), unique.end(), [&](const Vec3& q) { return (p - q).squaredNorm() <= tol2; }))
      unique.push_back(p);
  if (unique.size() >= 3) {
    Vec3 c = Vec3::Zero();
    for (const auto& p : unique) c += p;
    c /= static_cast<double>(unique.size());
    int axis = 0;
    for (int k = 1; k < 3; ++k)
      if (std::abs(normal[k]) < std::abs(normal[axis])) axis = k;
    const Vec3 u = normal.cross(Vec3::Unit(axis)).normalized();
    const Vec3 w = normal.cross(u);
    std::sort(unique.begin(), unique.end(), [&](const Vec3& p, const Vec3& q) {
      return std::atan2((p - c).dot(w), (p - c).dot(u)) < std::atan2((q - c).dot(w), (q - c).dot(u));
    });
    kept.push_back({std::move(unique), label, normal});
  }
  faces_ = std::move(kept);
  return faces_.size() >= 4;
}

double ConvexCell3D::max_radius_squared() const {
  double r = 0.0;
  for (const auto& f : faces_)
    for (const auto& v : f.vertices) r = std::max(r, v.squaredNorm());
  return r;
}

std::vector<CellFace> ConvexCell3D::faces() const {
  std::vector<CellFace> result;
  for (const auto& f : faces_) {
    const Vec3& v0 = f.vertices[0];
    Vec3 area_vec = Vec3::Zero();
    Vec3 weighted = Vec3::Zero();
    double area = 0.0;
    for (std::size_t i = 1; i + 1 < f.vertices.size(); ++i) {
      const Vec3 cr = (f.vertices[i] - v0).cross(f.vertices[i + 1] - v0);
      const double a = 0.5 * cr.norm();
      area_vec += 0.5 * cr;
      area += a;
      weighted += a * (v0 + f.vertices[i] + f.vertices[i + 1]) / 3.0;
    }
    CellFace cf;
    cf.label = f.label;
    cf.area = area_vec.norm();
    cf.centroid = area > 0.0 ? Vec3(weighted / area) : v0;
    cf.distance = std::abs(f.normal.dot(v0));
    result.push_back(cf);
  }
  return result;
}

double ConvexCell3D::measure() const {
  double v = 0.0;
  for (const auto& f : faces()) v += f.area * f.distance / 3.0;
  return v;
}

}  // namespace lathom::geometry::detail
