#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lathom/constitutive/htc.hpp"
#include "lathom/constitutive/permeability.hpp"
#include "lathom/macro/mesh.hpp"
#include "lathom/numerics/stepper.hpp"
#include "lathom/rve/rve.hpp"

namespace lathom::macro {

/// Macroscopic flux and its tangents at one integration point for pressure p and gradient a.
struct FluxResponse {
  Vec2 f = Vec2::Zero();
  Mat2 df_da = Mat2::Zero();
  Vec2 df_dp = Vec2::Zero();
};

class FluxPath {
 public:
  virtual ~FluxPath() = default;
  virtual FluxResponse evaluate(double p, const Vec2& a) const = 0;
};

/// f = -kappa_r(p) Lambda a with the precomputed tensor.
class FastFluxPath final : public FluxPath {
 public:
  FastFluxPath(const Mat2& lambda, constitutive::PermeabilityModel model);
  FastFluxPath(const rve::EffectiveTensor& tensor, constitutive::PermeabilityModel model);
  FluxResponse evaluate(double p, const Vec2& a) const override;
  const Mat2& lambda() const { return lambda_; }

 private:
  Mat2 lambda_;
  constitutive::PermeabilityModel model_;
};

/// Re-assembles the RVE with lambda_e = lambda0_e kappa_r(p) at every evaluation
/// and solves it for a; df/da from the unit solves, df/dp by central differences.
class SlowFluxPath final : public FluxPath {
 public:
  SlowFluxPath(std::shared_ptr<const geometry::DualNetwork> rve, constitutive::PermeabilityModel model,
               std::uint64_t pin_seed = 0);
  FluxResponse evaluate(double p, const Vec2& a) const override;

 private:
  Vec2 flux(double p, const Vec2& a, Mat2* tangent) const;
  std::shared_ptr<const geometry::DualNetwork> rve_;
  constitutive::PermeabilityModel model_;
  std::uint64_t pin_seed_;
};

/// Single-field homogenized diffusion: c(p) p_dot + div f = q(p) + body(x), lumped storage.
/// Residual row i: m_i c(p_i)(p_i - p_n,i)/dt - int grad N_i . f - m_i q(p_i) - int N_i body.
/// At prescribed DOFs it is the inflow through the boundary (kg/s).
class PressureProblem final : public numerics::TransientProblem {
 public:
  /// One path shared by all integration points.
  PressureProblem(const MacroMesh& mesh, std::shared_ptr<const FluxPath> path,
                  constitutive::CapacitySource storage = {});
  /// One path per integration point (element-major, 4 per element).
  PressureProblem(const MacroMesh& mesh, std::vector<std::shared_ptr<const FluxPath>> paths,
                  constitutive::CapacitySource storage = {});

  void set_body_source(std::function<double(const Vec2&)> q) { body_ = std::move(q); }

  int size() const override { return static_cast<int>(mesh_.nodes.size()); }
  void assemble(const VectorX& u, const VectorX& u_prev, double dt, VectorX& residual,
                Eigen::SparseMatrix<double>* jacobian) override;

  const MacroMesh& mesh() const { return mesh_; }
  const std::vector<IntegrationPoint>& points() const { return ips_; }
  /// Lumped nodal measures m_i = int N_i.
  const VectorX& lumped_measure() const { return lumped_; }

 private:
  const MacroMesh& mesh_;
  std::vector<IntegrationPoint> ips_;
  std::vector<std::shared_ptr<const FluxPath>> paths_;
  constitutive::CapacitySource storage_;
  std::function<double(const Vec2&)> body_;
  VectorX lumped_;
};

/// Two-field hygro-thermo-chemical problem, dof = 2 node + field (0 = H, 1 = T in K).
/// Moisture flux -D_H(H, T) G grad H and heat flux -kappa G grad T, where G is the
/// RVE tensor normalized to unit mean permeability. Reaction degrees live at the
/// integration points and are lagged over each step.
class HtcProblem final : public numerics::TransientProblem {
 public:
  HtcProblem(const MacroMesh& mesh, const Mat2& geometric_tensor, constitutive::HtcParams params);

  int size() const override { return 2 * static_cast<int>(mesh_.nodes.size()); }
  int fields() const override { return 2; }
  void assemble(const VectorX& u, const VectorX& u_prev, double dt, VectorX& residual,
                Eigen::SparseMatrix<double>* jacobian) override;
  void commit(const VectorX& u, const VectorX& u_prev, double dt) override;

  const std::vector<constitutive::HtcState>& states() const { return states_; }
  /// Reaction degree of cement projected to the nodes.
  VectorX nodal_alpha_c() const;
  /// Heat released by the reactions so far (J).
  double released_heat() const { return released_heat_; }
  /// Heat stored sum m_i rho c_t (T_i - T_ref) for a nodal vector (J).
  double stored_heat(const VectorX& u, double t_ref) const;

 private:
  const MacroMesh& mesh_;
  std::vector<IntegrationPoint> ips_;
  Mat2 tensor_;
  constitutive::HtcParams params_;
  std::vector<constitutive::HtcState> states_;
  VectorX lumped_;
  double released_heat_ = 0.0;
};

/// Sum of the reactions of field `field` over a node set; throws Error if a DOF of
/// the set is not prescribed.
double boundary_flux(const MacroMesh& mesh, const std::string& set, const VectorX& residual,
                     const std::vector<char>& fixed, int fields = 1, int field = 0);

/// Prescribed DOFs of field `field` on every node of a set.
std::vector<numerics::PrescribedDof> prescribe(const MacroMesh& mesh, const std::string& set, int fields, int field,
                                               const numerics::TimeFunction& value);

/// kg/s to g/day.
inline double to_grams_per_day(double kg_per_s) { return kg_per_s * 1000.0 * 86400.0; }

/// Field values at n uniformly spaced points from a to b (endpoints included).
std::vector<double> line_profile(const MacroMesh& mesh, const VectorX& u, int fields, int field, const Vec2& a,
                                 const Vec2& b, int samples);

}  // namespace lathom::macro
