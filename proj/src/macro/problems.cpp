#include "lathom/macro/problems.hpp"

#include <cmath>

namespace lathom::macro {
namespace {

using Trip = Eigen::Triplet<double>;

Vec3 lift(const Vec2& a) { return Vec3(a.x(), a.y(), 0.0); }

void require_finite(const VectorX& r) {
  if (!r.allFinite()) throw SolverError("diverged state: non-finite residual");
}

VectorX nodal_measure(const MacroMesh& mesh, const std::vector<IntegrationPoint>& ips) {
  VectorX m = VectorX::Zero(static_cast<long>(mesh.nodes.size()));
  for (const auto& ip : ips)
    for (int a = 0; a < 4; ++a) m[mesh.elements[ip.element][a]] += ip.N[a] * ip.weight;
  return m;
}

}  // namespace

FastFluxPath::FastFluxPath(const Mat2& lambda, constitutive::PermeabilityModel model)
    : lambda_(lambda), model_(model) {}

FastFluxPath::FastFluxPath(const rve::EffectiveTensor& tensor, constitutive::PermeabilityModel model)
    : lambda_(tensor.lambda.topLeftCorner<2, 2>()), model_(model) {
  if (tensor.n_dim != 2) throw Error("macro: the fast path needs a 2D effective tensor");
}

FluxResponse FastFluxPath::evaluate(double p, const Vec2& a) const {
  const double kr = model_.relative(p);
  const double dkr = model_.relative_derivative(p);
  FluxResponse r;
  r.df_da = -kr * lambda_;
  r.f = r.df_da * a;
  r.df_dp = -dkr * (lambda_ * a);
  return r;
}

SlowFluxPath::SlowFluxPath(std::shared_ptr<const geometry::DualNetwork> rve, constitutive::PermeabilityModel model,
                           std::uint64_t pin_seed)
    : rve_(std::move(rve)), model_(model), pin_seed_(pin_seed) {
  if (!rve_ || rve_->n_dim != 2 || !rve_->periodic) throw Error("macro: the slow path needs a periodic 2D RVE");
}

Vec2 SlowFluxPath::flux(double p, const Vec2& a, Mat2* tangent) const {
  const double kr = model_.relative(p);
  std::vector<double> lambda(rve_->elements.size());
  for (std::size_t e = 0; e < lambda.size(); ++e) lambda[e] = rve_->elements[e].lambda0 * kr;
  const auto sys = rve::assemble(*rve_, lambda, pin_seed_);
  const Vec2 f = rve::solve_eigen_gradient(sys, lift(a)).f.head<2>();
  if (tangent)
    for (int i = 0; i < 2; ++i) tangent->col(i) = rve::solve_eigen_gradient(sys, Vec3::Unit(i)).f.head<2>();
  return f;
}

FluxResponse SlowFluxPath::evaluate(double p, const Vec2& a) const {
  FluxResponse r;
  r.f = flux(p, a, &r.df_da);
  const double h = 1e-6 * std::max(std::abs(p), 1.0);
  if (model_.variant == constitutive::PermeabilityVariant::Linear) return r;
  const double lo = std::max(p - h, 0.0);
  r.df_dp = (flux(p + h, a, nullptr) - flux(lo, a, nullptr)) / (p + h - lo);
  return r;
}

PressureProblem::PressureProblem(const MacroMesh& mesh, std::shared_ptr<const FluxPath> path,
                                 constitutive::CapacitySource storage)
    : PressureProblem(mesh, std::vector<std::shared_ptr<const FluxPath>>(4 * mesh.elements.size(), path),
                      storage) {}

PressureProblem::PressureProblem(const MacroMesh& mesh, std::vector<std::shared_ptr<const FluxPath>> paths,
                                 constitutive::CapacitySource storage)
    : mesh_(mesh), ips_(integration_points(mesh)), paths_(std::move(paths)), storage_(storage) {
  if (paths_.size() != ips_.size()) throw Error("macro: one flux path per integration point required");
  for (const auto& p : paths_)
    if (!p) throw Error("macro: integration point without a response path");
  lumped_ = nodal_measure(mesh_, ips_);
}

void PressureProblem::assemble(const VectorX& u, const VectorX& u_prev, double dt, VectorX& residual,
                               Eigen::SparseMatrix<double>* jacobian) {
  const int n = size();
  residual = VectorX::Zero(n);
  std::vector<Trip> trips;
  if (jacobian) trips.reserve(16 * ips_.size() + n);

  for (int i = 0; i < n; ++i) {
    const double p = u[i];
    double r = -lumped_[i] * storage_.source(p);
    double d = -lumped_[i] * storage_.source_derivative(p);
    if (dt > 0.0) {
      const double rate = (p - u_prev[i]) / dt;
      r += lumped_[i] * storage_.capacity(p) * rate;
      d += lumped_[i] * (storage_.capacity_derivative(p) * rate + storage_.capacity(p) / dt);
    }
    residual[i] += r;
    if (jacobian && d != 0.0) trips.emplace_back(i, i, d);
  }

  for (std::size_t k = 0; k < ips_.size(); ++k) {
    const auto& ip = ips_[k];
    const auto& nodes = mesh_.elements[ip.element];
    double p = 0.0;
    Vec2 a = Vec2::Zero();
    for (int b = 0; b < 4; ++b) {
      p += ip.N[b] * u[nodes[b]];
      a += ip.dN[b] * u[nodes[b]];
    }
    const FluxResponse fr = paths_[k]->evaluate(p, a);
    for (int i = 0; i < 4; ++i) {
      residual[nodes[i]] -= ip.weight * ip.dN[i].dot(fr.f);
      if (body_) residual[nodes[i]] -= ip.weight * ip.N[i] * body_(ip.x);
      if (!jacobian) continue;
      for (int j = 0; j < 4; ++j) {
        const double v = -ip.weight * ip.dN[i].dot(fr.df_da * ip.dN[j] + fr.df_dp * ip.N[j]);
        trips.emplace_back(nodes[i], nodes[j], v);
      }
    }
  }
  require_finite(residual);
  if (jacobian) {
    jacobian->resize(n, n);
    jacobian->setFromTriplets(trips.begin(), trips.end());
  }
}

HtcProblem::HtcProblem(const MacroMesh& mesh, const Mat2& geometric_tensor, constitutive::HtcParams params)
    : mesh_(mesh), ips_(integration_points(mesh)), tensor_(geometric_tensor), params_(params),
      states_(ips_.size()) {
  lumped_ = nodal_measure(mesh_, ips_);
}

void HtcProblem::assemble(const VectorX& u, const VectorX& u_prev, double dt, VectorX& residual,
                          Eigen::SparseMatrix<double>* jacobian) {
  if (!(dt > 0.0)) throw Error("HTC problem is transient only");
  const int n = size();
  residual = VectorX::Zero(n);
  std::vector<Trip> trips;
  if (jacobian) trips.reserve(64 * ips_.size());
  const double kappa = params_.kappa;

  for (std::size_t k = 0; k < ips_.size(); ++k) {
    const auto& ip = ips_[k];
    const auto& nodes = mesh_.elements[ip.element];
    double H = 0.0, T = 0.0;
    Vec2 gH = Vec2::Zero(), gT = Vec2::Zero();
    for (int b = 0; b < 4; ++b) {
      H += ip.N[b] * u[2 * nodes[b]];
      T += ip.N[b] * u[2 * nodes[b] + 1];
      gH += ip.dN[b] * u[2 * nodes[b]];
      gT += ip.dN[b] * u[2 * nodes[b] + 1];
    }
    const auto pr = constitutive::htc_point_response(H, T, states_[k], dt, params_);
    const auto dh = constitutive::htc_moisture_permeability(H, T, params_);
    const Vec2 GgH = tensor_ * gH, GgT = tensor_ * gT;
    const Vec2 fH = -dh.value * GgH;
    const Vec2 fT = -kappa * GgT;

    for (int i = 0; i < 4; ++i) {
      const int I = nodes[i];
      const double w = ip.weight;
      const double rateH = (u[2 * I] - u_prev[2 * I]) / dt;
      const double rateT = (u[2 * I + 1] - u_prev[2 * I + 1]) / dt;
      residual[2 * I] += w * (ip.N[i] * (pr.cap_h * rateH + pr.sink_h) - ip.dN[i].dot(fH));
      residual[2 * I + 1] += w * (ip.N[i] * (pr.cap_t * rateT - pr.source_t) - ip.dN[i].dot(fT));
      if (!jacobian) continue;
      trips.emplace_back(2 * I, 2 * I, w * ip.N[i] * pr.cap_h / dt);
      trips.emplace_back(2 * I + 1, 2 * I + 1, w * ip.N[i] * pr.cap_t / dt);
      for (int j = 0; j < 4; ++j) {
        const int J = nodes[j];
        const double Nj = ip.N[j];
        const double HH = ip.N[i] * (pr.dcap_h_dH * Nj * rateH + pr.dsink_h_dH * Nj) +
                          ip.dN[i].dot(dh.value * tensor_ * ip.dN[j] + dh.dH * Nj * GgH);
        const double HT = ip.N[i] * pr.dsink_h_dT * Nj + ip.dN[i].dot(dh.dT * Nj * GgH);
        const double TH = -ip.N[i] * pr.dsource_t_dH * Nj;
        const double TT = -ip.N[i] * pr.dsource_t_dT * Nj + ip.dN[i].dot(kappa * tensor_ * ip.dN[j]);
        trips.emplace_back(2 * I, 2 * J, w * HH);
        trips.emplace_back(2 * I, 2 * J + 1, w * HT);
        trips.emplace_back(2 * I + 1, 2 * J, w * TH);
        trips.emplace_back(2 * I + 1, 2 * J + 1, w * TT);
      }
    }
  }
  require_finite(residual);
  if (jacobian) {
    jacobian->resize(n, n);
    jacobian->setFromTriplets(trips.begin(), trips.end());
  }
}

void HtcProblem::commit(const VectorX& u, const VectorX& /*u_prev*/, double dt) {
  for (std::size_t k = 0; k < ips_.size(); ++k) {
    const auto& ip = ips_[k];
    const auto& nodes = mesh_.elements[ip.element];
    double H = 0.0, T = 0.0;
    for (int b = 0; b < 4; ++b) {
      H += ip.N[b] * u[2 * nodes[b]];
      T += ip.N[b] * u[2 * nodes[b] + 1];
    }
    const auto pr = constitutive::htc_point_response(H, T, states_[k], dt, params_);
    released_heat_ += ip.weight * pr.source_t * dt;
    states_[k] = constitutive::htc_advance(states_[k], pr, dt, params_);
  }
}

VectorX HtcProblem::nodal_alpha_c() const {
  std::vector<double> a(states_.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = states_[k].alpha_c;
  return project_to_nodes(mesh_, ips_, a);
}

double HtcProblem::stored_heat(const VectorX& u, double t_ref) const {
  double e = 0.0;
  for (long i = 0; i < lumped_.size(); ++i) e += lumped_[i] * params_.rho * params_.c_t * (u[2 * i + 1] - t_ref);
  return e;
}

double boundary_flux(const MacroMesh& mesh, const std::string& set, const VectorX& residual,
                     const std::vector<char>& fixed, int fields, int field) {
  double sum = 0.0;
  for (int node : mesh.node_set(set)) {
    const int dof = node * fields + field;
    if (!fixed[dof]) throw Error("boundary flux: node set '" + set + "' is not on a Dirichlet boundary");
    sum += residual[dof];
  }
  return sum;
}

std::vector<numerics::PrescribedDof> prescribe(const MacroMesh& mesh, const std::string& set, int fields, int field,
                                               const numerics::TimeFunction& value) {
  std::vector<numerics::PrescribedDof> out;
  for (int node : mesh.node_set(set)) out.push_back({node * fields + field, value});
  return out;
}

std::vector<double> line_profile(const MacroMesh& mesh, const VectorX& u, int fields, int field, const Vec2& a,
                                 const Vec2& b, int samples) {
  if (samples < 2) throw Error("line profile needs at least two samples");
  std::vector<double> out;
  out.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    const double t = static_cast<double>(s) / (samples - 1);
    out.push_back(interpolate(mesh, u, fields, field, a + t * (b - a)));
  }
  return out;
}

}  // namespace lathom::macro
