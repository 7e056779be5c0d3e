#include "lathom/fullmodel/full.hpp"

#include <algorithm>
#include <cmath>

namespace lathom::fullmodel {

using geometry::Side;
using Trip = Eigen::Triplet<double>;

DirichletMode dirichlet_mode_from_name(const std::string& name) {
  if (name == "nodes") return DirichletMode::Nodes;
  if (name == "facets") return DirichletMode::Facets;
  throw ConfigError("unknown Dirichlet mode '" + name + "' (expected nodes or facets)");
}

std::vector<int> boundary_nodes(const geometry::DualNetwork& network, Side side) {
  std::vector<int> nodes;
  for (const auto& f : network.boundary)
    if (f.side == side) nodes.push_back(f.node);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

NetworkProblem::NetworkProblem(const geometry::DualNetwork& network, int fields, std::vector<SideCondition> conditions,
                               DirichletMode mode)
    : network_(network), fields_(fields), conditions_(std::move(conditions)), mode_(mode) {
  if (network_.periodic) throw Error("full model needs a non-periodic (tiled) network");
  if (fields_ != 1 && fields_ != 2) throw Error("full model supports one or two fields");
  for (const auto& c : conditions_) {
    if (c.field < 0 || c.field >= fields_) throw Error("boundary condition field out of range");
    if (boundary_nodes(network_, c.side).empty())
      throw Error("no boundary facets on side '" + geometry::side_name(c.side) + "'");
    if (mode_ == DirichletMode::Facets && std::find(plates_.begin(), plates_.end(), c.side) == plates_.end())
      plates_.push_back(c.side);
  }
  const int n = node_count();
  std::vector<char> linked(n, 0);
  for (const auto& e : network_.elements) {
    if (e.node_p == e.node_q) continue;
    links_.push_back({e.node_p, e.node_q, e.lambda0 * e.projected_area / e.length, {true, true}});
    linked[e.node_p] = linked[e.node_q] = 1;
  }
  if (mode_ == DirichletMode::Facets)
    for (const auto& f : network_.boundary) {
      const auto it = std::find(plates_.begin(), plates_.end(), f.side);
      if (it == plates_.end()) continue;
      Link l{f.node, n + static_cast<int>(it - plates_.begin()), f.lambda0 * f.area / f.distance, {false, false}};
      for (const auto& c : conditions_)
        if (c.side == f.side) l.field_active[c.field] = true;
      links_.push_back(l);
      linked[f.node] = 1;
    }
  std::vector<char> fixed(n, 0);
  if (mode_ == DirichletMode::Nodes)
    for (const auto& c : conditions_)
      for (int node : boundary_nodes(network_, c.side)) fixed[node] = 1;
  for (int i = 0; i < n; ++i)
    if (!linked[i] && !fixed[i])
      throw Error("full model: node " + std::to_string(i) + " has no element and no Dirichlet condition");
}

std::vector<numerics::PrescribedDof> NetworkProblem::prescribed() const {
  std::vector<numerics::PrescribedDof> out;
  if (mode_ == DirichletMode::Nodes) {
    for (const auto& c : conditions_)
      for (int node : boundary_nodes(network_, c.side)) out.push_back({node * fields_ + c.field, c.value});
    return out;
  }
  for (std::size_t k = 0; k < plates_.size(); ++k)
    for (int f = 0; f < fields_; ++f) {
      const int dof = (node_count() + static_cast<int>(k)) * fields_ + f;
      numerics::TimeFunction value = numerics::TimeFunction::constant(0.0);
      for (const auto& c : conditions_)
        if (c.side == plates_[k] && c.field == f) value = c.value;
      out.push_back({dof, value});
    }
  return out;
}

double NetworkProblem::side_flux(Side side, int field, const VectorX& residual) const {
  if (mode_ == DirichletMode::Facets) {
    const auto it = std::find(plates_.begin(), plates_.end(), side);
    if (it == plates_.end()) throw Error("side '" + geometry::side_name(side) + "' carries no Dirichlet condition");
    return residual[(node_count() + static_cast<int>(it - plates_.begin())) * fields_ + field];
  }
  bool prescribed = false;
  for (const auto& c : conditions_) prescribed |= c.side == side && c.field == field;
  if (!prescribed) throw Error("side '" + geometry::side_name(side) + "' carries no Dirichlet condition");
  double sum = 0.0;
  for (int node : boundary_nodes(network_, side)) sum += residual[node * fields_ + field];
  return sum;
}

VectorX NetworkProblem::node_values(const VectorX& u, int field) const {
  VectorX v(node_count());
  for (int i = 0; i < node_count(); ++i) v[i] = u[i * fields_ + field];
  return v;
}

VectorX NetworkProblem::uniform_state(const std::vector<double>& values) const {
  VectorX u(size());
  for (int i = 0; i < size(); ++i) u[i] = values.at(static_cast<std::size_t>(i % fields_));
  return u;
}

FullPressureProblem::FullPressureProblem(const geometry::DualNetwork& network, constitutive::PermeabilityModel model,
                                         constitutive::CapacitySource storage, std::vector<SideCondition> conditions,
                                         DirichletMode mode)
    : NetworkProblem(network, 1, std::move(conditions), mode), model_(model), storage_(storage) {}

void FullPressureProblem::assemble(const VectorX& u, const VectorX& u_prev, double dt, VectorX& residual,
                                   Eigen::SparseMatrix<double>* jacobian) {
  const int n = size();
  residual = VectorX::Zero(n);
  std::vector<Trip> trips;
  if (jacobian) trips.reserve(4 * links().size() + n);
  for (int i = 0; i < node_count(); ++i) {
    const double W = network().nodes[i].volume, p = u[i];
    double r = -W * storage_.source(p), d = -W * storage_.source_derivative(p);
    if (dt > 0.0) {
      const double rate = (p - u_prev[i]) / dt;
      r += W * storage_.capacity(p) * rate;
      d += W * (storage_.capacity_derivative(p) * rate + storage_.capacity(p) / dt);
    }
    residual[i] += r;
    if (jacobian && d != 0.0) trips.emplace_back(i, i, d);
  }
  for (const auto& l : links()) {
    if (!l.field_active[0]) continue;
    const double delta = u[l.q] - u[l.p], mean = 0.5 * (u[l.p] + u[l.q]);
    const double kr = model_.relative(mean), dkr = model_.relative_derivative(mean);
    const double out = -l.factor * kr * delta;  // leaving p towards q
    residual[l.p] += out;
    residual[l.q] -= out;
    if (!jacobian) continue;
    const double dp = -l.factor * (0.5 * dkr * delta - kr);
    const double dq = -l.factor * (0.5 * dkr * delta + kr);
    trips.emplace_back(l.p, l.p, dp);
    trips.emplace_back(l.p, l.q, dq);
    trips.emplace_back(l.q, l.p, -dp);
    trips.emplace_back(l.q, l.q, -dq);
  }
  if (!residual.allFinite()) throw SolverError("diverged state: non-finite residual");
  if (jacobian) {
    jacobian->resize(n, n);
    jacobian->setFromTriplets(trips.begin(), trips.end());
  }
}

FullHtcProblem::FullHtcProblem(const geometry::DualNetwork& network, constitutive::HtcParams params,
                               std::vector<SideCondition> conditions, DirichletMode mode)
    : NetworkProblem(network, 2, std::move(conditions), mode), params_(params), states_(network.nodes.size()) {}

void FullHtcProblem::assemble(const VectorX& u, const VectorX& u_prev, double dt, VectorX& residual,
                              Eigen::SparseMatrix<double>* jacobian) {
  if (!(dt > 0.0)) throw Error("HTC problem is transient only");
  const int n = size();
  residual = VectorX::Zero(n);
  std::vector<Trip> trips;
  if (jacobian) trips.reserve(12 * links().size() + 4 * node_count());
  for (int i = 0; i < node_count(); ++i) {
    const double W = network().nodes[i].volume;
    const double H = u[2 * i], T = u[2 * i + 1];
    const auto pr = constitutive::htc_point_response(H, T, states_[i], dt, params_);
    const double rateH = (H - u_prev[2 * i]) / dt, rateT = (T - u_prev[2 * i + 1]) / dt;
    residual[2 * i] += W * (pr.cap_h * rateH + pr.sink_h);
    residual[2 * i + 1] += W * (pr.cap_t * rateT - pr.source_t);
    if (!jacobian) continue;
    trips.emplace_back(2 * i, 2 * i, W * (pr.dcap_h_dH * rateH + pr.cap_h / dt + pr.dsink_h_dH));
    trips.emplace_back(2 * i, 2 * i + 1, W * pr.dsink_h_dT);
    trips.emplace_back(2 * i + 1, 2 * i, -W * pr.dsource_t_dH);
    trips.emplace_back(2 * i + 1, 2 * i + 1, W * (pr.cap_t / dt - pr.dsource_t_dT));
  }
  const double kappa = params_.kappa;
  for (const auto& l : links()) {
    const int P = l.p, Q = l.q;
    if (l.field_active[0]) {
      const double delta = u[2 * Q] - u[2 * P];
      // a plate without a temperature condition has no meaningful T
      const double wq = l.field_active[1] ? 0.5 : 0.0;
      const auto dh = constitutive::htc_moisture_permeability(
          0.5 * (u[2 * P] + u[2 * Q]), (1.0 - wq) * u[2 * P + 1] + wq * u[2 * Q + 1], params_);
      const double out = -l.factor * dh.value * delta;
      residual[2 * P] += out;
      residual[2 * Q] -= out;
      if (jacobian) {
        const double dHp = -l.factor * (0.5 * dh.dH * delta - dh.value);
        const double dHq = -l.factor * (0.5 * dh.dH * delta + dh.value);
        const double dTp = -l.factor * (1.0 - wq) * dh.dT * delta;
        const double dTq = -l.factor * wq * dh.dT * delta;
        for (int s = 0; s < 2; ++s) {
          const int row = 2 * (s == 0 ? P : Q);
          const double sign = s == 0 ? 1.0 : -1.0;
          trips.emplace_back(row, 2 * P, sign * dHp);
          trips.emplace_back(row, 2 * Q, sign * dHq);
          trips.emplace_back(row, 2 * P + 1, sign * dTp);
          trips.emplace_back(row, 2 * Q + 1, sign * dTq);
        }
      }
    }
    if (l.field_active[1]) {
      const double k = l.factor * kappa;
      const double out = -k * (u[2 * Q + 1] - u[2 * P + 1]);
      residual[2 * P + 1] += out;
      residual[2 * Q + 1] -= out;
      if (jacobian) {
        trips.emplace_back(2 * P + 1, 2 * P + 1, k);
        trips.emplace_back(2 * P + 1, 2 * Q + 1, -k);
        trips.emplace_back(2 * Q + 1, 2 * P + 1, -k);
        trips.emplace_back(2 * Q + 1, 2 * Q + 1, k);
      }
    }
  }
  if (!residual.allFinite()) throw SolverError("diverged state: non-finite residual");
  if (jacobian) {
    jacobian->resize(n, n);
    jacobian->setFromTriplets(trips.begin(), trips.end());
  }
}

void FullHtcProblem::commit(const VectorX& u, const VectorX& /*u_prev*/, double dt) {
  for (int i = 0; i < node_count(); ++i) {
    const auto pr = constitutive::htc_point_response(u[2 * i], u[2 * i + 1], states_[i], dt, params_);
    released_heat_ += network().nodes[i].volume * pr.source_t * dt;
    states_[i] = constitutive::htc_advance(states_[i], pr, dt, params_);
  }
}

VectorX FullHtcProblem::nodal_alpha_c() const {
  VectorX a(node_count());
  for (int i = 0; i < node_count(); ++i) a[i] = states_[i].alpha_c;
  return a;
}

double FullHtcProblem::stored_heat(const VectorX& u, double t_ref) const {
  double e = 0.0;
  for (int i = 0; i < node_count(); ++i)
    e += network().nodes[i].volume * params_.rho * params_.c_t * (u[2 * i + 1] - t_ref);
  return e;
}

double interpolate_point(const geometry::DualNetwork& network, const VectorX& node_values, const Vec3& x, int k) {
  const int n = static_cast<int>(network.nodes.size());
  if (n == 0) throw Error("interpolation on an empty network");
  std::vector<std::pair<double, int>> d(n);
  for (int i = 0; i < n; ++i) d[i] = {(network.nodes[i].position - x).squaredNorm(), i};
  const int m = std::min(k, n);
  std::partial_sort(d.begin(), d.begin() + m, d.end());
  const double scale = network.cell.head(network.n_dim).squaredNorm();
  if (d[0].first <= 1e-24 * scale) return node_values[d[0].second];
  double num = 0.0, den = 0.0;
  for (int j = 0; j < m; ++j) {
    const double w = 1.0 / d[j].first;
    num += w * node_values[d[j].second];
    den += w;
  }
  return num / den;
}

std::vector<double> interpolate_line(const geometry::DualNetwork& network, const VectorX& node_values, const Vec3& a,
                                     const Vec3& b, int samples, int k) {
  if (samples < 2) throw Error("line interpolation needs at least two samples");
  std::vector<double> out;
  out.reserve(samples);
  for (int s = 0; s < samples; ++s)
    out.push_back(interpolate_point(network, node_values, a + (b - a) * (static_cast<double>(s) / (samples - 1)), k));
  return out;
}

}  // namespace lathom::fullmodel
