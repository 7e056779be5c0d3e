#include "lathom/numerics/stepper.hpp"

#include <algorithm>
#include <sstream>

namespace lathom::numerics {

TimeFunction::TimeFunction(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error("time function needs at least one breakpoint");
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (!(points_[i].first > points_[i - 1].first)) throw Error("time function breakpoints must be strictly increasing");
}

double TimeFunction::operator()(double t) const {
  if (t <= points_.front().first) return points_.front().second;
  if (t >= points_.back().first) return points_.back().second;
  const auto it = std::upper_bound(points_.begin(), points_.end(), t,
                                   [](double v, const std::pair<double, double>& p) { return v < p.first; });
  const auto& [t1, v1] = *it;
  const auto& [t0, v0] = *(it - 1);
  return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

BackwardEuler::BackwardEuler(TransientProblem& problem, VectorX u0, std::vector<PrescribedDof> prescribed,
                             StepperOptions options, double t0)
    : problem_(problem),
      u_(std::move(u0)),
      prescribed_(std::move(prescribed)),
      fixed_(static_cast<std::size_t>(problem.size()), 0),
      options_(std::move(options)),
      time_(t0) {
  if (u_.size() != problem_.size()) throw Error("initial state has the wrong size");
  options_.newton.fields = problem_.fields();
  for (const auto& p : prescribed_) {
    if (p.dof < 0 || p.dof >= problem_.size()) throw Error("prescribed DOF out of range");
    fixed_[static_cast<std::size_t>(p.dof)] = 1;
  }
  residual_ = VectorX::Zero(u_.size());
}

bool BackwardEuler::try_step(double t0, double t1) {
  VectorX u = u_;
  for (const auto& p : prescribed_) u[p.dof] = p.value(t1);
  const double dt = options_.steady ? 0.0 : t1 - t0;
  const VectorX u_prev = u_;
  AssembleFn fn = [&](const VectorX& x, VectorX& r, Eigen::SparseMatrix<double>* j) {
    problem_.assemble(x, u_prev, dt, r, j);
  };
  const auto res = newton_solve(fn, u, fixed_, options_.newton);
  if (!res.converged) return false;
  problem_.assemble(u, u_prev, dt, residual_, nullptr);
  problem_.commit(u, u_prev, dt);
  u_ = std::move(u);
  last_iterations_ += res.iterations;
  ++last_substeps_;
  return true;
}

void BackwardEuler::advance(double t1) {
  if (!(t1 > time_)) throw Error("BackwardEuler::advance: target time must exceed the current time");
  last_iterations_ = 0;
  last_substeps_ = 0;
  try {
    advance_with_halving(time_, t1, [this](double a, double b) { return try_step(a, b); }, options_.max_halvings);
  } catch (const SolverError& e) {
    std::ostringstream msg;
    msg << "step to t = " << t1 << " s: " << e.what();
    throw SolverError(msg.str());
  }
  time_ = t1;
}

}  // namespace lathom::numerics
