#pragma once

#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "lathom/numerics/newton.hpp"

namespace lathom::numerics {

/// Piecewise-linear function of time, constant beyond the first and last breakpoints.
class TimeFunction {
 public:
  TimeFunction() = default;
  /// Breakpoints (time, value) with strictly increasing times.
  explicit TimeFunction(std::vector<std::pair<double, double>> points);
  static TimeFunction constant(double value) { return TimeFunction({{0.0, value}}); }

  double operator()(double t) const;
  const std::vector<std::pair<double, double>>& points() const { return points_; }

 private:
  std::vector<std::pair<double, double>> points_{{0.0, 0.0}};
};

/// A nonlinear system advanced by Backward Euler. dt == 0 requests the steady
/// problem (no storage terms).
class TransientProblem {
 public:
  virtual ~TransientProblem() = default;
  virtual int size() const = 0;
  /// DOFs are interleaved by field (dof = node * fields + field).
  virtual int fields() const { return 1; }
  virtual void assemble(const VectorX& u, const VectorX& u_prev, double dt, VectorX& residual,
                        Eigen::SparseMatrix<double>* jacobian) = 0;
  /// Called once per accepted step, e.g. to advance internal variables.
  virtual void commit(const VectorX& /*u*/, const VectorX& /*u_prev*/, double /*dt*/) {}
};

struct PrescribedDof {
  int dof = 0;
  TimeFunction value;
};

struct StepperOptions {
  NewtonOptions newton;
  int max_halvings = 10;
  bool steady = false;
};

/// Backward Euler driver with Newton iterations and step halving on failure.
class BackwardEuler {
 public:
  BackwardEuler(TransientProblem& problem, VectorX u0, std::vector<PrescribedDof> prescribed,
                StepperOptions options, double t0 = 0.0);

  /// Advances to t1 (t1 > time()); throws SolverError after exhausting the halvings.
  void advance(double t1);

  double time() const { return time_; }
  const VectorX& state() const { return u_; }
  /// Residual at the last accepted state; at prescribed DOFs these are the reactions.
  const VectorX& residual() const { return residual_; }
  const std::vector<char>& fixed() const { return fixed_; }
  int newton_iterations() const { return last_iterations_; }
  int substeps() const { return last_substeps_; }

 private:
  bool try_step(double t0, double t1);

  TransientProblem& problem_;
  VectorX u_;
  VectorX residual_;
  std::vector<PrescribedDof> prescribed_;
  std::vector<char> fixed_;
  StepperOptions options_;
  double time_;
  int last_iterations_ = 0;
  int last_substeps_ = 0;
};

}  // namespace lathom::numerics
