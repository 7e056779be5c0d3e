#pragma once

#include <functional>
#include <vector>

#include <Eigen/SparseCore>

#include "lathom/numerics/types.hpp"

namespace lathom::numerics {

/// Fills the residual (always) and the Jacobian (when non-null) at state u.
using AssembleFn = std::function<void(const VectorX& u, VectorX& residual, Eigen::SparseMatrix<double>* jacobian)>;

struct NewtonOptions {
  double rtol = 1e-8;
  double atol = 0.0;
  /// Per-field absolute floors; overrides atol when sized to `fields`.
  std::vector<double> field_atol;
  int max_iterations = 25;
  /// DOFs are interleaved by field; convergence is checked per field block.
  int fields = 1;
};

struct NewtonResult {
  bool converged = false;
  bool diverged = false;  // non-finite residual encountered
  int iterations = 0;
  double initial_norm = 0.0;
  double final_norm = 0.0;
};

/// Full Newton iteration. DOFs flagged in `fixed` keep their current value;
/// their residual entries are reactions and serve as the convergence scale:
/// a field block converges when ||R_free|| <= rtol * max(||R0_free||, ||R_fixed||)
/// or ||R_free|| <= atol.
NewtonResult newton_solve(const AssembleFn& assemble, VectorX& u, const std::vector<char>& fixed,
                          const NewtonOptions& options);

/// Advances from t0 to t1 with `try_step`; a failed step is retried as two
/// half steps, recursively, at most `max_halvings` levels deep.
/// `try_step` must commit its state only on success.
void advance_with_halving(double t0, double t1, const std::function<bool(double, double)>& try_step,
                          int max_halvings = 10);

}  // namespace lathom::numerics
