#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "lathom/numerics/types.hpp"

namespace lathom::numerics {

using Triplet = Eigen::Triplet<double>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Symmetric sparse matrix, both triangles stored in compressed rows.
class SparseSymmetric {
 public:
  SparseSymmetric() = default;

  /// Sums duplicate entries and drops exact zeros. Throws if the resulting
  /// structure or values are not symmetric (relative tolerance 1e-12).
  static SparseSymmetric from_triplets(int dimension, std::span<const Triplet> triplets);

  int dimension() const { return static_cast<int>(matrix_.rows()); }
  long nonzeros() const { return matrix_.nonZeros(); }
  const SparseMatrix& matrix() const { return matrix_; }

  VectorX multiply(const VectorX& x) const { return matrix_ * x; }
  VectorX diagonal() const { return matrix_.diagonal(); }

  /// Principal submatrix on the given (sorted, unique) indices.
  SparseSymmetric submatrix(std::span<const int> keep) const;

 private:
  explicit SparseSymmetric(SparseMatrix m) : matrix_(std::move(m)) {}
  SparseMatrix matrix_;
};

struct SolveOptions {
  double tolerance = 1e-12;
  int max_iterations = 0;          // 0 means 50 * dimension
  int dense_below = 500;           // direct dense Cholesky for smaller systems
  /// Called after every CG iteration with the current iterate.
  std::function<void(int, const VectorX&)> on_iteration;
};

struct SolveReport {
  VectorX x;
  int iterations = 0;
  bool direct = false;
  std::vector<double> residual_history;  // relative residuals, CG only
};

/// Solves A x = b for symmetric positive definite A so that ||Ax - b|| <= tol ||b||.
/// Uses a dense LLT below `dense_below` unknowns, otherwise Jacobi-preconditioned CG.
/// Throws SolverError when CG hits the iteration cap.
SolveReport solve_spd(const SparseSymmetric& a, const VectorX& b, const SolveOptions& options = {});

/// Preconditioned CG only (no dense fallback).
SolveReport conjugate_gradient(const SparseSymmetric& a, const VectorX& b, const SolveOptions& options);

/// Sparse LU for the general (unsymmetric) Newton systems. Throws SolverError if singular.
VectorX solve_general(const Eigen::SparseMatrix<double>& a, const VectorX& b);

}  // namespace lathom::numerics
