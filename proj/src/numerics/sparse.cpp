#include "lathom/numerics/sparse.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

namespace lathom::numerics {

SparseSymmetric SparseSymmetric::from_triplets(int dimension, std::span<const Triplet> triplets) {
  SparseMatrix m(dimension, dimension);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune(0.0, 0.0);
  m.makeCompressed();
  const SparseMatrix t = m.transpose();
  double scale = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  const double diff = (m - t).cwiseAbs().sum();
  if (diff > 1e-12 * scale * std::max<long>(1, m.nonZeros()))
    throw SolverError("SparseSymmetric: assembled matrix is not symmetric");
  return SparseSymmetric(std::move(m));
}

SparseSymmetric SparseSymmetric::submatrix(std::span<const int> keep) const {
  std::vector<int> map(dimension(), -1);
  for (int i = 0; i < static_cast<int>(keep.size()); ++i) map[keep[i]] = i;
  std::vector<Triplet> trips;
  trips.reserve(matrix_.nonZeros());
  for (int r = 0; r < matrix_.outerSize(); ++r) {
    if (map[r] < 0) continue;
    for (SparseMatrix::InnerIterator it(matrix_, r); it; ++it)
      if (map[it.col()] >= 0) trips.emplace_back(map[r], map[it.col()], it.value());
  }
  SparseMatrix m(static_cast<long>(keep.size()), static_cast<long>(keep.size()));
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return SparseSymmetric(std::move(m));
}

SolveReport conjugate_gradient(const SparseSymmetric& a, const VectorX& b, const SolveOptions& options) {
  const int n = a.dimension();
  SolveReport report;
  report.x = VectorX::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return report;

  const int cap = options.max_iterations > 0 ? options.max_iterations : 50 * std::max(n, 1);
  VectorX inv_diag = a.diagonal();
  for (int i = 0; i < n; ++i) inv_diag[i] = inv_diag[i] > 0.0 ? 1.0 / inv_diag[i] : 1.0;

  VectorX r = b;
  VectorX z = inv_diag.cwiseProduct(r);
  VectorX p = z;
  double rz = r.dot(z);
  for (int it = 1; it <= cap; ++it) {
    const VectorX ap = a.multiply(p);
    const double alpha = rz / p.dot(ap);
    report.x += alpha * p;
    r -= alpha * ap;
    const double rel = r.norm() / bnorm;
    report.residual_history.push_back(rel);
    report.iterations = it;
    if (options.on_iteration) options.on_iteration(it, report.x);
    if (rel <= options.tolerance) return report;
    z = inv_diag.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  std::ostringstream msg;
  msg << "conjugate gradient did not converge in " << cap << " iterations (tolerance " << options.tolerance
      << "); residual history tail:";
  const auto& h = report.residual_history;
  for (std::size_t i = h.size() > 5 ? h.size() - 5 : 0; i < h.size(); ++i) msg << ' ' << h[i];
  throw SolverError(msg.str());
}

SolveReport solve_spd(const SparseSymmetric& a, const VectorX& b, const SolveOptions& options) {
  const int n = a.dimension();
  if (n < options.dense_below) {
    SolveReport report;
    report.direct = true;
    if (n == 0) {
      report.x = VectorX(0);
      return report;
    }
    const Eigen::MatrixXd dense = Eigen::MatrixXd(a.matrix());
    Eigen::LLT<Eigen::MatrixXd> llt(dense);
    if (llt.info() != Eigen::Success) throw SolverError("solve_spd: matrix is not positive definite");
    report.x = llt.solve(b);
    return report;
  }
  return conjugate_gradient(a, b, options);
}

VectorX solve_general(const Eigen::SparseMatrix<double>& a, const VectorX& b) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw SolverError("sparse LU factorization failed: " + lu.lastErrorMessage());
  VectorX x = lu.solve(b);
  if (lu.info() != Eigen::Success) throw SolverError("sparse LU solve failed");
  return x;
}

}  // namespace lathom::numerics
