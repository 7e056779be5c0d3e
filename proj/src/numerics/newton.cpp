#include "lathom/numerics/newton.hpp"

#include <cmath>
#include <sstream>

#include "lathom/numerics/sparse.hpp"

namespace lathom::numerics {
namespace {

struct BlockNorms {
  std::vector<double> free, fixed;
  bool finite = true;
};

BlockNorms block_norms(const VectorX& r, const std::vector<char>& fixed, int fields) {
  BlockNorms n{std::vector<double>(fields, 0.0), std::vector<double>(fields, 0.0)};
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double v = r[i];
    if (!std::isfinite(v)) n.finite = false;
    (fixed[i] ? n.fixed : n.free)[i % fields] += v * v;
  }
  for (auto& v : n.free) v = std::sqrt(v);
  for (auto& v : n.fixed) v = std::sqrt(v);
  return n;
}

double total(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

NewtonResult newton_solve(const AssembleFn& assemble, VectorX& u, const std::vector<char>& fixed,
                          const NewtonOptions& options) {
  const int n = static_cast<int>(u.size());
  const int fields = std::max(1, options.fields);
  std::vector<int> free_index(n, -1);
  int n_free = 0;
  for (int i = 0; i < n; ++i)
    if (!fixed[i]) free_index[i] = n_free++;

  NewtonResult result;
  VectorX r(n);
  Eigen::SparseMatrix<double> jac(n, n);
  assemble(u, r, &jac);
  BlockNorms norms = block_norms(r, fixed, fields);
  const std::vector<double> initial = norms.free;
  result.initial_norm = total(norms.free);

  auto converged = [&](const BlockNorms& bn) {
    for (int f = 0; f < fields; ++f) {
      const double scale = std::max(initial[f], bn.fixed[f]);
      const double floor =
          static_cast<int>(options.field_atol.size()) == fields ? options.field_atol[f] : options.atol;
      if (!(bn.free[f] <= options.rtol * scale || bn.free[f] <= floor)) return false;
    }
    return true;
  };

  for (;;) {
    result.final_norm = total(norms.free);
    if (!norms.finite) {
      result.diverged = true;
      return result;
    }
    if (converged(norms)) {
      result.converged = true;
      return result;
    }
    if (result.iterations >= options.max_iterations) return result;

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(jac.nonZeros());
    for (int k = 0; k < jac.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(jac, k); it; ++it) {
        const int ri = free_index[it.row()], ci = free_index[it.col()];
        if (ri >= 0 && ci >= 0) trips.emplace_back(ri, ci, it.value());
      }
    Eigen::SparseMatrix<double> reduced(n_free, n_free);
    reduced.setFromTriplets(trips.begin(), trips.end());
    VectorX rhs(n_free);
    for (int i = 0; i < n; ++i)
      if (free_index[i] >= 0) rhs[free_index[i]] = -r[i];

    VectorX du;
    try {
      du = solve_general(reduced, rhs);
    } catch (const SolverError&) {
      result.diverged = true;
      return result;
    }
    for (int i = 0; i < n; ++i)
      if (free_index[i] >= 0) u[i] += du[free_index[i]];
    ++result.iterations;
    assemble(u, r, &jac);
    norms = block_norms(r, fixed, fields);
  }
}

void advance_with_halving(double t0, double t1, const std::function<bool(double, double)>& try_step,
                          int max_halvings) {
  struct Recurse {
    const std::function<bool(double, double)>& step;
    int max_depth;
    void operator()(double a, double b, int depth) const {
      if (step(a, b)) return;
      if (depth >= max_depth) {
        std::ostringstream msg;
        msg << "time step [" << a << ", " << b << "] failed after " << max_depth << " halvings";
        throw SolverError(msg.str());
      }
      const double mid = 0.5 * (a + b);
      (*this)(a, mid, depth + 1);
      (*this)(mid, b, depth + 1);
    }
  };
  Recurse{try_step, max_halvings}(t0, t1, 0);
}

}  // namespace lathom::numerics
