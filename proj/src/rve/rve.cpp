#include "lathom/rve/rve.hpp"

#include <sstream>

#include "lathom/numerics/random.hpp"

namespace lathom::rve {

using geometry::DualNetwork;

namespace {

void check_connected(const DualNetwork& net) {
  const auto comps = geometry::connected_components(net);
  if (comps.size() <= 1) return;
  std::ostringstream msg;
  msg << "singular RVE: network has " << comps.size() << " disconnected components (";
  for (std::size_t c = 0; c < comps.size(); ++c) {
    if (c) msg << ", ";
    if (c == 8) {
      msg << "...";
      break;
    }
    msg << comps[c].size() << " nodes starting at node " << comps[c].front();
  }
  msg << ")";
  throw Error(msg.str());
}

}  // namespace

RveSystem assemble_pinned(const DualNetwork& net, std::span<const double> lambda, int pinned_node) {
  if (!net.periodic) throw Error("RVE assembly requires a periodic network");
  const int n = static_cast<int>(net.nodes.size());
  if (n == 0) throw Error("RVE assembly: empty network");
  if (lambda.size() != net.elements.size()) throw Error("RVE assembly: one lambda per element required");
  if (pinned_node < 0 || pinned_node >= n) throw Error("RVE assembly: pinned node out of range");
  check_connected(net);

  RveSystem sys;
  sys.network = &net;
  sys.lambda.assign(lambda.begin(), lambda.end());
  sys.pinned_node = pinned_node;
  std::vector<numerics::Triplet> trips;
  trips.reserve(4 * net.elements.size());
  sys.conductance.resize(net.elements.size());
  for (std::size_t i = 0; i < net.elements.size(); ++i) {
    const auto& e = net.elements[i];
    if (!(lambda[i] > 0.0)) throw Error("RVE assembly: non-positive permeability at element " + std::to_string(e.id));
    const double k = lambda[i] * e.projected_area / e.length;
    sys.conductance[i] = k;
    trips.emplace_back(e.node_p, e.node_p, k);
    trips.emplace_back(e.node_q, e.node_q, k);
    trips.emplace_back(e.node_p, e.node_q, -k);
    trips.emplace_back(e.node_q, e.node_p, -k);
  }
  sys.K = numerics::SparseSymmetric::from_triplets(n, trips);
  for (int i = 0; i < n; ++i)
    if (i != pinned_node) sys.free_nodes.push_back(i);
  sys.K_reduced = sys.K.submatrix(sys.free_nodes);
  return sys;
}

RveSystem assemble(const DualNetwork& net, std::span<const double> lambda, std::uint64_t pin_seed) {
  if (net.nodes.empty()) throw Error("RVE assembly: empty network");
  numerics::RandomStream rng(pin_seed);
  return assemble_pinned(net, lambda, static_cast<int>(rng.index(net.nodes.size())));
}

RveSystem assemble(const DualNetwork& net, std::uint64_t pin_seed) {
  std::vector<double> lambda;
  lambda.reserve(net.elements.size());
  for (const auto& e : net.elements) lambda.push_back(e.lambda0);
  return assemble(net, lambda, pin_seed);
}

VectorX load_vector(const RveSystem& sys, const Vec3& a) {
  const auto& net = *sys.network;
  VectorX b = VectorX::Zero(static_cast<long>(net.nodes.size()));
  for (std::size_t i = 0; i < net.elements.size(); ++i) {
    const auto& e = net.elements[i];
    const double load = sys.lambda[i] * e.projected_area * a.dot(e.direction);
    b[e.node_p] += load;
    b[e.node_q] -= load;
  }
  VectorX reduced(static_cast<long>(sys.free_nodes.size()));
  for (std::size_t k = 0; k < sys.free_nodes.size(); ++k) reduced[static_cast<long>(k)] = b[sys.free_nodes[k]];
  return reduced;
}

RveSolution solve_eigen_gradient(const RveSystem& sys, const Vec3& a, const numerics::SolveOptions& options) {
  const auto& net = *sys.network;
  const int n = static_cast<int>(net.nodes.size());
  RveSolution sol;
  sol.p1 = VectorX::Zero(n);
  if (!sys.free_nodes.empty()) {
    const auto rep = numerics::solve_spd(sys.K_reduced, load_vector(sys, a), options);
    for (std::size_t k = 0; k < sys.free_nodes.size(); ++k) sol.p1[sys.free_nodes[k]] = rep.x[static_cast<long>(k)];
    sol.iterations = rep.iterations;
    sol.direct = rep.direct;
  }
  double wsum = 0.0, mean = 0.0;
  for (int i = 0; i < n; ++i) {
    mean += net.nodes[i].volume * sol.p1[i];
    wsum += net.nodes[i].volume;
  }
  sol.p1.array() -= mean / wsum;

  const long m = static_cast<long>(net.elements.size());
  sol.g0.resize(m);
  sol.j0.resize(m);
  for (long i = 0; i < m; ++i) {
    const auto& e = net.elements[static_cast<std::size_t>(i)];
    sol.g0[i] = (sol.p1[e.node_q] - sol.p1[e.node_p]) / e.length + a.dot(e.direction);
    sol.j0[i] = -sys.lambda[static_cast<std::size_t>(i)] * sol.g0[i];
  }
  sol.f = macro_flux(std::span<const double>(sol.j0.data(), static_cast<std::size_t>(m)), net);
  return sol;
}

Vec3 macro_flux(std::span<const double> j0, const DualNetwork& net) {
  if (j0.size() != net.elements.size()) throw Error("macro_flux: one flux per element required");
  Vec3 f = Vec3::Zero();
  for (std::size_t i = 0; i < net.elements.size(); ++i) {
    const auto& e = net.elements[i];
    f += e.length * e.projected_area * j0[i] * e.direction;
  }
  return f / net.cell_volume();
}

double dissipation(const RveSystem& sys, const RveSolution& sol, const Vec3& a) {
  const auto& net = *sys.network;
  double s = 0.0;
  for (std::size_t i = 0; i < net.elements.size(); ++i) {
    const auto& e = net.elements[i];
    const double jump = sol.p1[e.node_q] - sol.p1[e.node_p] + e.length * a.dot(e.direction);
    s += sys.conductance[i] * jump * jump;
  }
  return s / net.cell_volume();
}

EffectiveTensor effective_tensor(const DualNetwork& net, const TensorOptions& options) {
  const auto sys = assemble(net, options.pin_seed);
  EffectiveTensor t;
  t.n_dim = net.n_dim;
  t.cell_volume = net.cell_volume();
  Mat3 raw = Mat3::Zero();
  for (int i = 0; i < net.n_dim; ++i) {
    auto sol = solve_eigen_gradient(sys, Vec3::Unit(i), options.solve);
    raw.col(i) = -sol.f;
    t.unit.push_back(std::move(sol));
  }
  const double norm = raw.norm();
  t.asymmetry = norm > 0.0 ? (raw - raw.transpose()).norm() / norm : 0.0;
  if (t.asymmetry > options.asymmetry_tolerance) {
    std::ostringstream msg;
    msg << "effective tensor asymmetry " << t.asymmetry << " exceeds " << options.asymmetry_tolerance;
    throw Error(msg.str());
  }
  t.lambda = 0.5 * (raw + raw.transpose());
  return t;
}

Vec3 fast_response(const EffectiveTensor& t, double kappa_r, const Vec3& a) { return -kappa_r * (t.lambda * a); }

RveSolution fast_fields(const EffectiveTensor& t, double kappa_r, const Vec3& a) {
  if (t.unit.empty()) throw Error("fast_fields: tensor carries no unit solutions");
  RveSolution s;
  s.p1 = VectorX::Zero(t.unit[0].p1.size());
  s.g0 = VectorX::Zero(t.unit[0].g0.size());
  s.j0 = VectorX::Zero(t.unit[0].j0.size());
  for (int i = 0; i < t.n_dim; ++i) {
    s.p1 += a[i] * t.unit[i].p1;
    s.g0 += a[i] * t.unit[i].g0;
    s.j0 += kappa_r * a[i] * t.unit[i].j0;
    s.f += kappa_r * a[i] * t.unit[i].f;
  }
  return s;
}

}  // namespace lathom::rve
