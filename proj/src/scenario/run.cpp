#include "lathom/scenario/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <memory>
#include <numbers>

#include <fmt/format.h>
#include <fmt/os.h>
#include <fmt/ranges.h>

#include "lathom/fullmodel/full.hpp"
#include "lathom/macro/problems.hpp"
#include "lathom/scenario/vtk.hpp"

namespace lathom::scenario {
namespace {

using Clock = std::chrono::steady_clock;

numerics::StepperOptions stepper_options(const ScenarioConfig& c) {
  numerics::StepperOptions o;
  o.steady = c.time.steady;
  o.max_halvings = c.time.max_halvings;
  o.newton.rtol = c.time.rtol;
  o.newton.field_atol = c.time.atol;
  o.newton.max_iterations = c.time.max_iterations;
  return o;
}

// Records profiles when a step reaches one of the requested times (or the last step).
struct ProfileSchedule {
  std::vector<double> step_times;
  bool due(const ProfileConfig& p, std::size_t step) const {
    const double t = step_times[step];
    const double prev = step == 0 ? 0.0 : step_times[step - 1];
    if (p.times.empty()) return step + 1 == step_times.size();
    for (double r : p.times)
      if (r > prev + 1e-9 * std::abs(r) && r <= t + 1e-9 * std::abs(r)) return true;
    return false;
  }
};

double output_value(double v, int field, MaterialKind kind) {
  return kind == MaterialKind::Htc && field == 1 ? v - kCelsius : v;
}

std::vector<double> arc_lengths(const ProfileConfig& p) {
  std::vector<double> s(p.samples);
  for (int i = 0; i < p.samples; ++i) s[i] = (p.to - p.from).norm() * i / (p.samples - 1);
  return s;
}

void flux_columns(const ScenarioConfig& c, RunResult& r) {
  for (const auto& set : c.outputs.flux_sets) {
    if (c.material.kind != MaterialKind::Htc) {
      r.flux_columns.push_back(set);
      continue;
    }
    for (int f = 0; f < 2; ++f)
      for (const auto& bc : c.bcs)
        if (bc.set == set && bc.field == f) {
          r.flux_columns.push_back(set + "_" + field_name(f, c.material.kind));
          break;
        }
  }
}

// Converts a reaction sum to the report unit of the field.
double report_flux(double v, int field, MaterialKind kind) {
  return kind == MaterialKind::Htc && field == 1 ? v : macro::to_grams_per_day(v);
}

void init_outputs(const ScenarioConfig& c, RunResult& r, const std::string& model) {
  r.model = model;
  flux_columns(c, r);
  for (const auto& p : c.outputs.profiles)
    r.profiles.push_back({p.name, field_name(p.field, c.material.kind), arc_lengths(p), {}, {}});
  if (c.material.kind == MaterialKind::Htc)
    for (const auto& p : c.outputs.points) r.points.push_back({p.label, {}, {}, {}, {}});
}

void prepare_dir(const RunOptions& o) {
  if (o.write_vtk && !o.out_dir.empty()) std::filesystem::create_directories(o.out_dir);
}

bool vtk_due(const ScenarioConfig& c, const RunOptions& o, std::size_t step, std::size_t steps) {
  if (!o.write_vtk || c.outputs.vtk_every <= 0) return false;
  return (step + 1) % static_cast<std::size_t>(c.outputs.vtk_every) == 0 || step + 1 == steps;
}

std::string vtk_path(const RunOptions& o, const std::string& model, std::size_t step) {
  return (std::filesystem::path(o.out_dir) / fmt::format("fields_{}_{:05d}.vtk", model, step + 1)).string();
}

}  // namespace

geometry::DualNetwork build_rve(const ScenarioConfig& c) {
  const auto& g = c.geometry;
  Vec3 cell = g.rve_size;
  if (g.n_dim == 2) cell.z() = 0.0;
  geometry::DualNetwork net;
  if (g.kind == "voronoi") {
    net = geometry::build_voronoi_dual(geometry::generate_periodic_nuclei(cell, g.n_dim, g.l_min, g.seed), cell, g.n_dim);
  } else if (g.kind == "skewed") {
    net = geometry::build_skewed_lattice(cell, g.n_dim, g.divisions, g.skew_angle_deg * std::numbers::pi / 180.0);
  } else {
    net = geometry::import_network(g.file);
    if (!net.periodic) throw ConfigError("geometry.file must hold a periodic RVE");
  }
  const double mean = c.material.mean_lambda0();
  if (c.random.cov > 0.0) constitutive::randomize_lambda0(net, mean, c.random.cov, c.random.seed);
  else constitutive::set_lambda0(net, mean);
  return net;
}

geometry::DualNetwork build_full_network(const ScenarioConfig& c, const geometry::DualNetwork& rve) {
  return geometry::tile_full_domain(rve, c.geometry.tiling, c.geometry.boundary_mode);
}

RunResult run_macro(const ScenarioConfig& c, const RunOptions& o) {
  const auto start = Clock::now();
  if (c.geometry.n_dim != 2) throw ConfigError("the macro solver is 2D; set geometry.n_dim = 2");
  RunResult r;
  init_outputs(c, r, "macro");
  prepare_dir(o);
  auto rve = std::make_shared<const geometry::DualNetwork>(build_rve(c));
  const auto tensor = rve::effective_tensor(*rve);
  r.tensor = tensor.lambda;
  auto mesh = macro::MacroMesh::structured(c.mesh.xs, c.mesh.ys, c.mesh.thickness);
  mesh.validate();
  const int nf = c.fields();

  std::unique_ptr<numerics::TransientProblem> problem;
  macro::HtcProblem* htc = nullptr;
  if (c.material.kind == MaterialKind::Htc) {
    auto p = std::make_unique<macro::HtcProblem>(mesh, tensor.lambda.topLeftCorner<2, 2>(), c.material.htc);
    htc = p.get();
    problem = std::move(p);
  } else {
    std::shared_ptr<const macro::FluxPath> path;
    if (c.mesh.path == "fast") path = std::make_shared<macro::FastFluxPath>(tensor, c.material.permeability());
    else path = std::make_shared<macro::SlowFluxPath>(rve, c.material.permeability());
    problem = std::make_unique<macro::PressureProblem>(mesh, path, c.material.storage);
  }

  std::vector<numerics::PrescribedDof> fixed;
  for (const auto& bc : c.bcs) {
    auto d = macro::prescribe(mesh, bc.set, nf, bc.field, bc.value);
    fixed.insert(fixed.end(), d.begin(), d.end());
  }
  VectorX u0(problem->size());
  for (long i = 0; i < u0.size(); ++i) u0[i] = c.time.initial[static_cast<std::size_t>(i % nf)];
  for (const auto& d : fixed) u0[d.dof] = d.value(0.0);
  r.dofs = problem->size();

  numerics::BackwardEuler be(*problem, u0, fixed, stepper_options(c));
  const ProfileSchedule sched{c.time.step_times()};
  const auto& steps = sched.step_times;
  for (std::size_t s = 0; s < steps.size(); ++s) {
    be.advance(steps[s]);
    r.newton_iterations += be.newton_iterations();
    r.max_step_iterations = std::max(r.max_step_iterations, be.newton_iterations());
    const VectorX& u = be.state();
    r.times.push_back(steps[s]);
    std::vector<double> row;
    for (const auto& col : r.flux_columns) {
      const auto us = col.find('_');
      const std::string set = us == std::string::npos ? col : col.substr(0, us);
      const int field = us == std::string::npos ? 0 : field_index(col.substr(us + 1), c.material.kind);
      row.push_back(report_flux(macro::boundary_flux(mesh, set, be.residual(), be.fixed(), nf, field), field,
                                c.material.kind));
    }
    r.fluxes.push_back(row);
    for (std::size_t k = 0; k < c.outputs.profiles.size(); ++k) {
      const auto& pc = c.outputs.profiles[k];
      if (!sched.due(pc, s)) continue;
      auto vals = macro::line_profile(mesh, u, nf, pc.field, pc.from.head<2>(), pc.to.head<2>(), pc.samples);
      for (double& v : vals) v = output_value(v, pc.field, c.material.kind);
      r.profiles[k].times.push_back(steps[s]);
      r.profiles[k].values.push_back(vals);
    }
    if (htc) {
      const VectorX alpha = htc->nodal_alpha_c();
      for (std::size_t k = 0; k < c.outputs.points.size(); ++k) {
        const Vec2 x = c.outputs.points[k].at.head<2>();
        auto& ps = r.points[k];
        ps.times.push_back(steps[s]);
        ps.H.push_back(macro::interpolate(mesh, u, 2, 0, x));
        ps.T.push_back(macro::interpolate(mesh, u, 2, 1, x) - kCelsius);
        ps.alpha_c.push_back(macro::interpolate(mesh, alpha, 1, 0, x));
      }
    }
    if (vtk_due(c, o, s, steps.size())) {
      std::vector<NamedField> data;
      for (int f = 0; f < nf; ++f) {
        VectorX v(static_cast<long>(mesh.nodes.size()));
        for (long i = 0; i < v.size(); ++i) v[i] = output_value(u[i * nf + f], f, c.material.kind);
        data.emplace_back(field_name(f, c.material.kind), v);
      }
      if (htc) data.emplace_back("alpha_c", htc->nodal_alpha_c());
      write_vtk_mesh(vtk_path(o, "macro", s), mesh, data);
    }
  }
  if (htc) r.released_heat = htc->released_heat();
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

RunResult run_full(const ScenarioConfig& c, const RunOptions& o) {
  const auto start = Clock::now();
  RunResult r;
  init_outputs(c, r, "full");
  prepare_dir(o);
  const auto rve = build_rve(c);
  const auto net = build_full_network(c, rve);
  const int nf = c.fields();

  std::vector<fullmodel::SideCondition> conds;
  for (const auto& bc : c.bcs) conds.push_back({geometry::side_from_name(bc.set), bc.field, bc.value});
  std::unique_ptr<fullmodel::NetworkProblem> problem;
  fullmodel::FullHtcProblem* htc = nullptr;
  if (c.material.kind == MaterialKind::Htc) {
    auto p = std::make_unique<fullmodel::FullHtcProblem>(net, c.material.htc, conds, c.dirichlet_mode);
    htc = p.get();
    problem = std::move(p);
  } else {
    problem = std::make_unique<fullmodel::FullPressureProblem>(net, c.material.permeability(), c.material.storage,
                                                               conds, c.dirichlet_mode);
  }
  const auto fixed = problem->prescribed();
  VectorX u0 = problem->uniform_state(c.time.initial);
  for (const auto& d : fixed) u0[d.dof] = d.value(0.0);
  r.dofs = problem->size();

  numerics::BackwardEuler be(*problem, u0, fixed, stepper_options(c));
  const ProfileSchedule sched{c.time.step_times()};
  const auto& steps = sched.step_times;
  for (std::size_t s = 0; s < steps.size(); ++s) {
    be.advance(steps[s]);
    r.newton_iterations += be.newton_iterations();
    r.max_step_iterations = std::max(r.max_step_iterations, be.newton_iterations());
    const VectorX& u = be.state();
    r.times.push_back(steps[s]);
    std::vector<double> row;
    for (const auto& col : r.flux_columns) {
      const auto us = col.find('_');
      const std::string set = us == std::string::npos ? col : col.substr(0, us);
      const int field = us == std::string::npos ? 0 : field_index(col.substr(us + 1), c.material.kind);
      row.push_back(report_flux(problem->side_flux(geometry::side_from_name(set), field, be.residual()), field,
                                c.material.kind));
    }
    r.fluxes.push_back(row);
    for (std::size_t k = 0; k < c.outputs.profiles.size(); ++k) {
      const auto& pc = c.outputs.profiles[k];
      if (!sched.due(pc, s)) continue;
      auto vals = fullmodel::interpolate_line(net, problem->node_values(u, pc.field), pc.from, pc.to, pc.samples);
      for (double& v : vals) v = output_value(v, pc.field, c.material.kind);
      r.profiles[k].times.push_back(steps[s]);
      r.profiles[k].values.push_back(vals);
    }
    if (htc) {
      const VectorX H = problem->node_values(u, 0), T = problem->node_values(u, 1), alpha = htc->nodal_alpha_c();
      for (std::size_t k = 0; k < c.outputs.points.size(); ++k) {
        const Vec3 x = c.outputs.points[k].at;
        auto& ps = r.points[k];
        ps.times.push_back(steps[s]);
        ps.H.push_back(fullmodel::interpolate_point(net, H, x));
        ps.T.push_back(fullmodel::interpolate_point(net, T, x) - kCelsius);
        ps.alpha_c.push_back(fullmodel::interpolate_point(net, alpha, x));
      }
    }
    if (vtk_due(c, o, s, steps.size())) {
      std::vector<NamedField> data;
      for (int f = 0; f < nf; ++f) {
        VectorX v = problem->node_values(u, f);
        for (long i = 0; i < v.size(); ++i) v[i] = output_value(v[i], f, c.material.kind);
        data.emplace_back(field_name(f, c.material.kind), v);
      }
      if (htc) data.emplace_back("alpha_c", htc->nodal_alpha_c());
      write_vtk_network(vtk_path(o, "full", s), net, data);
    }
  }
  if (htc) r.released_heat = htc->released_heat();
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

std::string output_header(const ScenarioConfig& c, const std::string& model) {
  return fmt::format("# lathom {} model={} scenario={} config_hash={} geometry_seed={} random_seed={}", LATHOM_VERSION,
                     model, c.name, c.hash(), c.geometry.seed, c.random.seed);
}

void write_results(const ScenarioConfig& c, const RunResult& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string header = output_header(c, r.model);
  {
    auto out = fmt::output_file((fs::path(out_dir) / "flux_history.csv").string());
    out.print("{}\n# mass fluxes in g/day (inflow positive), heat fluxes in W\ntime_s", header);
    for (const auto& col : r.flux_columns) out.print(",{}", col);
    out.print("\n");
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      out.print("{:.10g}", r.times[i]);
      for (double v : r.fluxes[i]) out.print(",{:.10g}", v);
      out.print("\n");
    }
  }
  for (const auto& p : r.profiles) {
    auto out = fmt::output_file((fs::path(out_dir) / fmt::format("profile_{}.csv", p.name)).string());
    out.print("{}\n# field {}{}\narc_length_m", header, p.field, p.field == "T" ? " in Celsius" : "");
    for (double t : p.times) out.print(",t={:.10g}", t);
    out.print("\n");
    for (std::size_t s = 0; s < p.arc.size(); ++s) {
      out.print("{:.10g}", p.arc[s]);
      for (const auto& v : p.values) out.print(",{:.10g}", v[s]);
      out.print("\n");
    }
  }
  for (const auto& p : r.points) {
    auto out = fmt::output_file((fs::path(out_dir) / fmt::format("htc_point_{}.csv", p.label)).string());
    out.print("{}\ntime_s,H,T_C,alpha_c\n", header);
    for (std::size_t i = 0; i < p.times.size(); ++i)
      out.print("{:.10g},{:.10g},{:.10g},{:.10g}\n", p.times[i], p.H[i], p.T[i], p.alpha_c[i]);
  }
}

}  // namespace lathom::scenario
