#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/os.h>

#include "lathom/geometry/generators.hpp"
#include "lathom/rve/rve.hpp"
#include "lathom/scenario/config.hpp"
#include "lathom/scenario/run.hpp"
#include "lathom/scenario/study.hpp"
#include "lathom/scenario/verify.hpp"
#include "lathom/scenario/vtk.hpp"

namespace fs = std::filesystem;
using namespace lathom;
using namespace lathom::scenario;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "lathom_out";
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool deterministic = false;

  int thread_count() const { return deterministic ? 1 : threads; }
};

void add_common(CLI::App* app, Common& c, bool needs_config) {
  auto* opt = app->add_option("--config", c.config, "scenario file (TOML)")->check(CLI::ExistingFile);
  if (needs_config) opt->required();
  app->add_option("--seed", c.seed, "override geometry.seed");
  app->add_option("--out-dir", c.out_dir, "output directory")->capture_default_str();
  app->add_option("--threads", c.threads, "worker threads for ensembles")->check(CLI::PositiveNumber);
  app->add_flag("--deterministic", c.deterministic, "single worker thread; results are identical either way");
}

ScenarioConfig load(const Common& c) {
  ScenarioConfig cfg = load_config(c.config);
  if (c.seed) cfg.geometry.seed = *c.seed;
  return cfg;
}

void print_invariants(const geometry::DualNetwork& net) {
  const auto r = geometry::check_invariants(net);
  fmt::print("nodes {}  elements {}  dimension {}\n", net.nodes.size(), net.elements.size(), net.n_dim);
  fmt::print("closure {:.3e}  fabric {:.3e}  volume {:.3e}  unit {:.3e}  projection {:.3e}  branch {:.3e}\n",
             r.max_closure, r.fabric_error, r.volume_error, r.max_unit_error, r.max_projection_error,
             r.max_branch_error);
  const bool ok = r.closure_ok() && r.fabric_ok() && r.volume_ok() && r.parallel;
  fmt::print("invariants {}\n", ok ? "ok" : "VIOLATED");
  if (!ok) throw Error("geometry invariants violated");
}

int cmd_generate_rve(const Common& c) {
  const auto cfg = load(c);
  const auto net = build_rve(cfg);
  geometry::validate(net);
  print_invariants(net);
  fs::create_directories(c.out_dir);
  const auto path = (fs::path(c.out_dir) / fmt::format("rve_{}.lat", cfg.geometry.seed)).string();
  geometry::export_network(net, path);
  fmt::print("wrote {}\n", path);
  return 0;
}

int cmd_rve_tensor(const Common& c) {
  const auto cfg = load(c);
  const auto net = build_rve(cfg);
  geometry::validate(net);
  const auto t = rve::effective_tensor(net);
  const int d = net.n_dim;
  fs::create_directories(c.out_dir);
  {
    auto f = fmt::output_file((fs::path(c.out_dir) / "rve_tensor.csv").string());
    f.print("{}\n# effective conductivity tensor (s); asymmetry before symmetrization {:.3e}\ni,j,value\n",
            output_header(cfg, "rve-tensor"), t.asymmetry);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) f.print("{},{},{:.12g}\n", i, j, t.lambda(i, j));
  }
  std::vector<NamedField> fields;
  const char* axis = "xyz";
  for (int i = 0; i < d; ++i) fields.push_back({fmt::format("p1_{}", axis[i]), t.unit[i].p1});
  write_vtk_network((fs::path(c.out_dir) / "rve_fluctuation.vtk").string(), net, fields);
  const double mean = cfg.material.mean_lambda0();
  fmt::print("effective tensor / mean lambda0:\n");
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) fmt::print(" {:12.6f}", t.lambda(i, j) / mean);
    fmt::print("\n");
  }
  fmt::print("asymmetry {:.3e}; wrote rve_tensor.csv and rve_fluctuation.vtk to {}\n", t.asymmetry, c.out_dir);
  return 0;
}

int cmd_rve_study(const Common& c) {
  const auto cfg = load(c);
  const auto r = run_study(cfg, c.thread_count());
  write_study(cfg, r, c.out_dir);
  fmt::print("{:>8} {:>8} {:>14} {:>12} {:>14}\n", "size", "members", "mean diag", "std diag", "mean |off|");
  for (const auto& s : r.summaries)
    fmt::print("{:>8.4g} {:>8} {:>14.6f} {:>12.6f} {:>14.6f}\n", s.size, s.members, s.mean_diagonal, s.std_diagonal,
               s.mean_off_diagonal);
  fmt::print("bounds [{:.6f}, 1]; {:.1f} s; wrote rve_study_*.csv to {}\n", r.lower_bound, r.seconds, c.out_dir);
  return 0;
}

int cmd_run(const Common& c, bool full) {
  const auto cfg = load(c);
  RunOptions o{c.out_dir, cfg.outputs.vtk_every > 0};
  const auto r = full ? run_full(cfg, o) : run_macro(cfg, o);
  write_results(cfg, r, c.out_dir);
  fmt::print("{} {}: {} steps, {} dofs, {} Newton iterations, {:.2f} s\n", r.model, cfg.name, r.times.size(), r.dofs,
             r.newton_iterations, r.seconds);
  if (!r.fluxes.empty())
    for (std::size_t k = 0; k < r.flux_columns.size(); ++k)
      fmt::print("  final flux {}: {:.6g}\n", r.flux_columns[k], r.fluxes.back()[k]);
  fmt::print("wrote results to {}\n", c.out_dir);
  return 0;
}

int cmd_verify(const Common& c, const std::string& suite, const std::string& config_dir, bool write) {
  VerifyOptions o;
  o.config_dir = config_dir;
  o.threads = c.thread_count();
  if (write) o.out_dir = c.out_dir;
  bool ok = true;
  const auto suites = suite == "all" ? verify_suites() : std::vector<std::string>{suite};
  for (const auto& s : suites) {
    const auto r = run_verify(s, o);
    fmt::print("{}", format_report(r));
    std::fflush(stdout);
    ok &= r.passed();
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lathom: homogenization of discrete lattice diffusion models"};
  app.set_version_flag("--version", LATHOM_VERSION);
  app.require_subcommand(1);

  Common common;
  auto* gen = app.add_subcommand("generate-rve", "generate a periodic RVE, check invariants and write the lattice");
  add_common(gen, common, true);
  auto* tensor = app.add_subcommand("rve-tensor", "effective conductivity tensor and fluctuation fields of an RVE");
  add_common(tensor, common, true);
  auto* study = app.add_subcommand("rve-study", "tensor statistics over RVE sizes, structures and random fields");
  add_common(study, common, true);
  auto* macro = app.add_subcommand("run-macro", "homogenized finite element simulation");
  add_common(macro, common, true);
  auto* full = app.add_subcommand("run-full", "fully resolved lattice simulation");
  add_common(full, common, true);
  auto* verify = app.add_subcommand("verify", "paired homogenized and full checks with pass/fail report");
  add_common(verify, common, false);
  std::string suite = "all", config_dir;
  bool write = false;
  verify->add_option("suite", suite, "linear, nonlinear, transient, htc, rve or all")
      ->check(CLI::IsMember({"linear", "nonlinear", "transient", "htc", "rve", "all"}));
  verify->add_option("--config-dir", config_dir, "directory holding the bundled scenario files");
  verify->add_flag("--write", write, "write the CSV outputs of every run below --out-dir");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_generate_rve(common);
    if (*tensor) return cmd_rve_tensor(common);
    if (*study) return cmd_rve_study(common);
    if (*macro) return cmd_run(common, false);
    if (*full) return cmd_run(common, true);
    if (*verify) return cmd_verify(common, suite, config_dir, write);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 0;
}
