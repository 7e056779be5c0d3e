#include "lathom/scenario/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>

#include <fmt/format.h>

#include "lathom/scenario/config.hpp"
#include "lathom/scenario/run.hpp"
#include "lathom/scenario/study.hpp"

#ifndef LATHOM_CONFIG_DIR
#define LATHOM_CONFIG_DIR "configs"
#endif

namespace lathom::scenario {
namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

double rel(double a, double b) { return (a - b) / std::abs(b); }

Check at_most(std::string name, double measured, double tol, std::string criterion = "|value| <= tol") {
  return {std::move(name), measured, 0.0, tol, std::move(criterion), std::abs(measured) <= tol};
}

Check within(std::string name, double measured, double expected, double tol) {
  return {std::move(name), measured, expected, tol, "|measured - expected| <= tol", std::abs(measured - expected) <= tol};
}

Check greater(std::string name, double measured, double bound) {
  return {std::move(name), measured, bound, 0.0, "measured > expected", measured > bound};
}

Check at_least(std::string name, double measured, double bound) {
  return {std::move(name), measured, bound, 0.0, "measured >= expected", measured >= bound};
}

ScenarioConfig load(const VerifyOptions& o, const std::string& file) {
  const std::string dir = o.config_dir.empty() ? std::string(LATHOM_CONFIG_DIR) : o.config_dir;
  return load_config((std::filesystem::path(dir) / file).string());
}

void save(const VerifyOptions& o, const std::string& sub, const ScenarioConfig& c, const RunResult& r) {
  if (o.out_dir.empty()) return;
  write_results(c, r, (std::filesystem::path(o.out_dir) / sub / r.model).string());
}

std::size_t column(const RunResult& r, const std::string& name) {
  const auto it = std::find(r.flux_columns.begin(), r.flux_columns.end(), name);
  if (it == r.flux_columns.end()) throw Error("verify: run has no flux column '" + name + "'");
  return static_cast<std::size_t>(it - r.flux_columns.begin());
}

const BoundaryCondition& condition(const ScenarioConfig& c, const std::string& set, int field) {
  for (const auto& bc : c.bcs)
    if (bc.set == set && bc.field == field) return bc;
  throw Error("verify: config has no condition on '" + set + "'");
}

// Root mean square difference of two profiles sampled at the same points.
double rms_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

const PointSeries& point(const RunResult& r, const std::string& label) {
  for (const auto& p : r.points)
    if (p.label == label) return p;
  throw Error("verify: run has no point '" + label + "'");
}

}  // namespace

bool VerifyReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<std::string> verify_suites() { return {"linear", "nonlinear", "transient", "htc", "rve"}; }

VerifyReport run_verify(const std::string& suite, const VerifyOptions& o) {
  if (suite == "linear") return verify_linear(o);
  if (suite == "nonlinear") return verify_nonlinear(o);
  if (suite == "transient") return verify_transient(o);
  if (suite == "htc") return verify_htc(o);
  if (suite == "rve") return verify_rve(o);
  throw Error("unknown verify suite '" + suite + "' (expected linear, nonlinear, transient, htc or rve)");
}

VerifyReport verify_linear(const VerifyOptions& o) {
  const auto start = Clock::now();
  VerifyReport rep;
  rep.suite = "linear";
  ScenarioConfig c = load(o, "prism_linear.toml");
  const auto m = run_macro(c), f = run_full(c);
  save(o, "random", c, m);
  save(o, "random", c, f);
  for (const std::string side : {"left", "right"}) {
    const double a = m.fluxes.back()[column(m, side)], b = f.fluxes.back()[column(f, side)];
    rep.notes.push_back(fmt::format("random field, {} flux: macro {:.4f} g/day, full {:.4f} g/day", side, a, b));
    rep.checks.push_back(at_most("random " + side + " flux, macro vs full (rel)", rel(a, b), 0.01));
  }

  // Homogeneous lambda0: the prism conducts exactly lambda0 dp A / L.
  c.random.cov = 0.0;
  const double t_end = c.time.step_times().back();
  const double dp = condition(c, "right", 0).value(t_end) - condition(c, "left", 0).value(t_end);
  const double lx = c.mesh.xs.back() - c.mesh.xs.front(), ly = c.mesh.ys.back() - c.mesh.ys.front();
  const double analytic = c.material.mean_lambda0() * dp * ly * c.mesh.thickness / lx * 1000.0 * 86400.0;
  const auto hm = run_macro(c), hf = run_full(c);
  save(o, "homogeneous", c, hm);
  save(o, "homogeneous", c, hf);
  const double a = hm.fluxes.back()[column(hm, "right")], b = hf.fluxes.back()[column(hf, "right")];
  rep.notes.push_back(fmt::format("homogeneous: analytic {:.4f}, macro {:.4f}, full {:.4f} g/day", analytic, a, b));
  rep.checks.push_back(at_most("homogeneous macro vs analytic (rel)", rel(a, analytic), 0.005));
  rep.checks.push_back(at_most("homogeneous full vs analytic (rel)", rel(b, analytic), 0.005));
  rep.seconds = since(start);
  return rep;
}

VerifyReport verify_nonlinear(const VerifyOptions& o) {
  const auto start = Clock::now();
  VerifyReport rep;
  rep.suite = "nonlinear";
  ScenarioConfig c = load(o, "prism_nonlinear.toml");
  const auto m = run_macro(c), f = run_full(c);
  save(o, "adaptive", c, m);
  save(o, "adaptive", c, f);
  const std::size_t cm = column(m, "right"), cf = column(f, "right");
  double worst = 0.0;
  std::size_t worst_step = 0;
  for (std::size_t i = 0; i < m.times.size(); ++i) {
    const double e = rel(m.fluxes[i][cm], f.fluxes[i][cf]);
    if (std::abs(e) > std::abs(worst)) worst = e, worst_step = i + 1;
  }
  rep.notes.push_back(fmt::format("final flux: macro {:.4f}, full {:.4f} g/day; worst step {} of {}",
                                  m.fluxes.back()[cm], f.fluxes.back()[cf], worst_step, m.times.size()));
  rep.checks.push_back(at_most("max flux deviation over the load path (rel)", worst, 0.03));
  rep.checks.push_back(at_most("max Newton iterations per macro step", m.max_step_iterations, 8.0));

  // Same problem on a uniform mesh of four elements along the prism.
  ScenarioConfig coarse = c;
  const double x0 = c.mesh.xs.front(), x1 = c.mesh.xs.back();
  coarse.mesh.xs.clear();
  for (int i = 0; i <= 4; ++i) coarse.mesh.xs.push_back(x0 + (x1 - x0) * i / 4.0);
  const auto mc = run_macro(coarse);
  save(o, "coarse", coarse, mc);
  if (m.profiles.empty()) throw Error("verify nonlinear: the config needs a pressure profile");
  const auto& full_profile = f.profiles.front().values.back();
  const double e_adaptive = rms_difference(m.profiles.front().values.back(), full_profile);
  const double e_coarse = rms_difference(mc.profiles.front().values.back(), full_profile);
  rep.notes.push_back(fmt::format("profile RMS error vs full: adaptive {:.4g} Pa, coarse {:.4g} Pa", e_adaptive, e_coarse));
  rep.checks.push_back(greater("coarse / adaptive profile error", e_coarse / e_adaptive, 1.0));
  rep.seconds = since(start);
  return rep;
}

VerifyReport verify_transient(const VerifyOptions& o) {
  const auto start = Clock::now();
  VerifyReport rep;
  rep.suite = "transient";
  const ScenarioConfig c = load(o, "prism_transient.toml");
  // Steady reference: the same boundary values driven through a quasi-static load path.
  ScenarioConfig s = c;
  s.time.steady = true;
  s.time.segments = {{c.time.step_times().back() / 50.0, 50}};
  s.outputs.profiles.clear();
  for (const auto& run : {&run_macro, &run_full}) {
    const RunResult tr = (*run)(c, {}), st = (*run)(s, {});
    save(o, "transient", c, tr);
    save(o, "steady", s, st);
    for (const std::string side : {"left", "right"}) {
      const double a = tr.fluxes.back()[column(tr, side)], b = st.fluxes.back()[column(st, side)];
      rep.notes.push_back(fmt::format("{} {} flux: transient {:.4f}, steady {:.4f} g/day", tr.model, side, a, b));
      rep.checks.push_back(at_most(tr.model + " " + side + " flux, transient vs steady (rel)", rel(a, b), 0.01));
    }
  }
  rep.seconds = since(start);
  return rep;
}

VerifyReport verify_htc(const VerifyOptions& o) {
  const auto start = Clock::now();
  VerifyReport rep;
  rep.suite = "htc";
  const ScenarioConfig c = load(o, "dam_htc.toml");
  const auto m = run_macro(c), f = run_full(c);
  save(o, "dam", c, m);
  save(o, "dam", c, f);
  const auto& pm = point(m, "A");
  const auto& pf = point(f, "A");
  const auto im = std::max_element(pm.T.begin(), pm.T.end()) - pm.T.begin();
  const auto jf = std::max_element(pf.T.begin(), pf.T.end()) - pf.T.begin();
  rep.notes.push_back(fmt::format("point A peak: macro {:.3f} C at {:.2f} h, full {:.3f} C at {:.2f} h",
                                  pm.T[im], pm.times[im] / 3600.0, pf.T[jf], pf.times[jf] / 3600.0));
  rep.checks.push_back(at_most("peak time difference (h)", (pm.times[im] - pf.times[jf]) / 3600.0, 6.0));
  rep.checks.push_back(at_most("peak temperature difference (C)", pm.T[im] - pf.T[jf], 1.0));
  double dh = 0.0;
  for (std::size_t i = 0; i < pm.H.size() && i < pf.H.size(); ++i) dh = std::max(dh, std::abs(pm.H[i] - pf.H[i]));
  rep.checks.push_back(at_most("max humidity deviation", dh, 0.02));
  rep.checks.push_back(at_most("final hydration degree difference", pm.alpha_c.back() - pf.alpha_c.back(), 0.01));
  rep.notes.push_back(fmt::format("run time: macro {:.2f} s ({} dofs), full {:.2f} s ({} dofs)", m.seconds, m.dofs,
                                  f.seconds, f.dofs));
  rep.checks.push_back(at_least("speed-up full / macro", f.seconds / m.seconds, 10.0));

  const ScenarioConfig a = load(o, "dam_adiabatic.toml");
  const auto ma = run_macro(a);
  save(o, "adiabatic", a, ma);
  const auto& h = a.material.htc;
  const double rise = (h.alpha_c_inf * h.c * h.Qc_inf + h.alpha_s_inf * h.s * h.Qs_inf) / (h.rho * h.c_t);
  const auto& pa = point(ma, "A");
  const double dt_max = *std::max_element(pa.T.begin(), pa.T.end()) - (a.time.initial.at(1) - kCelsius);
  rep.notes.push_back(fmt::format("adiabatic rise: {:.3f} C, energy balance {:.3f} C", dt_max, rise));
  rep.checks.push_back(within("adiabatic temperature rise (C)", dt_max, rise, 0.5));
  rep.seconds = since(start);
  return rep;
}

VerifyReport verify_rve(const VerifyOptions& o) {
  const auto start = Clock::now();
  VerifyReport rep;
  rep.suite = "rve";
  const ScenarioConfig c = load(o, "rve_study.toml");
  const auto r = run_study(c, o.threads);
  if (!o.out_dir.empty()) write_study(c, r, (std::filesystem::path(o.out_dir) / "rve").string());
  // The ensemble at geometry.rve_size carries the interval checks; the others feed the size trend.
  const auto main = std::min_element(r.summaries.begin(), r.summaries.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.size - c.geometry.rve_size[0]) < std::abs(b.size - c.geometry.rve_size[0]);
  });
  const auto& s0 = *main;
  rep.notes.push_back(fmt::format("{} members of size {} m: mean normalized diagonal {:.4f} (std {:.4f}), "
                                  "mean |off-diagonal| {:.4f}",
                                  s0.members, s0.size, s0.mean_diagonal, s0.std_diagonal, s0.mean_off_diagonal));
  rep.checks.push_back(at_least("ensemble size", s0.members, 100.0));
  rep.checks.push_back(at_least("mean diagonal above the harmonic bound", s0.mean_diagonal, r.lower_bound));
  rep.checks.push_back({"mean diagonal below the arithmetic bound", s0.mean_diagonal, 1.0, 0.0, "measured <= expected",
                        s0.mean_diagonal <= 1.0});
  rep.checks.push_back(at_most("mean off-diagonal magnitude", s0.mean_off_diagonal, 0.01));
  for (const auto& b : r.summaries)
    rep.notes.push_back(fmt::format("size {} m: mean diagonal {:.4f}, std {:.4f}", b.size, b.mean_diagonal, b.std_diagonal));
  for (std::size_t i = 1; i < r.summaries.size(); ++i) {
    const auto& a = r.summaries[i - 1];
    const auto& b = r.summaries[i];
    rep.checks.push_back({fmt::format("diagonal std shrinks from {} m to {} m", a.size, b.size), b.std_diagonal,
                          a.std_diagonal, 0.0, "measured < expected", b.std_diagonal < a.std_diagonal});
  }
  rep.seconds = since(start);
  return rep;
}

std::string format_report(const VerifyReport& r) {
  std::string out = fmt::format("verify {}\n", r.suite);
  for (const auto& c : r.checks)
    out += fmt::format("  [{}] {}: measured {:.6g}, expected {:.6g}, tol {:.3g} ({})\n", c.pass ? "PASS" : "FAIL",
                       c.name, c.measured, c.expected, c.tolerance, c.criterion);
  for (const auto& n : r.notes) out += "  note: " + n + "\n";
  out += fmt::format("  {} in {:.1f} s\n", r.passed() ? "PASSED" : "FAILED", r.seconds);
  return out;
}

}  // namespace lathom::scenario
