#pragma once

#include <map>
#include <string>
#include <vector>

#include "lathom/rve/rve.hpp"
#include "lathom/scenario/config.hpp"

namespace lathom::scenario {

/// RVE network of the scenario with the material's lambda0 assigned (randomized
/// when random.cov > 0). HTC scenarios use lambda0 = 1 as a geometric multiplier.
geometry::DualNetwork build_rve(const ScenarioConfig& config);

/// Tiled non-periodic network for the full model.
geometry::DualNetwork build_full_network(const ScenarioConfig& config, const geometry::DualNetwork& rve);

struct ProfileSeries {
  std::string name;
  std::string field;
  std::vector<double> arc;                  // arc length of the samples (m)
  std::vector<double> times;                // recorded times (s)
  std::vector<std::vector<double>> values;  // per time, per sample (Celsius for T)
};

struct PointSeries {
  std::string label;
  std::vector<double> times, H, T, alpha_c;  // T in Celsius
};

struct RunResult {
  std::string model;  // macro | full
  std::vector<double> times;
  std::vector<std::string> flux_columns;     // e.g. right, or right_H / right_T
  std::vector<std::vector<double>> fluxes;   // per time; g/day for mass, W for heat
  std::vector<ProfileSeries> profiles;
  std::vector<PointSeries> points;
  int dofs = 0;
  int newton_iterations = 0;
  int max_step_iterations = 0;  // largest Newton count of a single accepted step
  double seconds = 0.0;
  double released_heat = 0.0;  // J, HTC only
  Mat3 tensor = Mat3::Zero();  // macro: effective tensor used by the fast path
};

struct RunOptions {
  std::string out_dir;   // VTK dumps go here when outputs.vtk_every > 0
  bool write_vtk = false;
};

RunResult run_macro(const ScenarioConfig& config, const RunOptions& options = {});
RunResult run_full(const ScenarioConfig& config, const RunOptions& options = {});

/// Reproducibility header line (starts with '#').
std::string output_header(const ScenarioConfig& config, const std::string& model);

/// flux_history.csv, profile_<name>.csv and htc_point_<label>.csv.
void write_results(const ScenarioConfig& config, const RunResult& result, const std::string& out_dir);

}  // namespace lathom::scenario
