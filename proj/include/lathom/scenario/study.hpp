#pragma once

#include <string>
#include <vector>

#include "lathom/scenario/config.hpp"

namespace lathom::scenario {

/// One ensemble member. Tensor entries are divided by the mean lambda0.
struct StudyMember {
  double size = 0.0;
  int structure = 0;
  int variant = 0;
  std::uint64_t geometry_seed = 0;
  std::uint64_t random_seed = 0;
  int nodes = 0;
  int elements = 0;
  Mat3 normalized = Mat3::Zero();
};

/// Statistics over all members of one RVE size.
struct StudySummary {
  double size = 0.0;
  int members = 0;
  double mean_diagonal = 0.0, std_diagonal = 0.0;  // over every diagonal entry
  double mean_off_diagonal = 0.0, std_off_diagonal = 0.0;  // magnitudes
};

struct StudyResult {
  std::vector<StudyMember> members;  // size-major, then structure, then variant
  std::vector<StudySummary> summaries;
  double lower_bound = 0.0;  // harmonic mean of the lognormal field relative to its mean
  double seconds = 0.0;
};

/// Seeds of member (structure s, variant v): geometry.seed + s and
/// random.seed + s * variants + v, so members never depend on thread scheduling.
StudyResult run_study(const ScenarioConfig& config, int threads = 1);

void write_study(const ScenarioConfig& config, const StudyResult& result, const std::string& out_dir);

}  // namespace lathom::scenario
