#pragma once

#include <string>
#include <vector>

namespace lathom::scenario {

/// One tolerance check: passes when the stated relation between measured and
/// expected holds within tolerance.
struct Check {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string criterion;  // human readable relation, e.g. "|rel| <= tol"
  bool pass = false;
};

struct VerifyReport {
  std::string suite;
  std::vector<Check> checks;
  std::vector<std::string> notes;  // measured values that carry no pass/fail
  double seconds = 0.0;
  bool passed() const;
};

struct VerifyOptions {
  std::string config_dir;  // empty: the configs directory of the source tree
  std::string out_dir;     // non-empty: CSV outputs of every run go below it
  int threads = 1;
};

/// Suites: linear, nonlinear, transient, htc, rve.
std::vector<std::string> verify_suites();
VerifyReport run_verify(const std::string& suite, const VerifyOptions& options = {});

VerifyReport verify_linear(const VerifyOptions& options = {});
VerifyReport verify_nonlinear(const VerifyOptions& options = {});
VerifyReport verify_transient(const VerifyOptions& options = {});
VerifyReport verify_htc(const VerifyOptions& options = {});
VerifyReport verify_rve(const VerifyOptions& options = {});

/// Multi-line report, one line per check, ending with an overall verdict.
std::string format_report(const VerifyReport& report);

}  // namespace lathom::scenario
