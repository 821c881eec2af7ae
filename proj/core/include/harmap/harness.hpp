#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "harmap/families.hpp"
#include "harmap/functionals.hpp"
#include "harmap/laplace.hpp"

namespace harmap {

/// Process exit codes of the CLI.
enum ExitCode : int {
  kExitChainHolds = 0,
  kExitChainViolated = 1,
  kExitUndefined = 2,
  kExitConfigError = 3,
  kExitNotConverged = 4,
};

struct SolverCase {
  DomainSpec domain;
  // Boundary: exactly one of trace family, constant vector, or explicit table.
  std::optional<std::string> trace_family;
  ParamMap trace_params;
  std::optional<Eigen::VectorXd> constant;
  std::vector<std::vector<double>> table;  // one row per boundary node
  double tol = 1e-10;
  int max_iter = 200000;

  BoundaryData boundary(int resolution) const;
  std::string label() const;
};

struct CaseConfig {
  // Analytic case when `solver` is empty.
  std::string family;
  ParamMap params;
  std::optional<DomainSpec> domain;
  std::optional<SolverCase> solver;

  std::vector<int> resolutions;
  Thresholds thresholds;
  std::vector<std::pair<std::string, std::vector<double>>> sweep;
  std::pair<double, double> order_band{1.7, 2.3};
  std::optional<std::string> output_dir;

  bool is_solver() const { return solver.has_value(); }
};

/// Parses and validates a JSON config document. Throws Error(InvalidConfig).
CaseConfig parse_config(const std::string& json_text);
CaseConfig load_config(const std::string& path);

struct RunOptions {
  std::string out_dir = "harmap_out";
  bool fields = false;
  bool quiet = false;
  int threads = 1;
};

struct CaseRun {
  std::vector<VerificationReport> reports;        // one per resolution, ascending
  std::vector<std::vector<PointReport>> points;   // matching pointwise data
};

/// Runs the verification pipeline at every configured resolution, pairing
/// consecutive resolutions for Richardson estimates.
CaseRun run_case(const CaseConfig& config, int threads = 1);

/// JSON document written by `verify`.
std::string verify_document(const CaseConfig& config, const CaseRun& run);

int exit_code_for(Verdict v);

int cmd_verify(const CaseConfig& config, const RunOptions& opts, std::ostream& log, std::ostream& err);
int cmd_solve(const CaseConfig& config, const RunOptions& opts, std::ostream& log, std::ostream& err);
int cmd_sweep(const CaseConfig& config, const RunOptions& opts, std::ostream& log, std::ostream& err);
int cmd_convergence(const CaseConfig& config, const RunOptions& opts, std::ostream& log, std::ostream& err);

/// Entry point of the `harmap` executable.
int run_cli(int argc, char** argv);

}  // namespace harmap
