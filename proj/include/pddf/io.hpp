#pragma once

#include <iosfwd>
#include <string>

#include "pddf/bench.hpp"

namespace pddf {

/// Solver configuration shared by the CLI and the suite runner. gamma/theta/
/// max_expansions apply to both the penalty solver's block searches and the
/// coordinate-search baselines; stop_alpha to the baselines and refinement.
struct RunConfig {
  PenaltyParams pd;
  SearchConfig search;
  LsConfig ls;
  LsConfig refine;  // the post-solve refinement pass
  int workers = 1;

  SolverSetup setup() const;
  /// Recognized keys: gamma, theta, xi, xi_schedule, tau0, tau_growth,
  /// tau_cap, outer_step_tol, max_outer, wall_clock_limit, workers,
  /// max_expansions, stop_alpha, refine_stop_alpha. Unknown keys are usage
  /// errors.
  void apply(const std::string& key, const std::string& value);
  void print(std::ostream& os) const;
};

RunConfig load_config(const std::string& path, RunConfig base = {});

/// Problem/suite files: one or more blocks
///   problem <id>
///     pattern = chain | shared_head | shared_all | disjoint | native
///     ...
///   end
SuiteSpec load_suite(const std::string& path);
/// A problem file is a suite file with exactly one entry.
SuiteEntry load_problem_file(const std::string& path);

void write_records_csv(const std::vector<RunRecord>& records,
                       const std::string& dir);
std::vector<RunRecord> read_records_csv(const std::string& dir);

void write_trace_csv(const SolveReport& rep, const std::string& path);

void write_profile_csv(const std::vector<ProfileCurve>& curves,
                       const std::string& path, const std::string& x_name);
void write_profile_svg(const std::vector<ProfileCurve>& curves,
                       const std::string& path, const std::string& title,
                       const std::string& x_label);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace pddf
