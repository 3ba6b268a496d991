#pragma once

#include <map>
#include <optional>
#include <string>

#include "pddf/baseline.hpp"
#include "pddf/pd_solver.hpp"
#include "pddf/problem.hpp"

namespace pddf {

/// A test function used to assemble benchmark problems.
struct BaseFunction {
  std::string name;
  int dim = 0;
  Oracle oracle;
  GradientFn gradient;
  std::optional<double> known_fstar;
  std::optional<Vec> known_xstar;
  Vec default_start;
  std::optional<std::pair<double, double>> default_box;
};

/// The bundled functions at their default dimensions.
std::vector<BaseFunction> base_library();
/// Lookup by name; dimension-parametric families accept a dim override.
/// Unknown names are usage errors.
BaseFunction base_function(const std::string& name,
                           std::optional<int> dim = std::nullopt);

using BoxSpec = std::optional<std::pair<double, double>>;

/// m copies of the base linked sequentially: the last variable of one copy
/// is the first variable of the next. n = m*(dim-1)+1.
SeparableProblem generate_chain(const BaseFunction& base, int m,
                                BoxSpec box = std::nullopt);
/// The first s coordinates are common to all blocks; the rest are private.
SeparableProblem generate_shared_head(const std::vector<BaseFunction>& bases,
                                      int s, BoxSpec box = std::nullopt);
/// One variable (the last) common to all blocks; the rest private per copy.
SeparableProblem generate_shared_all(const BaseFunction& base, int m,
                                     BoxSpec box = std::nullopt);
/// m independent copies with no shared variables.
SeparableProblem generate_disjoint(const BaseFunction& base, int m,
                                   BoxSpec box = std::nullopt);
/// Families whose natural sub-function structure is index-dependent
/// (consecutive or otherwise overlapping blocks): TRIDIA, BROYDN3D, MOREBV,
/// ARWHEAD, ENGVAL, FREUROTH, WOODS, DIXMAANA.
SeparableProblem make_cps(const std::string& family, int n,
                          BoxSpec box = std::nullopt);

/// One entry of a benchmark suite.
struct SuiteEntry {
  std::string id;
  std::string pattern;  // chain | shared_head | shared_all | disjoint | native
  std::vector<std::string> bases;  // "NAME" or "NAME:dim"
  std::string family;              // native pattern
  int n = 0;
  int m = 1;
  int s = 1;
  BoxSpec box;
  std::optional<Vec> start;  // explicit start point; must be feasible
  std::optional<double> fstar;
};

struct SuiteSpec {
  std::vector<SuiteEntry> entries;
};

struct BenchProblem {
  std::string id;
  SeparableProblem problem;
  std::optional<double> known_fstar;
};

BenchProblem build_problem(const SuiteEntry& e);
BenchProblem build_problem_default_start(const SuiteEntry& e);
std::vector<BenchProblem> build_suite(const SuiteSpec& spec);
/// The bundled 12-problem comparison suite.
SuiteSpec standard_suite();

struct RunRecord {
  std::string problem_id;
  std::string solver_id;
  int n = 0;
  int m = 0;
  double f0 = 0;
  std::vector<std::pair<std::int64_t, double>> history;
  double final_f = 0;
  std::int64_t total_evals = 0;
  double wall_time_sec = 0;
  std::string termination;
};

/// f(x0) - f(xS) >= (1 - eps) * (f(x0) - f(xbest)).
bool solved(double f0, double fS, double fbest, double eps);

struct ProfileCurve {
  std::string solver;
  Vec grid;      // budget groups or performance ratios, increasing
  Vec fraction;  // fraction of problems solved, non-decreasing, <= 1
};

/// Fraction of problems solved within kappa groups of m*(n+1)
/// sub-evaluations, per solver. The best objective per problem is taken over
/// all solvers at their full budgets; problems nobody improves are excluded.
std::vector<ProfileCurve> data_profile(const std::vector<RunRecord>& records,
                                       double eps, const Vec& kappa_grid,
                                       std::vector<std::string>* excluded = nullptr);

enum class ProfileMetric { sub_evals_to_solved, wall_time };

/// Fraction of problems solved within a given cost ratio of the best solver.
/// Unsolved runs get an infinite ratio.
std::vector<ProfileCurve> performance_profile(
    const std::vector<RunRecord>& records, ProfileMetric metric, double eps,
    std::vector<std::string>* excluded = nullptr);

/// Everything needed to run one solver on one problem.
struct SolverSetup {
  PenaltyParams pd;
  SearchConfig search;
  LsConfig ls;
  LsConfig refine;          // configuration of the post-solve refinement
  bool refine_after_pd = true;
  int workers = 1;          // block-search workers for pddf-parallel
};

/// Runs every solver on every problem with fresh counters. A solver failure
/// on one problem is recorded (termination "error") without aborting the
/// suite. eval_delay_sec > 0 adds an artificial pause to every
/// sub-evaluation for wall-time studies.
std::vector<RunRecord> run_suite(const std::vector<BenchProblem>& problems,
                                 const std::vector<std::string>& solver_ids,
                                 const SolverSetup& setup,
                                 double eval_delay_sec = 0.0,
                                 std::vector<SolveReport>* reports = nullptr);

/// A copy of the problem whose oracles pause for `delay_sec` per call.
SeparableProblem with_eval_delay(const SeparableProblem& p, double delay_sec);

/// One run of a single solver (the run_suite building block).
SolveReport run_solver(const SeparableProblem& p, const std::string& solver_id,
                       const SolverSetup& setup, EvalCounter& c);

}  // namespace pddf
