#pragma once

#include <cstdint>
#include <utility>

#include "pddf/dfsearch.hpp"
#include "pddf/problem.hpp"

namespace pddf {

struct PenaltyParams {
  double tau0 = 1.0;
  double tau_growth = 1.1;
  double tau_cap = 1e8;
  double xi = 1e-2;
  bool xi_decreasing = false;  // xi_k = xi * 0.9^k instead of constant
  double outer_step_tol = 1e-2;  // <= 0 disables the step test
  int max_outer = 100;
  double wall_clock_limit = 600.0;  // seconds

  void validate() const;
};

/// Current outer iterate: x plus one duplicate block per sub-function, the
/// penalty weight tau, tentative stepsizes per block, and cached oracle
/// values at the duplicates (f_at_ys[j] = f_j(ys[j])).
struct PenaltyState {
  Vec x;
  std::vector<Vec> ys;
  double tau = 1.0;
  std::vector<Vec> stepsizes;
  Vec f_at_ys;
};

/// State at x with ys[j] = x_{S_j}; oracle caches are seeded from `f_blocks`
/// when given (values of f_j at x), otherwise marked unknown.
PenaltyState make_initial_state(const SeparableProblem& p, const Vec& x,
                                double tau, const Vec* f_blocks = nullptr);

/// Penalty objective: sum_j f_j(ys[j]) + (tau/2) ||x_{S_j} - ys[j]||^2.
/// Counts exactly m sub-evaluations.
double penalty_value(const PenaltyState& s, const SeparableProblem& p,
                     EvalCounter& c);
/// Same value from the cached f_j(ys[j]); no oracle calls.
double penalty_value_cached(const PenaltyState& s, const SeparableProblem& p);

/// Analytic gradient of the penalty terms w.r.t. x:
/// g_i = tau * sum over blocks containing i of (x_i - matching y entry).
/// Makes no oracle calls.
Vec penalty_grad_x(const PenaltyState& s, const SeparableProblem& p);

/// Exact minimizer of the penalty over x in the region: coordinatewise clip
/// of the coverage-weighted block average for boxes (and the identity case);
/// projection of that average for custom regions, which is exact only under
/// uniform coverage -- otherwise *inexact is set.
Vec x_update(const SeparableProblem& p, const std::vector<Vec>& ys, double tau,
             bool* inexact = nullptr);

/// ||x - project(x - g)||_2.
double stationarity_residual(const Vec& x, const Vec& g,
                             const FeasibleRegion& region);

struct InnerStopCheck {
  double max_alpha = 0;
  double alpha_threshold = 0;  // xi / max(tau, 1)
  double residual = 0;
  double xi = 0;
  bool stepsize_ok = false;
  bool residual_ok = false;
  bool ok() const { return stepsize_ok && residual_ok; }
};

InnerStopCheck check_inner_stop(const PenaltyState& s,
                                const SeparableProblem& p, double xi_k);
bool inner_stop(const PenaltyState& s, const SeparableProblem& p, double xi_k);

/// Per-inner-iteration record: the penalty value before the block searches,
/// after them (same x), and after the x update (absent on the stopping
/// iteration), plus the stopping quantities and evaluation counts.
struct InnerIterLog {
  int outer_k = 0;
  int inner_l = 0;
  double p_before = 0;
  double p_after_blocks = 0;
  double p_after_x = 0;  // NaN when the iteration stopped before the x update
  double max_alpha = 0;
  double residual = 0;
  long search_evals = 0;
  int expansions = 0;
};

enum class Termination { outer_step_tol, max_outer, wall_clock, refined };
const char* to_string(Termination t);

struct TraceRow {
  int k = 0;
  double tau = 0;
  int inner_iters = 0;
  std::int64_t cum_evals = 0;
  double f = 0;
  double residual = 0;
  double feas_gap = 0;
};

/// Snapshot of the state returned by the inner solver at outer iteration k,
/// kept so invariants can be re-verified after the run.
struct OuterSnapshot {
  int k = 0;
  double xi = 0;
  bool stopped_by_test = false;  // inner loop ended via the stopping test
  PenaltyState state;
};

struct SolveReport {
  Vec final_x;
  double final_f = 0;
  /// (cumulative sub-evaluations, best objective so far), recorded at the
  /// start point and at every outer iterate.
  std::vector<std::pair<std::int64_t, double>> history;
  std::size_t history_pd_len = 0;  // boundary when a refinement was appended
  Termination termination = Termination::max_outer;
  int outer_iters = 0;
  EvalCounter evals;
  std::vector<TraceRow> trace;
  std::vector<InnerIterLog> inner_log;
  std::vector<OuterSnapshot> snapshots;
  std::vector<Vec> iterates;  // filled by baseline solvers on request
  bool inexact_x_update = false;
  bool inner_cap_hit = false;
  double wall_time_sec = 0;
};

struct DfamResult {
  PenaltyState state;
  int inner_iters = 0;
  bool cap_hit = false;
  bool wall_hit = false;
  bool inexact_x_update = false;
};

/// Alternate minimization for one penalty subproblem: derivative-free block
/// searches on each duplicate (unconstrained; the region only enters the x
/// update), then the exact x update, until the stepsize/residual stopping
/// test holds. Stepsizes are reset to ones on entry. Block searches within an
/// iteration are independent and may run on `workers` threads; results are
/// identical for any worker count.
DfamResult dfam(const SeparableProblem& p, PenaltyState start, double tau_k,
                double xi_k, const SearchConfig& cfg, int workers,
                EvalCounter& c, std::vector<InnerIterLog>* log = nullptr,
                int outer_k = 0, double wall_deadline_sec = -1.0,
                long long inner_cap = -1);

/// tau_k = min(tau0 * growth^k, cap), computed by the running product the
/// solver uses.
double tau_at(const PenaltyParams& params, int k);

/// Sequential penalty loop: solve subproblems for growing tau with warm
/// starts (previous solution when its penalty value does not exceed f(x0),
/// the initial point otherwise) until the outer step tolerance, the
/// iteration cap, or the wall clock stops it.
SolveReport sequential_penalty(const SeparableProblem& p,
                               const PenaltyParams& params,
                               const SearchConfig& cfg, int workers,
                               EvalCounter& c);

}  // namespace pddf
