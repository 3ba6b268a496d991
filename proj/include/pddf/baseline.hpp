#pragma once

#include "pddf/pd_solver.hpp"

namespace pddf {

struct LsConfig {
  double gamma = 1e-6;
  double theta = 0.5;
  int max_expansions = 50;
  double stop_alpha = 1e-4;  // stop when every tentative stepsize is below
  double wall_clock_limit = 600.0;
  bool record_iterates = false;

  void validate() const;
};

/// Coordinate line search with extrapolation on the original problem,
/// box-feasible. Every trial evaluates all m sub-functions.
SolveReport ls_solve(const SeparableProblem& p, const Vec& x0,
                     const LsConfig& cfg, EvalCounter& c);

/// Structure-aware variant: identical iterates and objective values as
/// ls_solve, but a trial along coordinate i re-evaluates only the blocks
/// whose index set contains i, reading the rest from a value cache.
SolveReport sals_solve(const SeparableProblem& p, const Vec& x0,
                       const LsConfig& cfg, EvalCounter& c);

/// Runs the coordinate search from a solver's final point and concatenates
/// the histories onto one evaluation axis.
SolveReport refine(const SeparableProblem& p, const SolveReport& base,
                   const LsConfig& cfg, EvalCounter& c);

}  // namespace pddf
