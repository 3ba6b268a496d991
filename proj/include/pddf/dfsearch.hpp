#pragma once

#include <optional>

#include "pddf/problem.hpp"

namespace pddf {

/// Parameters of the coordinate search. When lower/upper are set they
/// restrict the searched coordinates to a box and trial steps are truncated
/// to the maximal feasible stepsize.
struct SearchConfig {
  double gamma = 1e-6;     // sufficient-decrease coefficient
  double theta = 0.5;      // contraction factor in (0,1)
  int max_expansions = 50; // cap on extrapolation trials per direction
  std::optional<Vec> lower;
  std::optional<Vec> upper;

  void validate(int dim) const;
};

struct SearchOutcome {
  Vec point;       // point after all coordinates are processed
  Vec stepsizes;   // tentative stepsizes to carry into the next call
  Vec accepted;    // realized signed step per coordinate, 0 if rejected
  long evals = 0;  // oracle calls made by this search
  int expansions = 0;  // extrapolation trials beyond the first poll
  double g_final = 0;  // oracle value at `point`
};

/// Invoked after each accepted coordinate: (coordinate, realized step,
/// oracle value at the new point).
using AcceptObserver = std::function<void(int, double, double)>;

/// One pass of coordinate polling with sufficient decrease g(w + a d) <=
/// g(w) - gamma a^2, +e_i tried before -e_i, geometric extrapolation by
/// 1/theta on success, contraction by theta on double failure. Oracle values
/// are cached so g at each coordinate's start point is evaluated at most
/// once; pass g_at_start when the value at w is already known.
SearchOutcome df_search(const Oracle& g, const Vec& w, const Vec& stepsizes,
                        const SearchConfig& cfg,
                        std::optional<double> g_at_start = std::nullopt,
                        const AcceptObserver& on_accept = nullptr);

}  // namespace pddf
