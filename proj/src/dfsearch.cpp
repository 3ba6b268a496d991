#include "pddf/dfsearch.hpp"

#include <cmath>
#include <limits>

namespace pddf {

void SearchConfig::validate(int dim) const {
  if (!(gamma > 0.0)) throw UsageError("gamma must be positive");
  if (!(theta > 0.0 && theta < 1.0)) throw UsageError("theta must lie in (0,1)");
  if (max_expansions < 1) throw UsageError("max_expansions must be >= 1");
  if (lower.has_value() != upper.has_value())
    throw UsageError("bounds require both lower and upper");
  if (lower) {
    if (static_cast<int>(lower->size()) != dim ||
        static_cast<int>(upper->size()) != dim)
      throw UsageError("bounds length does not match searched dimension");
    for (int i = 0; i < dim; ++i)
      if (!((*lower)[static_cast<size_t>(i)] <= (*upper)[static_cast<size_t>(i)]))
        throw UsageError("bounds require lower <= upper");
  }
}

namespace {

inline bool passes(double g_trial, double g_base, double gamma, double alpha) {
  // Non-finite trial values fail; ties at exact equality are accepted.
  return std::isfinite(g_trial) && g_trial <= g_base - gamma * alpha * alpha;
}

}  // namespace

SearchOutcome df_search(const Oracle& g, const Vec& w_in, const Vec& stepsizes,
                        const SearchConfig& cfg,
                        std::optional<double> g_at_start,
                        const AcceptObserver& on_accept) {
  const int dim = static_cast<int>(w_in.size());
  if (dim == 0) throw UsageError("df_search requires at least one coordinate");
  if (static_cast<int>(stepsizes.size()) != dim)
    throw UsageError("stepsize vector length does not match point");
  cfg.validate(dim);
  if (!all_finite(w_in)) throw UsageError("start point must be finite");
  for (double a : stepsizes)
    if (!(a > 0.0)) throw UsageError("tentative stepsizes must be positive");

  constexpr double kInf = std::numeric_limits<double>::infinity();

  SearchOutcome out;
  out.point = w_in;
  out.stepsizes = stepsizes;
  out.accepted.assign(static_cast<size_t>(dim), 0.0);

  Vec& w = out.point;
  auto eval_at = [&](int i, double t) {
    const double saved = w[static_cast<size_t>(i)];
    w[static_cast<size_t>(i)] = t;
    ++out.evals;
    double v = g(w);
    w[static_cast<size_t>(i)] = saved;
    return v;
  };

  double g_base = g_at_start ? *g_at_start : (++out.evals, g(w));

  for (int i = 0; i < dim; ++i) {
    const size_t ui = static_cast<size_t>(i);
    const double at = out.stepsizes[ui];
    const double wi = w[ui];

    double best_t = wi;      // coordinate value after this coordinate
    double best_g = g_base;  // oracle value there
    bool moved = false;

    for (double sgn : {+1.0, -1.0}) {
      double max_feasible = kInf;
      if (cfg.lower) {
        max_feasible = sgn > 0 ? (*cfg.upper)[ui] - wi : wi - (*cfg.lower)[ui];
        if (!(max_feasible > 0.0)) continue;  // at the bound: automatic failure
      }

      double alpha = std::min(at, max_feasible);
      double t = wi + sgn * alpha;
      if (cfg.lower)
        t = std::min(std::max(t, (*cfg.lower)[ui]), (*cfg.upper)[ui]);
      double g_t = eval_at(i, t);
      if (!passes(g_t, g_base, cfg.gamma, alpha)) continue;

      // Extrapolate while sufficient decrease against the coordinate's start
      // value holds; stop at the first failure, the expansion cap, or the
      // largest feasible step.
      moved = true;
      best_t = t;
      best_g = g_t;
      double accepted_alpha = alpha;
      for (int j = 1; j <= cfg.max_expansions; ++j) {
        double candidate = std::min(accepted_alpha / cfg.theta, max_feasible);
        if (!(candidate > accepted_alpha)) break;
        double tc = wi + sgn * candidate;
        if (cfg.lower)
          tc = std::min(std::max(tc, (*cfg.lower)[ui]), (*cfg.upper)[ui]);
        ++out.expansions;
        double g_c = eval_at(i, tc);
        if (!passes(g_c, g_base, cfg.gamma, candidate)) break;
        accepted_alpha = candidate;
        best_t = tc;
        best_g = g_c;
        if (candidate >= max_feasible) break;
      }
      break;  // +e_i accepted: never poll -e_i
    }

    if (moved && best_t == wi) moved = false;  // sub-ulp feasible step

    if (moved) {
      const double realized = best_t - wi;
      w[ui] = best_t;
      out.accepted[ui] = realized;
      out.stepsizes[ui] = std::abs(realized);
      g_base = best_g;
      if (on_accept) on_accept(i, realized, best_g);
    } else {
      out.stepsizes[ui] = cfg.theta * at;
    }
  }

  out.g_final = g_base;
  return out;
}

}  // namespace pddf
