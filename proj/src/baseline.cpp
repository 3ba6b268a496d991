#include "pddf/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace pddf {

void LsConfig::validate() const {
  if (!(gamma > 0.0)) throw UsageError("gamma must be positive");
  if (!(theta > 0.0 && theta < 1.0)) throw UsageError("theta must lie in (0,1)");
  if (!(stop_alpha > 0.0)) throw UsageError("stop_alpha must be positive");
  if (max_expansions < 1) throw UsageError("max_expansions must be >= 1");
}

namespace {

SolveReport coordinate_search(const SeparableProblem& p, const Vec& x0,
                              const LsConfig& cfg, EvalCounter& c,
                              bool structure_aware) {
  cfg.validate();
  const int n = p.dim();
  const int m = p.num_subs();
  if (static_cast<int>(x0.size()) != n)
    throw UsageError("start point length does not match dimension");
  if (p.region().kind() == FeasibleRegion::Kind::custom)
    throw UsageError("coordinate search supports box or unbounded regions only");
  if (!p.region().contains(x0)) throw UsageError("start point is not feasible");

  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.evals = EvalCounter(m);

  Vec x = x0;
  Vec cache(static_cast<size_t>(m));
  double f_cur = 0.0;
  for (int j = 0; j < m; ++j) {
    cache[static_cast<size_t>(j)] = p.evaluate_sub(j, p.gather(x, j), c);
    f_cur += cache[static_cast<size_t>(j)];
  }
  if (!std::isfinite(f_cur))
    throw EvaluationError("objective is not finite at the start point");

  rep.history.emplace_back(c.total, f_cur);
  if (cfg.record_iterates) rep.iterates.push_back(x);

  Vec alpha(static_cast<size_t>(n), 1.0);
  Vec scratch = x;
  std::vector<char> affected_mask(static_cast<size_t>(m), 0);

  SearchConfig scfg;
  scfg.gamma = cfg.gamma;
  scfg.theta = cfg.theta;
  scfg.max_expansions = cfg.max_expansions;
  const bool boxed = p.region().kind() == FeasibleRegion::Kind::box;

  rep.termination = Termination::wall_clock;
  int sweep = 0;
  for (;; ++sweep) {
    for (int i = 0; i < n; ++i) {
      const std::vector<int>& affected = p.affected_blocks(i);
      for (int j : affected) affected_mask[static_cast<size_t>(j)] = 1;

      // Values of the affected blocks at each trial, so an accepted trial
      // can refresh the cache without re-evaluating.
      std::vector<std::pair<double, Vec>> trial_log;
      auto gi = [&](const Vec& w1) {
        scratch[static_cast<size_t>(i)] = w1[0];
        double total = 0.0;
        Vec aff_vals;
        aff_vals.reserve(affected.size());
        for (int j = 0; j < m; ++j) {
          double v;
          if (affected_mask[static_cast<size_t>(j)]) {
            v = p.evaluate_sub(j, p.gather(scratch, j), c);
            aff_vals.push_back(v);
          } else if (structure_aware) {
            v = cache[static_cast<size_t>(j)];
          } else {
            v = p.evaluate_sub(j, p.gather(scratch, j), c);
          }
          total += v;
        }
        trial_log.emplace_back(w1[0], std::move(aff_vals));
        return total;
      };

      SearchConfig cfg1 = scfg;
      if (boxed) {
        cfg1.lower = Vec{p.region().lower()[static_cast<size_t>(i)]};
        cfg1.upper = Vec{p.region().upper()[static_cast<size_t>(i)]};
      }
      Vec w1{x[static_cast<size_t>(i)]};
      Vec a1{alpha[static_cast<size_t>(i)]};
      SearchOutcome out = df_search(gi, w1, a1, cfg1, f_cur);

      scratch[static_cast<size_t>(i)] = x[static_cast<size_t>(i)];
      alpha[static_cast<size_t>(i)] = out.stepsizes[0];
      if (out.accepted[0] != 0.0) {
        x[static_cast<size_t>(i)] = out.point[0];
        scratch[static_cast<size_t>(i)] = out.point[0];
        f_cur = out.g_final;
        // Refresh the cache from the accepted trial's recorded values.
        for (auto it = trial_log.rbegin(); it != trial_log.rend(); ++it) {
          if (it->first == out.point[0]) {
            for (size_t q = 0; q < affected.size(); ++q)
              cache[static_cast<size_t>(affected[q])] = it->second[q];
            break;
          }
        }
        rep.history.emplace_back(c.total, f_cur);
        if (cfg.record_iterates) rep.iterates.push_back(x);
      }
      for (int j : affected) affected_mask[static_cast<size_t>(j)] = 0;
    }

    double max_alpha = *std::max_element(alpha.begin(), alpha.end());
    TraceRow row;
    row.k = sweep + 1;
    row.inner_iters = 1;
    row.cum_evals = c.total;
    row.f = f_cur;
    row.residual = max_alpha;
    rep.trace.push_back(row);

    if (max_alpha <= cfg.stop_alpha) {
      rep.termination = Termination::outer_step_tol;
      break;
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (elapsed > cfg.wall_clock_limit) {
      rep.termination = Termination::wall_clock;
      break;
    }
  }

  rep.final_x = x;
  rep.final_f = f_cur;
  rep.outer_iters = sweep + 1;
  rep.history_pd_len = rep.history.size();
  rep.evals = c;
  rep.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

}  // namespace

SolveReport ls_solve(const SeparableProblem& p, const Vec& x0,
                     const LsConfig& cfg, EvalCounter& c) {
  return coordinate_search(p, x0, cfg, c, false);
}

SolveReport sals_solve(const SeparableProblem& p, const Vec& x0,
                       const LsConfig& cfg, EvalCounter& c) {
  return coordinate_search(p, x0, cfg, c, true);
}

SolveReport refine(const SeparableProblem& p, const SolveReport& base,
                   const LsConfig& cfg, EvalCounter& c) {
  SolveReport ref = ls_solve(p, base.final_x, cfg, c);

  SolveReport out = base;
  out.history_pd_len = base.history.size();
  double best = base.history.empty() ? ref.history.front().second
                                     : base.history.back().second;
  for (const auto& [evals, f] : ref.history) {
    best = std::min(best, f);
    out.history.emplace_back(evals, best);
  }
  int k_offset = base.trace.empty() ? 0 : base.trace.back().k;
  for (TraceRow row : ref.trace) {
    row.k += k_offset;
    out.trace.push_back(row);
  }
  out.final_x = ref.final_x;
  out.final_f = ref.final_f;
  out.termination = Termination::refined;
  out.outer_iters = base.outer_iters + ref.outer_iters;
  out.evals = c;
  out.wall_time_sec = base.wall_time_sec + ref.wall_time_sec;
  return out;
}

}  // namespace pddf
