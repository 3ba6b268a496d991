#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pddf/baseline.hpp"
#include "pddf/bench.hpp"

using namespace pddf;

namespace {

SubFunction shifted_quad(std::vector<int> idx, Vec target) {
  SubFunction s;
  s.block.indices = std::move(idx);
  s.oracle = [target](const Vec& y) {
    double v = 0;
    for (size_t i = 0; i < y.size(); ++i) {
      double d = y[i] - target[i];
      v += d * d;
    }
    return v;
  };
  s.test_gradient = [target](const Vec& y) {
    Vec g(y.size());
    for (size_t i = 0; i < y.size(); ++i) g[i] = 2.0 * (y[i] - target[i]);
    return g;
  };
  return s;
}

Vec full_gradient(const SeparableProblem& p, const Vec& x) {
  Vec g(x.size(), 0.0);
  for (int j = 0; j < p.num_subs(); ++j) {
    Vec gy = p.sub(j).test_gradient(p.gather(x, j));
    const auto& idx = p.sub(j).block.indices;
    for (size_t q = 0; q < gy.size(); ++q)
      g[static_cast<size_t>(idx[q])] += gy[q];
  }
  return g;
}

}  // namespace

TEST_CASE("1-D quadratic over a box converges below the step threshold") {
  SeparableProblem p(1, {shifted_quad({0}, {1.0})},
                     FeasibleRegion::box({0.0}, {2.0}), {0.0});
  LsConfig cfg;
  EvalCounter c(1);
  SolveReport rep = ls_solve(p, {0.0}, cfg, c);
  CHECK(std::abs(rep.final_x[0] - 1.0) <= 10 * cfg.stop_alpha);
  CHECK(rep.final_f <= 1e-6);
  CHECK(rep.termination == Termination::outer_step_tol);
}

TEST_CASE("pure contraction takes exactly 14 sweeps at the defaults") {
  // start at the strict minimizer: no poll ever succeeds, every sweep halves
  // every stepsize; 0.5^14 is the first power of 0.5 below 1e-4
  SeparableProblem p(3, {shifted_quad({0, 1, 2}, {0, 0, 0})},
                     FeasibleRegion::box(Vec(3, -5.0), Vec(3, 5.0)),
                     Vec(3, 0.0));
  LsConfig cfg;
  EvalCounter c(1);
  SolveReport rep = ls_solve(p, Vec(3, 0.0), cfg, c);
  CHECK(rep.outer_iters == 14);
  CHECK(rep.final_x == Vec(3, 0.0));
  // each sweep costs 2*n*m after the initial full evaluation
  CHECK(c.total == 1 + 14 * 2 * 3 * 1);
}

TEST_CASE("a sweep with no acceptances and no expansions costs 2nm") {
  SeparableProblem p(4,
                     {shifted_quad({0, 1}, {0, 0}), shifted_quad({2, 3}, {0, 0}),
                      shifted_quad({1, 2}, {0, 0})},
                     FeasibleRegion::unbounded(), Vec(4, 0.0));
  LsConfig cfg;
  EvalCounter c(3);
  SolveReport rep = ls_solve(p, Vec(4, 0.0), cfg, c);
  const int n = 4, m = 3;
  CHECK(c.total == m + rep.outer_iters * 2 * n * m);
}

TEST_CASE("SALS matches LS exactly while counting fewer evaluations") {
  for (const char* family : {"TRIDIA", "BROYDN3D"}) {
    SeparableProblem p = make_cps(family, 12);
    LsConfig cfg;
    cfg.record_iterates = true;
    EvalCounter cl(p.num_subs()), cs(p.num_subs());
    SolveReport ls = ls_solve(p, p.start(), cfg, cl);
    SolveReport sa = sals_solve(p, p.start(), cfg, cs);

    CHECK(ls.final_x == sa.final_x);
    CHECK(ls.final_f == sa.final_f);
    REQUIRE(ls.iterates.size() == sa.iterates.size());
    for (size_t t = 0; t < ls.iterates.size(); ++t)
      CHECK(ls.iterates[t] == sa.iterates[t]);
    REQUIRE(ls.history.size() == sa.history.size());
    for (size_t t = 0; t < ls.history.size(); ++t)
      CHECK(ls.history[t].second == sa.history[t].second);
    CHECK(cs.total < cl.total);
  }
}

TEST_CASE("SALS equals LS when a single block covers everything") {
  SeparableProblem p(3, {shifted_quad({0, 1, 2}, {1, -1, 0.5})},
                     FeasibleRegion::unbounded(), Vec(3, 0.0));
  LsConfig cfg;
  EvalCounter cl(1), cs(1);
  SolveReport ls = ls_solve(p, p.start(), cfg, cl);
  SolveReport sa = sals_solve(p, p.start(), cfg, cs);
  CHECK(cl.total == cs.total);
  CHECK(ls.final_x == sa.final_x);
}

TEST_CASE("per-trial cost: disjoint blocks cost one evaluation per poll") {
  // 5 disjoint 2-variable blocks; a poll along any coordinate touches
  // exactly one block, so a no-acceptance sweep costs 2*n evals instead of
  // 2*n*m.
  std::vector<SubFunction> subs;
  for (int j = 0; j < 5; ++j)
    subs.push_back(shifted_quad({2 * j, 2 * j + 1}, {0, 0}));
  SeparableProblem p(10, std::move(subs), FeasibleRegion::unbounded(),
                     Vec(10, 0.0));
  LsConfig cfg;
  EvalCounter c(5);
  SolveReport rep = sals_solve(p, p.start(), cfg, c);
  CHECK(c.total == 5 + rep.outer_iters * 2 * 10);
}

TEST_CASE("cache coherence after accepted steps") {
  SeparableProblem p = make_cps("ENGVAL", 8);
  LsConfig cfg;
  cfg.record_iterates = true;
  EvalCounter c(p.num_subs());
  SolveReport rep = sals_solve(p, p.start(), cfg, c);
  // recompute every sub-value from scratch at the final point
  EvalCounter side(p.num_subs());
  double f = p.evaluate_full(rep.final_x, side);
  CHECK(f == rep.final_f);
}

TEST_CASE("feasibility of all trial points in a box") {
  auto lower = Vec{-0.5, -0.5}, upper = Vec{1.5, 0.75};
  SubFunction probe = shifted_quad({0, 1}, {1.0, 1.0});
  Oracle inner = probe.oracle;
  probe.oracle = [inner, lower, upper](const Vec& y) {
    // blocks see only their own coordinates; here the block is the whole box
    for (size_t i = 0; i < y.size(); ++i) {
      CHECK(y[i] >= lower[i]);
      CHECK(y[i] <= upper[i]);
    }
    return inner(y);
  };
  SeparableProblem p(2, {probe}, FeasibleRegion::box(lower, upper), {0.0, 0.0});
  LsConfig cfg;
  EvalCounter c(1);
  SolveReport rep = ls_solve(p, {0.0, 0.0}, cfg, c);
  CHECK(rep.final_x[0] <= 1.5);
  CHECK(rep.final_x[1] == 0.75);  // clipped optimum sits on the bound
}

TEST_CASE("descent with aggregated sufficient decrease along the run") {
  SeparableProblem p = make_cps("WOODS", 8);
  LsConfig cfg;
  EvalCounter c(p.num_subs());
  SolveReport rep = ls_solve(p, p.start(), cfg, c);
  for (size_t t = 1; t < rep.history.size(); ++t)
    CHECK(rep.history[t].second <= rep.history[t - 1].second);
  for (size_t t = 1; t < rep.history.size(); ++t)
    CHECK(rep.history[t].first > rep.history[t - 1].first);
}

TEST_CASE("refining an already stationary point accepts nothing") {
  SeparableProblem p(2, {shifted_quad({0, 1}, {0.25, -0.5})},
                     FeasibleRegion::unbounded(), {0.0, 0.0});
  LsConfig cfg;
  EvalCounter c(1);
  SolveReport first = ls_solve(p, {0.25, -0.5}, cfg, c);
  CHECK(first.final_x == Vec{0.25, -0.5});

  SolveReport again = refine(p, first, cfg, c);
  CHECK(again.final_x == first.final_x);
  CHECK(again.termination == Termination::refined);
}

TEST_CASE("refinement continues the evaluation axis: first index = last + m") {
  SeparableProblem p = make_cps("TRIDIA", 6);
  PenaltyParams params;
  EvalCounter c(p.num_subs());
  SolveReport pd = sequential_penalty(p, params, SearchConfig{}, 1, c);
  std::int64_t pd_last = pd.history.back().first;
  SolveReport full = refine(p, pd, LsConfig{}, c);
  REQUIRE(full.history.size() > pd.history.size());
  CHECK(full.history[pd.history.size()].first == pd_last + p.num_subs());
  CHECK(full.history_pd_len == pd.history.size());
  // combined history stays monotone on one axis
  for (size_t t = 1; t < full.history.size(); ++t) {
    CHECK(full.history[t].second <= full.history[t - 1].second);
    CHECK(full.history[t].first > full.history[t - 1].first);
  }
}

TEST_CASE("refined chained quadratic reaches the analytic optimum closely") {
  SeparableProblem p = make_cps("TRIDIA", 4);
  // xi at 1e-4 puts the pre-refinement residual at xi level; the loose
  // default xi leaves it dominated by the duplicate gap
  PenaltyParams params;
  params.xi = 1e-4;
  params.outer_step_tol = 1e-5;
  params.max_outer = 200;
  EvalCounter c(p.num_subs());
  SolveReport pd = sequential_penalty(p, params, SearchConfig{}, 1, c);
  Vec g_pd = full_gradient(p, pd.final_x);
  CHECK(stationarity_residual(pd.final_x, g_pd, p.region()) <= 1e-2);

  SolveReport full = refine(p, pd, LsConfig{}, c);
  CHECK(full.final_f <= 1e-6);
  Vec g = full_gradient(p, full.final_x);
  CHECK(stationarity_residual(full.final_x, g, p.region()) <= 1e-3);
  // analytic optimum x_i = 2^-i (0-based)
  for (int i = 0; i < 4; ++i)
    CHECK(full.final_x[static_cast<size_t>(i)] ==
          doctest::Approx(std::pow(2.0, -i)).epsilon(1e-2));
}

TEST_CASE("custom regions are rejected by the coordinate search") {
  auto proj = [](const Vec& v) { return v; };
  SeparableProblem p(1, {shifted_quad({0}, {0})},
                     FeasibleRegion::custom(proj), {0.0});
  LsConfig cfg;
  EvalCounter c(1);
  CHECK_THROWS_AS(ls_solve(p, {0.0}, cfg, c), UsageError);
}
