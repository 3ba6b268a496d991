#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pddf/dfsearch.hpp"

using namespace pddf;

namespace {

Oracle counted(const Oracle& g, long& calls) {
  return [&calls, g](const Vec& w) {
    ++calls;
    return g(w);
  };
}

}  // namespace

TEST_CASE("hand trace: quadratic from w=3 extrapolates to -1") {
  // g(w)=w^2, alpha=1: +1 fails, -1 passes, expansions pass at 2 and 4,
  // fail at 8.
  long calls = 0;
  Oracle g = counted([](const Vec& w) { return w[0] * w[0]; }, calls);
  SearchConfig cfg;
  SearchOutcome out = df_search(g, {3.0}, {1.0}, cfg);
  CHECK(out.point == Vec{-1.0});
  CHECK(out.accepted == Vec{-4.0});
  CHECK(out.stepsizes == Vec{4.0});
  CHECK(out.evals == 6);  // base + 2 polls + 3 expansion trials
  CHECK(out.evals == calls);
  CHECK(out.g_final == 1.0);
  CHECK(out.expansions == 3);
}

TEST_CASE("at the minimizer both polls fail and the stepsize contracts") {
  Oracle g = [](const Vec& w) { return w[0] * w[0]; };
  SearchOutcome out = df_search(g, {0.0}, {1.0}, SearchConfig{});
  CHECK(out.point == Vec{0.0});
  CHECK(out.accepted == Vec{0.0});
  CHECK(out.stepsizes == Vec{0.5});
  CHECK(out.evals == 3);
}

TEST_CASE("hand trace: two coordinates reach the origin") {
  Oracle g = [](const Vec& w) { return w[0] * w[0] + w[1] * w[1]; };
  SearchOutcome out = df_search(g, {1.0, 1.0}, {1.0, 1.0}, SearchConfig{});
  CHECK(out.point == Vec{0.0, 0.0});
  CHECK(out.accepted == Vec{-1.0, -1.0});
  CHECK(out.stepsizes == Vec{1.0, 1.0});
  // base + coord 1: two polls + 1 failed expansion; coord 2 same, with the
  // base value for coord 2 reused from coord 1's accepted trial.
  CHECK(out.evals == 7);
}

TEST_CASE("monotone descent with aggregated sufficient decrease") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-4, 4);
  Oracle g = [](const Vec& w) {
    double s = 0;
    for (size_t i = 0; i < w.size(); ++i)
      s += (i + 1.0) * w[i] * w[i] + 0.3 * std::sin(3 * w[i]);
    return s;
  };
  SearchConfig cfg;
  for (int t = 0; t < 50; ++t) {
    Vec w{u(rng), u(rng), u(rng), u(rng)};
    Vec a{0.7, 1.3, 0.2, 2.0};
    SearchOutcome out = df_search(g, w, a, cfg);
    double dec = 0;
    for (double s : out.accepted) dec += s * s;
    CHECK(g(out.point) <= g(w) - cfg.gamma * dec + 1e-15);
    CHECK(out.g_final == g(out.point));
    // point reconstruction from accepted steps
    Vec rec = w;
    for (size_t i = 0; i < rec.size(); ++i) rec[i] += out.accepted[i];
    CHECK(rec == out.point);
  }
}

TEST_CASE("eval accounting bound without expansions") {
  // strictly convex, tiny steps: no acceptance at all
  Oracle g = [](const Vec& w) {
    double s = 0;
    for (double x : w) s += x * x;
    return s;
  };
  long calls = 0;
  Oracle gc = counted(g, calls);
  Vec w{0.0, 0.0, 0.0};
  SearchOutcome out = df_search(gc, w, {1, 1, 1}, SearchConfig{});
  CHECK(out.evals <= 1 + 2 * 3);
  CHECK(out.expansions == 0);
  CHECK(calls == out.evals);
}

TEST_CASE("stepsize decay under a constant oracle") {
  Oracle g = [](const Vec&) { return 5.0; };
  Vec a{1.0, 0.5};
  Vec w{2.0, 3.0};
  SearchConfig cfg;
  double expect0 = 1.0, expect1 = 0.5;
  for (int t = 1; t <= 6; ++t) {
    SearchOutcome out = df_search(g, w, a, cfg);
    expect0 *= cfg.theta;
    expect1 *= cfg.theta;
    CHECK(out.accepted == Vec{0.0, 0.0});
    CHECK(out.stepsizes[0] == expect0);
    CHECK(out.stepsizes[1] == expect1);
    a = out.stepsizes;
  }
}

TEST_CASE("g at the coordinate start is evaluated once and reused") {
  long calls = 0;
  Oracle g = counted([](const Vec& w) { return w[0] * w[0] + w[1] * w[1]; },
                     calls);
  SearchOutcome out = df_search(g, {1.0, 1.0}, {1.0, 1.0}, SearchConfig{}, 2.0);
  CHECK(out.point == Vec{0.0, 0.0});
  CHECK(out.evals == 6);  // the supplied start value saves the base call
  CHECK(calls == 6);
}

TEST_CASE("non-finite trial values count as failed sufficient decrease") {
  Oracle g = [](const Vec& w) {
    if (std::abs(w[0]) > 1.5) return std::numeric_limits<double>::quiet_NaN();
    return w[0] * w[0];
  };
  // From 1: +d hits NaN (fail), -d passes to 0, expansion to -1 fails
  // (g(-1)=1 > 1-4e-6), so the accepted step is -1.
  SearchOutcome out = df_search(g, {1.0}, {1.0}, SearchConfig{});
  CHECK(out.point == Vec{0.0});
  CHECK(out.accepted == Vec{-1.0});
}

TEST_CASE("zero-dimensional input is a usage error") {
  Oracle g = [](const Vec&) { return 0.0; };
  CHECK_THROWS_AS(df_search(g, {}, {}, SearchConfig{}), UsageError);
  CHECK_THROWS_AS(df_search(g, {1.0}, {-1.0}, SearchConfig{}), UsageError);
  SearchConfig bad;
  bad.theta = 1.5;
  CHECK_THROWS_AS(df_search(g, {1.0}, {1.0}, bad), UsageError);
}

TEST_CASE("approximate stationarity after double rejection on quadratics") {
  // g(w) = sum a_i w_i^2 with known gradient Lipschitz constant L = 2 max a.
  Vec coef{1.0, 4.0, 0.5, 2.5};
  Oracle g = [&](const Vec& w) {
    double s = 0;
    for (size_t i = 0; i < w.size(); ++i) s += coef[i] * w[i] * w[i];
    return s;
  };
  double L = 8.0;
  SearchConfig cfg;
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 40; ++t) {
    Vec w{u(rng), u(rng), u(rng), u(rng)};
    Vec a{0.3, 0.3, 0.3, 0.3};
    SearchOutcome out = df_search(g, w, a, cfg);
    double amax = 0;
    for (double s : out.stepsizes) amax = std::max(amax, s);
    double bound =
        ((L + 1.0) * (4 + 1) + cfg.gamma) / cfg.theta * amax;
    for (size_t i = 0; i < w.size(); ++i) {
      if (out.accepted[i] == 0.0) {
        double grad_i = 2.0 * coef[i] * out.point[i];
        CHECK(std::abs(grad_i) <= bound + 1e-12);
      }
    }
  }
}

TEST_CASE("bounds variant truncates to the maximal feasible step") {
  SearchConfig cfg;
  cfg.lower = Vec{0.0};
  cfg.upper = Vec{2.0};
  // minimizer outside the box: g decreasing toward +inf direction
  Oracle g = [](const Vec& w) { return (w[0] - 5.0) * (w[0] - 5.0); };
  SearchOutcome out = df_search(g, {1.5}, {1.0}, cfg);
  // +d truncated to 0.5, passes, expansion already at the boundary
  CHECK(out.point == Vec{2.0});
  CHECK(out.accepted == Vec{0.5});
  CHECK(out.stepsizes == Vec{0.5});

  // at the bound: direction toward the outside is an automatic failure
  long calls = 0;
  Oracle gc = counted(g, calls);
  SearchOutcome out2 = df_search(gc, {2.0}, {1.0}, cfg);
  CHECK(out2.point == Vec{2.0});
  CHECK(out2.accepted == Vec{0.0});
  CHECK(out2.stepsizes == Vec{0.5});
  CHECK(calls == 2);  // base + the -d poll only

  // every visited point feasible
  Oracle probe = [&](const Vec& w) {
    CHECK(w[0] >= 0.0);
    CHECK(w[0] <= 2.0);
    return (w[0] - 5.0) * (w[0] - 5.0);
  };
  df_search(probe, {1.9}, {1.0}, cfg);
}

TEST_CASE("expansion cap limits the number of extrapolation trials") {
  // unbounded descent direction: without a cap the loop would not stop
  Oracle g = [](const Vec& w) { return -w[0]; };
  SearchConfig cfg;
  cfg.max_expansions = 7;
  SearchOutcome out = df_search(g, {0.0}, {1.0}, cfg);
  CHECK(out.expansions == 7);
  CHECK(out.accepted[0] == 128.0);  // 1 * 2^7
}

TEST_CASE("acceptance observer sees each accepted coordinate") {
  Oracle g = [](const Vec& w) { return w[0] * w[0] + w[1] * w[1]; };
  std::vector<int> coords;
  std::vector<double> steps;
  AcceptObserver obs = [&](int i, double step, double gval) {
    coords.push_back(i);
    steps.push_back(step);
    CHECK(std::isfinite(gval));
  };
  df_search(g, {1.0, 1.0}, {1.0, 1.0}, SearchConfig{}, std::nullopt, obs);
  CHECK(coords == std::vector<int>{0, 1});
  CHECK(steps == std::vector<double>{-1.0, -1.0});
}
