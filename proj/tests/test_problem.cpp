#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pddf/problem.hpp"

using namespace pddf;

namespace {

SubFunction sum_of_squares(std::vector<int> idx) {
  SubFunction s;
  s.block.indices = std::move(idx);
  s.oracle = [](const Vec& y) {
    double v = 0;
    for (double u : y) v += u * u;
    return v;
  };
  s.test_gradient = [](const Vec& y) {
    Vec g(y.size());
    for (size_t i = 0; i < y.size(); ++i) g[i] = 2 * y[i];
    return g;
  };
  return s;
}

SubFunction rosenbrock2(std::vector<int> idx) {
  SubFunction s;
  s.block.indices = std::move(idx);
  s.oracle = [](const Vec& y) {
    double a = y[1] - y[0] * y[0];
    double b = 1 - y[0];
    return 100 * a * a + b * b;
  };
  return s;
}

SeparableProblem chained_rosenbrock3() {
  return SeparableProblem(3, {rosenbrock2({0, 1}), rosenbrock2({1, 2})},
                          FeasibleRegion::unbounded(), {0, 0, 0});
}

}  // namespace

TEST_CASE("evaluate_sub computes the oracle and counts one call") {
  SeparableProblem p(2, {sum_of_squares({0, 1}), sum_of_squares({0, 1})},
                     FeasibleRegion::unbounded(), {0, 0});
  EvalCounter c(2);
  CHECK(p.evaluate_sub(1, {1, 1}, c) == 2.0);
  CHECK(c.total == 1);
  CHECK(c.per_sub[1] == 1);
  CHECK(c.per_sub[0] == 0);

  SeparableProblem r(2, {rosenbrock2({0, 1})}, FeasibleRegion::unbounded(),
                     {0, 0});
  EvalCounter cr(1);
  CHECK(r.evaluate_sub(0, {1, 1}, cr) == 0.0);
  CHECK(r.evaluate_sub(0, {0, 0}, cr) == 1.0);
  CHECK_THROWS_AS(r.evaluate_sub(3, {0, 0}, cr), UsageError);
}

TEST_CASE("evaluate_full sums blocks and counts m") {
  SeparableProblem p = chained_rosenbrock3();
  EvalCounter c(2);
  CHECK(p.evaluate_full({1, 1, 1}, c) == 0.0);
  CHECK(c.total == 2);
  CHECK(p.evaluate_full({0, 0, 0}, c) == 2.0);
  CHECK(c.total == 4);

  double v = p.evaluate_full(p.start(), c);
  CHECK(std::isfinite(v));
  CHECK(c.total == 6);
}

TEST_CASE("projection clips boxes and is identity when unbounded") {
  FeasibleRegion box = FeasibleRegion::box({0, 0}, {2, 2});
  CHECK(box.project({3, -1}) == Vec{2, 0});
  CHECK(box.project({1, 1}) == Vec{1, 1});
  CHECK(box.project(box.project({3, -1})) == box.project({3, -1}));

  FeasibleRegion free = FeasibleRegion::unbounded();
  CHECK(free.project({5, 5}) == Vec{5, 5});

  CHECK_THROWS_AS(FeasibleRegion::box({1, 1}, {0, 2}), UsageError);
}

TEST_CASE("projection properties on random vectors") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-10, 10);
  FeasibleRegion box = FeasibleRegion::box({-1, 0, 2}, {1, 0.5, 9});
  for (int t = 0; t < 1000; ++t) {
    Vec v{u(rng), u(rng), u(rng)};
    Vec pv = box.project(v);
    CHECK(box.contains(pv));
    CHECK(box.project(pv) == pv);
  }
  // nonexpansiveness spot-check
  for (int t = 0; t < 200; ++t) {
    Vec a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
    Vec pa = box.project(a), pb = box.project(b);
    CHECK(norm2({pa[0] - pb[0], pa[1] - pb[1], pa[2] - pb[2]}) <=
          norm2({a[0] - b[0], a[1] - b[1], a[2] - b[2]}) + 1e-15);
  }
}

TEST_CASE("coverage counts and affected blocks") {
  SeparableProblem p(3, {sum_of_squares({0, 1}), sum_of_squares({1, 2})},
                     FeasibleRegion::unbounded(), {0, 0, 0});
  CHECK(p.coverage_counts() == std::vector<int>{1, 2, 1});
  CHECK(p.affected_blocks(1) == std::vector<int>{0, 1});
  CHECK(p.affected_blocks(0) == std::vector<int>{0});

  SeparableProblem dup(2, {sum_of_squares({0, 1}), sum_of_squares({0, 1})},
                       FeasibleRegion::unbounded(), {0, 0});
  CHECK(dup.coverage_counts() == std::vector<int>{2, 2});

  SeparableProblem one(3, {sum_of_squares({0, 1, 2})},
                       FeasibleRegion::unbounded(), {0, 0, 0});
  CHECK(one.coverage_counts() == std::vector<int>{1, 1, 1});

  SeparableProblem disjoint(4, {sum_of_squares({0, 1}), sum_of_squares({2, 3})},
                            FeasibleRegion::unbounded(), {0, 0, 0, 0});
  for (int i = 0; i < 4; ++i)
    CHECK(disjoint.affected_blocks(i).size() == 1);

  // coverage consistency: sum of counts == sum of block sizes
  long lhs = 0;
  for (int v : p.coverage_counts()) lhs += v;
  long rhs = 0;
  for (int j = 0; j < p.num_subs(); ++j) rhs += p.sub(j).block.size();
  CHECK(lhs == rhs);
}

TEST_CASE("construction validates coverage, start point, and index sets") {
  CHECK_THROWS_AS(SeparableProblem(3, {sum_of_squares({0, 1})},
                                   FeasibleRegion::unbounded(), {0, 0, 0}),
                  UsageError);  // variable 2 uncovered
  CHECK_THROWS_AS(SeparableProblem(2, {sum_of_squares({1, 0})},
                                   FeasibleRegion::unbounded(), {0, 0}),
                  UsageError);  // unsorted block
  CHECK_THROWS_AS(SeparableProblem(2, {sum_of_squares({0, 1})},
                                   FeasibleRegion::box({0, 0}, {1, 1}),
                                   {2, 0}),
                  UsageError);  // infeasible start
}

TEST_CASE("accounting matches a spy oracle exactly") {
  int calls = 0;
  SubFunction spy;
  spy.block.indices = {0};
  spy.oracle = [&calls](const Vec& y) {
    ++calls;
    return y[0];
  };
  SubFunction spy2 = spy;
  spy2.block.indices = {1};
  SeparableProblem p(2, {spy, spy2}, FeasibleRegion::unbounded(), {0, 0});
  EvalCounter c(2);
  std::mt19937 rng(3);
  for (int t = 0; t < 57; ++t) {
    if (t % 3 == 0)
      p.evaluate_full({1.0 * t, 2.0}, c);
    else
      p.evaluate_sub(t % 2, {0.5 * t}, c);
  }
  CHECK(c.total == calls);
  std::int64_t sum = 0;
  for (auto v : c.per_sub) sum += v;
  CHECK(c.total == sum);
}

TEST_CASE("counter merge sums componentwise") {
  EvalCounter a(2), b(2);
  a.count(0);
  a.count(1);
  b.count(1);
  a.merge(b);
  CHECK(a.total == 3);
  CHECK(a.per_sub[0] == 1);
  CHECK(a.per_sub[1] == 2);
}

TEST_CASE("non-finite oracle output propagates as a value") {
  SubFunction s;
  s.block.indices = {0};
  s.oracle = [](const Vec& y) {
    return y[0] > 0 ? std::numeric_limits<double>::quiet_NaN() : y[0];
  };
  SeparableProblem p(1, {s}, FeasibleRegion::unbounded(), {0});
  EvalCounter c(1);
  CHECK(std::isnan(p.evaluate_sub(0, {1}, c)));
  CHECK(c.total == 1);  // the call is still counted
}

TEST_CASE("custom region uses the supplied projection") {
  // ball of radius 2
  auto proj = [](const Vec& v) {
    double n = norm2(v);
    if (n <= 2.0) return v;
    Vec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] * (2.0 / n);
    return out;
  };
  FeasibleRegion ball = FeasibleRegion::custom(proj);
  Vec p = ball.project({3, 4});
  CHECK(norm2(p) == doctest::Approx(2.0));
  CHECK(ball.contains({1, 0}));

  // nonexpansiveness spot-check on sampled pairs
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(-6, 6);
  for (int t = 0; t < 200; ++t) {
    Vec a{u(rng), u(rng)}, b{u(rng), u(rng)};
    Vec pa = ball.project(a), pb = ball.project(b);
    CHECK(norm2({pa[0] - pb[0], pa[1] - pb[1]}) <=
          norm2({a[0] - b[0], a[1] - b[1]}) + 1e-12);
  }
}
