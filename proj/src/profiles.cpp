#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "pddf/bench.hpp"

namespace pddf {

bool solved(double f0, double fS, double fbest, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw UsageError("eps must lie in (0,1)");
  return f0 - fS >= (1.0 - eps) * (f0 - fbest);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ProblemGroup {
  std::string id;
  int n = 0;
  int m = 0;
  double f0 = 0;
  double fbest = kInf;
  std::vector<const RunRecord*> runs;  // aligned with the solver list
};

struct Grouped {
  std::vector<std::string> solvers;
  std::vector<ProblemGroup> problems;  // only the included ones
  std::vector<std::string> excluded;
};

double best_of_history(const RunRecord& r) {
  double best = kInf;
  for (const auto& [e, f] : r.history)
    if (std::isfinite(f)) best = std::min(best, f);
  return best;
}

Grouped group_records(const std::vector<RunRecord>& records) {
  Grouped g;
  std::vector<std::string> problem_order;
  for (const RunRecord& r : records) {
    if (std::find(g.solvers.begin(), g.solvers.end(), r.solver_id) ==
        g.solvers.end())
      g.solvers.push_back(r.solver_id);
    if (std::find(problem_order.begin(), problem_order.end(), r.problem_id) ==
        problem_order.end())
      problem_order.push_back(r.problem_id);
  }
  for (const std::string& pid : problem_order) {
    ProblemGroup pg;
    pg.id = pid;
    pg.runs.assign(g.solvers.size(), nullptr);
    for (const RunRecord& r : records) {
      if (r.problem_id != pid) continue;
      size_t si = static_cast<size_t>(
          std::find(g.solvers.begin(), g.solvers.end(), r.solver_id) -
          g.solvers.begin());
      if (pg.runs[si])
        throw UsageError("duplicate run for " + pid + " / " + r.solver_id);
      pg.runs[si] = &r;
      pg.n = r.n;
      pg.m = r.m;
      pg.f0 = r.f0;
    }
    for (size_t si = 0; si < pg.runs.size(); ++si)
      if (!pg.runs[si])
        throw UsageError("missing run for " + pid + " / " + g.solvers[si]);
    for (const RunRecord* r : pg.runs)
      pg.fbest = std::min(pg.fbest, best_of_history(*r));

    if (!std::isfinite(pg.f0) || !(pg.fbest < pg.f0)) {
      g.excluded.push_back(pid);  // nobody improved on f(x0)
      continue;
    }
    g.problems.push_back(std::move(pg));
  }
  return g;
}

// Smallest cumulative evaluation count at which the run satisfies the solved
// test, +inf if never.
double evals_to_solved(const RunRecord& r, double f0, double fbest, double eps) {
  for (const auto& [e, f] : r.history)
    if (std::isfinite(f) && solved(f0, f, fbest, eps))
      return static_cast<double>(e);
  return kInf;
}

}  // namespace

std::vector<ProfileCurve> data_profile(const std::vector<RunRecord>& records,
                                       double eps, const Vec& kappa_grid,
                                       std::vector<std::string>* excluded) {
  Grouped g = group_records(records);
  if (excluded) *excluded = g.excluded;

  std::vector<ProfileCurve> curves;
  for (size_t si = 0; si < g.solvers.size(); ++si) {
    ProfileCurve c;
    c.solver = g.solvers[si];
    c.grid = kappa_grid;
    c.fraction.assign(kappa_grid.size(), 0.0);
    if (g.problems.empty()) {
      curves.push_back(std::move(c));
      continue;
    }
    for (const ProblemGroup& pg : g.problems) {
      double at = evals_to_solved(*pg.runs[si], pg.f0, pg.fbest, eps);
      double unit = static_cast<double>(pg.m) * (pg.n + 1.0);
      for (size_t k = 0; k < kappa_grid.size(); ++k)
        if (at <= kappa_grid[k] * unit) c.fraction[k] += 1.0;
    }
    for (double& f : c.fraction) f /= static_cast<double>(g.problems.size());
    curves.push_back(std::move(c));
  }
  return curves;
}

std::vector<ProfileCurve> performance_profile(
    const std::vector<RunRecord>& records, ProfileMetric metric, double eps,
    std::vector<std::string>* excluded) {
  Grouped g = group_records(records);
  if (excluded) *excluded = g.excluded;

  const size_t ns = g.solvers.size();
  const size_t np = g.problems.size();
  std::vector<std::vector<double>> ratio(ns, std::vector<double>(np, kInf));
  std::set<double> grid_points{1.0};

  for (size_t pi = 0; pi < np; ++pi) {
    const ProblemGroup& pg = g.problems[pi];
    std::vector<double> cost(ns, kInf);
    for (size_t si = 0; si < ns; ++si) {
      double at = evals_to_solved(*pg.runs[si], pg.f0, pg.fbest, eps);
      if (metric == ProfileMetric::sub_evals_to_solved) {
        cost[si] = at;
      } else {
        cost[si] = std::isfinite(at) ? pg.runs[si]->wall_time_sec : kInf;
      }
    }
    double best = *std::min_element(cost.begin(), cost.end());
    if (!std::isfinite(best) || !(best > 0.0)) continue;  // nobody solved it
    for (size_t si = 0; si < ns; ++si) {
      ratio[si][pi] = cost[si] / best;
      if (std::isfinite(ratio[si][pi])) grid_points.insert(ratio[si][pi]);
    }
  }

  Vec grid(grid_points.begin(), grid_points.end());
  std::vector<ProfileCurve> curves;
  for (size_t si = 0; si < ns; ++si) {
    ProfileCurve c;
    c.solver = g.solvers[si];
    c.grid = grid;
    c.fraction.assign(grid.size(), 0.0);
    if (np > 0) {
      for (size_t k = 0; k < grid.size(); ++k) {
        int count = 0;
        for (size_t pi = 0; pi < np; ++pi)
          if (ratio[si][pi] <= grid[k]) ++count;
        c.fraction[k] = static_cast<double>(count) / static_cast<double>(np);
      }
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

}  // namespace pddf
