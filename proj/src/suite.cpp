#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "pddf/bench.hpp"

namespace pddf {

SeparableProblem with_eval_delay(const SeparableProblem& p, double delay_sec) {
  if (!(delay_sec > 0.0)) throw UsageError("delay must be positive");
  auto delay = std::chrono::duration<double>(delay_sec);
  std::vector<SubFunction> subs;
  subs.reserve(static_cast<size_t>(p.num_subs()));
  for (int j = 0; j < p.num_subs(); ++j) {
    SubFunction s = p.sub(j);
    Oracle inner = std::move(s.oracle);
    s.oracle = [inner, delay](const Vec& y) {
      std::this_thread::sleep_for(delay);
      return inner(y);
    };
    subs.push_back(std::move(s));
  }
  return SeparableProblem(p.dim(), std::move(subs), p.region(), p.start());
}

SolveReport run_solver(const SeparableProblem& p, const std::string& solver_id,
                       const SolverSetup& setup, EvalCounter& c) {
  if (solver_id == "pddf" || solver_id == "pddf-parallel") {
    int workers = solver_id == "pddf-parallel" ? setup.workers : 1;
    SolveReport rep = sequential_penalty(p, setup.pd, setup.search, workers, c);
    if (setup.refine_after_pd) {
      LsConfig rcfg = setup.refine;
      rcfg.wall_clock_limit =
          std::max(0.0, setup.pd.wall_clock_limit - rep.wall_time_sec);
      rep = refine(p, rep, rcfg, c);
    }
    return rep;
  }
  if (solver_id == "ls") return ls_solve(p, p.start(), setup.ls, c);
  if (solver_id == "sals") return sals_solve(p, p.start(), setup.ls, c);
  throw UsageError("unknown solver: " + solver_id);
}

std::vector<RunRecord> run_suite(const std::vector<BenchProblem>& problems,
                                 const std::vector<std::string>& solver_ids,
                                 const SolverSetup& setup, double eval_delay_sec,
                                 std::vector<SolveReport>* reports) {
  std::vector<RunRecord> records;
  for (const BenchProblem& bp : problems) {
    for (const std::string& solver : solver_ids) {
      RunRecord rec;
      rec.problem_id = bp.id;
      rec.solver_id = solver;
      rec.n = bp.problem.dim();
      rec.m = bp.problem.num_subs();

      EvalCounter c(bp.problem.num_subs());
      SolveReport rep;
      try {
        if (eval_delay_sec > 0.0) {
          SeparableProblem delayed = with_eval_delay(bp.problem, eval_delay_sec);
          rep = run_solver(delayed, solver, setup, c);
        } else {
          rep = run_solver(bp.problem, solver, setup, c);
        }
        rec.f0 = rep.history.empty() ? rep.final_f : rep.history.front().second;
        rec.history = rep.history;
        rec.final_f = rep.final_f;
        rec.total_evals = c.total;
        rec.wall_time_sec = rep.wall_time_sec;
        rec.termination = to_string(rep.termination);
      } catch (const std::exception&) {
        rec.f0 = std::numeric_limits<double>::quiet_NaN();
        rec.final_f = std::numeric_limits<double>::quiet_NaN();
        rec.total_evals = c.total;
        rec.termination = "error";
      }
      if (reports) reports->push_back(rep);
      records.push_back(std::move(rec));
    }
  }
  return records;
}

}  // namespace pddf
