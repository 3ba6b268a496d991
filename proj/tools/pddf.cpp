#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pddf/bench.hpp"
#include "pddf/io.hpp"

namespace fs = std::filesystem;
using namespace pddf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitEvalFailure = 3;

struct CliOptions {
  std::string config_path;
  std::string problem_path;
  std::string suite_path;
  std::string records_dir;
  std::string solver = "pddf";
  std::vector<std::string> solvers;
  std::string out_dir = ".";
  int workers = 0;  // 0: unset, fall back to PDDF_WORKERS then 1
  double eval_delay_ms = 0.0;
  double eps = 1e-2;
  std::string metric = "evals";
  long long seed = 0;  // reserved
  bool show_config = false;
  std::vector<std::string> overrides;
};

RunConfig assemble_config(const CliOptions& opt) {
  RunConfig cfg;
  if (!opt.config_path.empty()) cfg = load_config(opt.config_path, cfg);
  for (const std::string& kv : opt.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("override must look like key=value: " + kv);
    cfg.apply(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (opt.workers > 0) {
    cfg.workers = opt.workers;
  } else if (const char* env = std::getenv("PDDF_WORKERS")) {
    cfg.workers = std::max(1, std::atoi(env));
  }
  return cfg;
}

std::vector<std::string> solver_list(const CliOptions& opt) {
  if (!opt.solvers.empty()) return opt.solvers;
  return {opt.solver};
}

int cmd_solve(const CliOptions& opt) {
  if (opt.problem_path.empty()) throw UsageError("solve requires --problem");
  RunConfig cfg = assemble_config(opt);
  BenchProblem bp = build_problem(load_problem_file(opt.problem_path));

  SolverSetup setup = cfg.setup();
  const SeparableProblem* prob = &bp.problem;
  std::optional<SeparableProblem> delayed;
  if (opt.eval_delay_ms > 0) {
    delayed = with_eval_delay(bp.problem, opt.eval_delay_ms * 1e-3);
    prob = &*delayed;
  }

  EvalCounter c(prob->num_subs());
  SolveReport rep = run_solver(*prob, opt.solver, setup, c);

  fs::create_directories(opt.out_dir);
  write_trace_csv(rep, (fs::path(opt.out_dir) / "trace.csv").string());
  {
    std::ofstream xout(fs::path(opt.out_dir) / "solution.csv");
    xout << "i,x\n";
    for (size_t i = 0; i < rep.final_x.size(); ++i)
      xout << i << ',' << format_double(rep.final_x[i]) << "\n";
  }

  double gap = 0.0;
  double residual = rep.trace.empty() ? 0.0 : rep.trace.back().residual;
  if (!rep.snapshots.empty()) {
    const PenaltyState& st = rep.snapshots.back().state;
    for (int j = 0; j < prob->num_subs(); ++j)
      gap = std::max(gap, inf_norm_diff(prob->gather(st.x, j),
                                        st.ys[static_cast<size_t>(j)]));
  }

  std::cout << "problem: " << bp.id << "  n=" << prob->dim()
            << "  m=" << prob->num_subs() << "\n";
  std::cout << "solver: " << opt.solver << "\n";
  std::cout << "final_f: " << format_double(rep.final_f) << "\n";
  std::cout << "residual: " << format_double(residual) << "\n";
  std::cout << "feas_gap: " << format_double(gap) << "\n";
  std::cout << "sub_evals: " << c.total << "\n";
  std::cout << "outer_iters: " << rep.outer_iters << "\n";
  std::cout << "termination: " << to_string(rep.termination) << "\n";
  std::cout << "wall_time_sec: " << format_double(rep.wall_time_sec) << "\n";
  std::cout << "trace: " << (fs::path(opt.out_dir) / "trace.csv").string()
            << "\n";
  return kExitOk;
}

int cmd_bench(const CliOptions& opt) {
  if (opt.suite_path.empty()) throw UsageError("bench requires --suite");
  RunConfig cfg = assemble_config(opt);
  SuiteSpec spec = load_suite(opt.suite_path);
  std::vector<BenchProblem> problems = build_suite(spec);
  auto records =
      run_suite(problems, solver_list(opt), cfg.setup(), opt.eval_delay_ms * 1e-3);
  write_records_csv(records, opt.out_dir);
  std::cout << "wrote " << records.size() << " records to "
            << (fs::path(opt.out_dir) / "records.csv").string() << "\n";
  return kExitOk;
}

int cmd_profile(const CliOptions& opt) {
  if (opt.records_dir.empty()) throw UsageError("profile requires --records");
  std::vector<RunRecord> records = read_records_csv(opt.records_dir);
  if (records.empty()) throw UsageError("no records found");
  fs::create_directories(opt.out_dir);

  Vec grid;
  for (int k = 0; k <= 100; ++k) grid.push_back(k);
  std::vector<std::string> excluded;
  std::string tag = format_double(opt.eps);

  auto dp = data_profile(records, opt.eps, grid, &excluded);
  write_profile_csv(dp, (fs::path(opt.out_dir) / ("data_profile_eps" + tag + ".csv")).string(),
                    "kappa");
  write_profile_svg(dp, (fs::path(opt.out_dir) / ("data_profile_eps" + tag + ".svg")).string(),
                    "Data profile (eps = " + tag + ")",
                    "budget [groups of m(n+1) sub-evaluations]");

  ProfileMetric metric = ProfileMetric::sub_evals_to_solved;
  std::string mname = "evals";
  if (opt.metric == "time") {
    metric = ProfileMetric::wall_time;
    mname = "time";
  } else if (opt.metric != "evals") {
    throw UsageError("metric must be evals or time");
  }
  auto pp = performance_profile(records, metric, opt.eps);
  write_profile_csv(pp,
                    (fs::path(opt.out_dir) / ("perf_profile_" + mname + "_eps" + tag + ".csv")).string(),
                    "ratio");
  write_profile_svg(pp,
                    (fs::path(opt.out_dir) / ("perf_profile_" + mname + "_eps" + tag + ".svg")).string(),
                    "Performance profile (" + mname + ", eps = " + tag + ")",
                    "performance ratio");

  for (const std::string& id : excluded)
    std::cerr << "note: excluded " << id << " (no solver improved on f0)\n";
  std::cout << "wrote profiles for " << dp.size() << " solvers to "
            << opt.out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CliOptions opt;
  CLI::App app{"Penalty-decomposition derivative-free optimization toolkit"};
  app.require_subcommand(0, 1);
  app.add_flag("--show-config", opt.show_config,
               "print the effective configuration and exit");
  app.add_option("--config", opt.config_path, "configuration file");
  app.add_option("--workers", opt.workers,
                 "block-search workers (falls back to PDDF_WORKERS)");
  app.add_option("--seed", opt.seed, "reserved");

  CLI::App* solve = app.add_subcommand("solve", "solve a single problem");
  solve->add_option("--problem", opt.problem_path, "problem file");
  solve->add_option("--solver", opt.solver, "pddf | pddf-parallel | ls | sals");
  solve->add_option("--out", opt.out_dir, "output directory");
  solve->add_option("--eval-delay-ms", opt.eval_delay_ms,
                    "artificial pause per sub-evaluation");
  solve->add_option("overrides", opt.overrides, "key=value overrides");

  CLI::App* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("--suite", opt.suite_path, "suite file");
  bench->add_option("--solvers", opt.solvers, "solvers to run")->delimiter(',');
  bench->add_option("--out", opt.out_dir, "output directory");
  bench->add_option("--eval-delay-ms", opt.eval_delay_ms,
                    "artificial pause per sub-evaluation");
  bench->add_option("overrides", opt.overrides, "key=value overrides");

  CLI::App* profile = app.add_subcommand("profile", "profiles from records");
  profile->add_option("--records", opt.records_dir,
                      "directory with records.csv and histories");
  profile->add_option("--eps", opt.eps, "solved-test accuracy");
  profile->add_option("--metric", opt.metric, "evals | time");
  profile->add_option("--out", opt.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (opt.show_config) {
      assemble_config(opt).print(std::cout);
      return kExitOk;
    }
    if (solve->parsed()) return cmd_solve(opt);
    if (bench->parsed()) return cmd_bench(opt);
    if (profile->parsed()) return cmd_profile(opt);
    std::cerr << app.help() << std::flush;
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const EvaluationError& e) {
    std::cerr << "evaluation failure: " << e.what() << "\n";
    return kExitEvalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
