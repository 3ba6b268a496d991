#include "pddf/pd_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

namespace pddf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

double block_penalty_term(const SeparableProblem& p, const Vec& x,
                          const Vec& y, int j, double tau) {
  const IndexSet& b = p.sub(j).block;
  double d2 = 0.0;
  for (size_t q = 0; q < y.size(); ++q) {
    double d = x[static_cast<size_t>(b.indices[q])] - y[q];
    d2 += d * d;
  }
  return 0.5 * tau * d2;
}

}  // namespace

void PenaltyParams::validate() const {
  if (!(tau0 > 0.0)) throw UsageError("tau0 must be positive");
  if (!(tau_growth > 1.0)) throw UsageError("tau_growth must exceed 1");
  if (!(tau_cap >= tau0)) throw UsageError("tau_cap must be >= tau0");
  if (!(xi > 0.0)) throw UsageError("xi must be positive");
  if (max_outer < 1) throw UsageError("max_outer must be >= 1");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::outer_step_tol: return "outer_step_tol";
    case Termination::max_outer: return "max_outer";
    case Termination::wall_clock: return "wall_clock";
    case Termination::refined: return "refined";
  }
  return "unknown";
}

PenaltyState make_initial_state(const SeparableProblem& p, const Vec& x,
                                double tau, const Vec* f_blocks) {
  PenaltyState s;
  s.x = x;
  s.tau = tau;
  const int m = p.num_subs();
  s.ys.reserve(static_cast<size_t>(m));
  s.stepsizes.reserve(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    s.ys.push_back(p.gather(x, j));
    s.stepsizes.emplace_back(s.ys.back().size(), 1.0);
  }
  if (f_blocks) {
    if (static_cast<int>(f_blocks->size()) != m)
      throw UsageError("f_blocks length does not match sub-function count");
    s.f_at_ys = *f_blocks;
  } else {
    s.f_at_ys.assign(static_cast<size_t>(m), kNaN);
  }
  return s;
}

double penalty_value(const PenaltyState& s, const SeparableProblem& p,
                     EvalCounter& c) {
  double total = 0.0;
  for (int j = 0; j < p.num_subs(); ++j) {
    double fj = p.evaluate_sub(j, s.ys[static_cast<size_t>(j)], c);
    total += fj + block_penalty_term(p, s.x, s.ys[static_cast<size_t>(j)], j, s.tau);
  }
  return total;
}

double penalty_value_cached(const PenaltyState& s, const SeparableProblem& p) {
  double total = 0.0;
  for (int j = 0; j < p.num_subs(); ++j) {
    total += s.f_at_ys[static_cast<size_t>(j)] +
             block_penalty_term(p, s.x, s.ys[static_cast<size_t>(j)], j, s.tau);
  }
  return total;
}

Vec penalty_grad_x(const PenaltyState& s, const SeparableProblem& p) {
  Vec g(static_cast<size_t>(p.dim()), 0.0);
  for (int j = 0; j < p.num_subs(); ++j) {
    const IndexSet& b = p.sub(j).block;
    const Vec& y = s.ys[static_cast<size_t>(j)];
    for (size_t q = 0; q < y.size(); ++q) {
      size_t i = static_cast<size_t>(b.indices[q]);
      g[i] += s.x[i] - y[q];
    }
  }
  for (double& v : g) v *= s.tau;
  return g;
}

Vec x_update(const SeparableProblem& p, const std::vector<Vec>& ys,
             double /*tau*/, bool* inexact) {
  const int n = p.dim();
  Vec acc(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < p.num_subs(); ++j) {
    const IndexSet& b = p.sub(j).block;
    const Vec& y = ys[static_cast<size_t>(j)];
    for (size_t q = 0; q < y.size(); ++q)
      acc[static_cast<size_t>(b.indices[q])] += y[q];
  }
  const std::vector<int>& cov = p.coverage_counts();
  for (int i = 0; i < n; ++i)
    acc[static_cast<size_t>(i)] /= static_cast<double>(cov[static_cast<size_t>(i)]);

  if (p.region().kind() == FeasibleRegion::Kind::custom) {
    bool uniform = true;
    for (int i = 1; i < n; ++i)
      if (cov[static_cast<size_t>(i)] != cov[0]) uniform = false;
    if (!uniform && inexact) *inexact = true;
    return p.region().project(acc);
  }
  return p.region().project(acc);  // clip for boxes, identity otherwise
}

double stationarity_residual(const Vec& x, const Vec& g,
                             const FeasibleRegion& region) {
  Vec step(x.size());
  for (size_t i = 0; i < x.size(); ++i) step[i] = x[i] - g[i];
  Vec proj = region.project(step);
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - proj[i];
    s += d * d;
  }
  return std::sqrt(s);
}

InnerStopCheck check_inner_stop(const PenaltyState& s,
                                const SeparableProblem& p, double xi_k) {
  InnerStopCheck r;
  r.xi = xi_k;
  for (const Vec& a : s.stepsizes)
    for (double v : a) r.max_alpha = std::max(r.max_alpha, v);
  r.alpha_threshold = xi_k / std::max(s.tau, 1.0);
  r.residual = stationarity_residual(s.x, penalty_grad_x(s, p), p.region());
  r.stepsize_ok = r.max_alpha <= r.alpha_threshold;
  r.residual_ok = r.residual <= xi_k;
  return r;
}

bool inner_stop(const PenaltyState& s, const SeparableProblem& p, double xi_k) {
  return check_inner_stop(s, p, xi_k).ok();
}

namespace {

struct BlockSearchSlot {
  double g_final = 0;
  long evals = 0;
  int expansions = 0;
};

// Fixed set of workers reused across inner iterations; run_batch calls
// fn(worker) once per worker and returns when all are done.
class WorkerPool {
 public:
  explicit WorkerPool(int n) {
    threads_.reserve(static_cast<size_t>(n));
    for (int w = 0; w < n; ++w) {
      threads_.emplace_back([this, w] {
        long seen = 0;
        std::unique_lock<std::mutex> lk(mu_);
        for (;;) {
          cv_work_.wait(lk, [&] { return stop_ || generation_ != seen; });
          if (stop_) return;
          seen = generation_;
          const auto* fn = fn_;
          lk.unlock();
          (*fn)(w);
          lk.lock();
          if (++done_ == static_cast<int>(threads_.size()))
            cv_main_.notify_one();
        }
      });
    }
  }

  ~WorkerPool() {
    {
      std::lock_guard<std::mutex> lk(mu_);
      stop_ = true;
    }
    cv_work_.notify_all();
    for (auto& t : threads_) t.join();
  }

  void run_batch(const std::function<void(int)>& fn) {
    std::unique_lock<std::mutex> lk(mu_);
    fn_ = &fn;
    done_ = 0;
    ++generation_;
    cv_work_.notify_all();
    cv_main_.wait(lk, [&] { return done_ == static_cast<int>(threads_.size()); });
  }

 private:
  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable cv_main_, cv_work_;
  const std::function<void(int)>* fn_ = nullptr;
  long generation_ = 0;
  int done_ = 0;
  bool stop_ = false;
};

// Runs the block searches of one inner iteration for blocks j with
// j % stride == offset, counting evaluations into `local`.
void run_block_range(const SeparableProblem& p, PenaltyState& s, double tau,
                     const SearchConfig& cfg, int offset, int stride,
                     EvalCounter& local, std::vector<BlockSearchSlot>& slots) {
  const int m = p.num_subs();
  for (int j = offset; j < m; j += stride) {
    const size_t uj = static_cast<size_t>(j);
    Vec xs = p.gather(s.x, j);
    auto g = [&](const Vec& w) {
      double fw = p.evaluate_sub(j, w, local);
      double d2 = dist_sq(xs, w);
      return fw + 0.5 * tau * d2;
    };
    double g_start = s.f_at_ys[uj] + 0.5 * tau * dist_sq(xs, s.ys[uj]);
    SearchOutcome out = df_search(g, s.ys[uj], s.stepsizes[uj], cfg, g_start);

    bool any_accept = false;
    for (double a : out.accepted)
      if (a != 0.0) any_accept = true;
    if (any_accept) {
      s.ys[uj] = out.point;
      // Recover f_j at the new duplicate from the cached oracle value; the
      // unchanged case keeps the exact cached f.
      s.f_at_ys[uj] = out.g_final - 0.5 * tau * dist_sq(xs, s.ys[uj]);
    }
    s.stepsizes[uj] = out.stepsizes;
    slots[uj].g_final = out.g_final;
    slots[uj].evals = out.evals;
    slots[uj].expansions = out.expansions;
  }
}

}  // namespace

DfamResult dfam(const SeparableProblem& p, PenaltyState start, double tau_k,
                double xi_k, const SearchConfig& cfg, int workers,
                EvalCounter& c, std::vector<InnerIterLog>* log, int outer_k,
                double wall_deadline_sec, long long inner_cap) {
  if (!(tau_k > 0.0)) throw UsageError("tau must be positive");
  if (!(xi_k > 0.0)) throw UsageError("xi must be positive");
  if (!p.region().contains(start.x))
    throw UsageError("dfam requires a feasible x");
  if (workers < 1) workers = 1;
  const int m = p.num_subs();
  if (inner_cap < 0)
    inner_cap = std::max<long long>(10LL * p.dim() * m, 100);

  DfamResult res;
  res.state = std::move(start);
  PenaltyState& s = res.state;
  s.tau = tau_k;
  for (size_t j = 0; j < s.stepsizes.size(); ++j)
    s.stepsizes[j].assign(s.ys[j].size(), 1.0);

  // Fill any unknown oracle caches (counted).
  for (int j = 0; j < m; ++j) {
    if (std::isnan(s.f_at_ys[static_cast<size_t>(j)]))
      s.f_at_ys[static_cast<size_t>(j)] =
          p.evaluate_sub(j, s.ys[static_cast<size_t>(j)], c);
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<BlockSearchSlot> slots(static_cast<size_t>(m));
  const int used_workers = std::min(workers, m);

  std::unique_ptr<WorkerPool> pool;
  std::vector<EvalCounter> locals;
  if (used_workers > 1) {
    pool = std::make_unique<WorkerPool>(used_workers);
    locals.assign(static_cast<size_t>(used_workers), EvalCounter(m));
  }

  for (long long l = 0;; ++l) {
    if (l >= inner_cap) {
      res.cap_hit = true;
      break;
    }
    if (wall_deadline_sec >= 0.0 && seconds_since(t0) > wall_deadline_sec) {
      res.wall_hit = true;
      break;
    }

    const double p_before = penalty_value_cached(s, p);

    if (used_workers <= 1) {
      run_block_range(p, s, tau_k, cfg, 0, 1, c, slots);
    } else {
      auto batch = [&](int wkr) {
        run_block_range(p, s, tau_k, cfg, wkr, used_workers,
                        locals[static_cast<size_t>(wkr)], slots);
      };
      pool->run_batch(batch);
    }

    double p_after_blocks = 0.0;
    long iter_evals = 0;
    int iter_expansions = 0;
    for (int j = 0; j < m; ++j) {
      p_after_blocks += slots[static_cast<size_t>(j)].g_final;
      iter_evals += slots[static_cast<size_t>(j)].evals;
      iter_expansions += slots[static_cast<size_t>(j)].expansions;
    }

    InnerStopCheck stop = check_inner_stop(s, p, xi_k);

    if (log) {
      InnerIterLog row;
      row.outer_k = outer_k;
      row.inner_l = static_cast<int>(l);
      row.p_before = p_before;
      row.p_after_blocks = p_after_blocks;
      row.p_after_x = kNaN;
      row.max_alpha = stop.max_alpha;
      row.residual = stop.residual;
      row.search_evals = iter_evals;
      row.expansions = iter_expansions;
      log->push_back(row);
    }

    res.inner_iters = static_cast<int>(l) + 1;
    if (stop.ok()) break;

    bool inexact = false;
    s.x = x_update(p, s.ys, tau_k, &inexact);
    if (inexact) res.inexact_x_update = true;
    if (log) log->back().p_after_x = penalty_value_cached(s, p);
  }

  for (const EvalCounter& local : locals) c.merge(local);
  return res;
}

double tau_at(const PenaltyParams& params, int k) {
  double tau = params.tau0;
  for (int t = 0; t < k; ++t) tau = std::min(tau * params.tau_growth, params.tau_cap);
  return tau;
}

SolveReport sequential_penalty(const SeparableProblem& p,
                               const PenaltyParams& params,
                               const SearchConfig& cfg, int workers,
                               EvalCounter& c) {
  params.validate();
  if (!p.region().contains(p.start()))
    throw UsageError("start point is not feasible");

  const int m = p.num_subs();
  const auto t0 = std::chrono::steady_clock::now();

  SolveReport rep;
  rep.evals = EvalCounter(m);

  // Evaluate f at the start block by block so the duplicate caches can be
  // seeded from the same oracle calls.
  Vec f_blocks0(static_cast<size_t>(m));
  double f0 = 0.0;
  for (int j = 0; j < m; ++j) {
    f_blocks0[static_cast<size_t>(j)] =
        p.evaluate_sub(j, p.gather(p.start(), j), c);
    f0 += f_blocks0[static_cast<size_t>(j)];
  }
  if (!std::isfinite(f0))
    throw EvaluationError("objective is not finite at the start point");

  PenaltyState state = make_initial_state(p, p.start(), params.tau0, &f_blocks0);
  const PenaltyState initial = state;  // restart point

  double best_f = f0;
  rep.history.emplace_back(c.total, best_f);
  {
    TraceRow row;
    row.k = 0;
    row.tau = params.tau0;
    row.cum_evals = c.total;
    row.f = f0;
    row.residual = stationarity_residual(state.x, penalty_grad_x(state, p), p.region());
    row.feas_gap = 0.0;
    rep.trace.push_back(row);
  }

  Vec x_prev = state.x;
  double tau_k = params.tau0;
  double xi_k = params.xi;
  double f_k = f0;

  for (int k = 1; k <= params.max_outer; ++k) {
    tau_k = std::min(tau_k * params.tau_growth, params.tau_cap);
    if (params.xi_decreasing) xi_k = params.xi * std::pow(0.9, k);

    // Warm start: keep the previous solution only while its penalty value
    // does not exceed the initial objective.
    state.tau = tau_k;
    if (!(penalty_value_cached(state, p) <= f0)) {
      state = initial;
      state.tau = tau_k;
    }

    const double remaining =
        std::max(0.0, params.wall_clock_limit - seconds_since(t0));
    DfamResult inner = dfam(p, std::move(state), tau_k, xi_k, cfg, workers, c,
                            &rep.inner_log, k, remaining);
    state = std::move(inner.state);
    if (inner.cap_hit) rep.inner_cap_hit = true;
    if (inner.inexact_x_update) rep.inexact_x_update = true;

    f_k = 0.0;
    for (int j = 0; j < m; ++j)
      f_k += p.evaluate_sub(j, p.gather(state.x, j), c);
    best_f = std::min(best_f, f_k);
    rep.history.emplace_back(c.total, best_f);

    double gap = 0.0;
    for (int j = 0; j < m; ++j)
      gap = std::max(gap, inf_norm_diff(p.gather(state.x, j),
                                        state.ys[static_cast<size_t>(j)]));
    TraceRow row;
    row.k = k;
    row.tau = tau_k;
    row.inner_iters = inner.inner_iters;
    row.cum_evals = c.total;
    row.f = f_k;
    row.residual =
        stationarity_residual(state.x, penalty_grad_x(state, p), p.region());
    row.feas_gap = gap;
    rep.trace.push_back(row);

    rep.snapshots.push_back({k, xi_k, !inner.cap_hit && !inner.wall_hit, state});
    rep.outer_iters = k;

    double dx = 0.0;
    for (size_t i = 0; i < state.x.size(); ++i) {
      double d = state.x[i] - x_prev[i];
      dx += d * d;
    }
    dx = std::sqrt(dx);
    x_prev = state.x;

    // A non-positive tolerance disables the step test (run to max_outer).
    if (params.outer_step_tol > 0.0 && dx <= params.outer_step_tol) {
      rep.termination = Termination::outer_step_tol;
      break;
    }
    if (k == params.max_outer) {
      rep.termination = Termination::max_outer;
      break;
    }
    if (inner.wall_hit || seconds_since(t0) > params.wall_clock_limit) {
      rep.termination = Termination::wall_clock;
      break;
    }
  }

  rep.final_x = state.x;
  rep.final_f = f_k;
  rep.history_pd_len = rep.history.size();
  rep.evals = c;
  rep.wall_time_sec = seconds_since(t0);
  return rep;
}

}  // namespace pddf
