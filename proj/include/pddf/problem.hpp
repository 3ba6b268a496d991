#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pddf {

using Vec = std::vector<double>;

/// Malformed arguments or input files. Maps to CLI exit code 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An oracle failed at a point where no recovery is possible (e.g. the start
/// point). Maps to CLI exit code 3.
struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Coordinate index set of one sub-function: strictly increasing, 0-based.
struct IndexSet {
  std::vector<int> indices;

  int size() const { return static_cast<int>(indices.size()); }
  void validate(int n) const;
};

/// Black-box oracle on the sub-function's own coordinates.
using Oracle = std::function<double(const Vec&)>;
/// Gradient on the same coordinates. Used by tests and benchmark checks only;
/// solvers never call it.
using GradientFn = std::function<Vec(const Vec&)>;

struct SubFunction {
  IndexSet block;
  Oracle oracle;
  GradientFn test_gradient;  // may be empty
};

/// Closed convex feasible set with a projection operator.
class FeasibleRegion {
 public:
  enum class Kind { unbounded, box, custom };

  static FeasibleRegion unbounded();
  static FeasibleRegion box(Vec lower, Vec upper);
  static FeasibleRegion custom(std::function<Vec(const Vec&)> projection);

  Kind kind() const { return kind_; }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }

  Vec project(const Vec& v) const;
  /// Exact membership test: project(v) == v componentwise.
  bool contains(const Vec& v) const;

 private:
  Kind kind_ = Kind::unbounded;
  Vec lower_, upper_;
  std::function<Vec(const Vec&)> projection_;
};

/// Per-sub-function evaluation counts. total always equals the sum of
/// per_sub; merging adds componentwise.
struct EvalCounter {
  std::vector<std::int64_t> per_sub;
  std::int64_t total = 0;

  EvalCounter() = default;
  explicit EvalCounter(int m) : per_sub(static_cast<size_t>(m), 0) {}

  void count(int j) {
    per_sub[static_cast<size_t>(j)] += 1;
    total += 1;
  }
  void merge(const EvalCounter& other);
};

/// Sum of m black-box sub-functions, each on its own index set, over a
/// projectable convex region. Immutable after construction and safe to share
/// across threads; callers own the counters.
class SeparableProblem {
 public:
  SeparableProblem(int n, std::vector<SubFunction> subs, FeasibleRegion region,
                   Vec x0);

  int dim() const { return n_; }
  int num_subs() const { return static_cast<int>(subs_.size()); }
  const SubFunction& sub(int j) const { return subs_.at(static_cast<size_t>(j)); }
  const std::vector<SubFunction>& subs() const { return subs_; }
  const FeasibleRegion& region() const { return region_; }
  const Vec& start() const { return x0_; }

  /// c_i = number of blocks containing coordinate i (>= 1 by construction).
  const std::vector<int>& coverage_counts() const { return coverage_; }
  /// Blocks whose index set contains coordinate i, ascending.
  const std::vector<int>& affected_blocks(int i) const;

  /// Subvector of x on block j's index set.
  Vec gather(const Vec& x, int j) const;

  /// f_j(y). Counts exactly one evaluation; a non-finite oracle output is
  /// returned as-is for the caller to treat as a failed trial.
  double evaluate_sub(int j, const Vec& y, EvalCounter& c) const;
  /// Sum of f_j(x_{S_j}) over j in ascending order. Counts m evaluations.
  double evaluate_full(const Vec& x, EvalCounter& c) const;

 private:
  int n_;
  std::vector<SubFunction> subs_;
  FeasibleRegion region_;
  Vec x0_;
  std::vector<int> coverage_;
  std::vector<std::vector<int>> affected_;
};

bool all_finite(const Vec& v);
double dist_sq(const Vec& a, const Vec& b);
double norm2(const Vec& v);
double inf_norm_diff(const Vec& a, const Vec& b);

}  // namespace pddf
