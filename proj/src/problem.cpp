#include "pddf/problem.hpp"

#include <algorithm>
#include <cmath>

namespace pddf {

void IndexSet::validate(int n) const {
  if (indices.empty()) throw UsageError("index set must be nonempty");
  int prev = -1;
  for (int i : indices) {
    if (i < 0 || i >= n) throw UsageError("index out of range");
    if (i <= prev) throw UsageError("index set must be strictly increasing");
    prev = i;
  }
}

FeasibleRegion FeasibleRegion::unbounded() { return FeasibleRegion{}; }

FeasibleRegion FeasibleRegion::box(Vec lower, Vec upper) {
  if (lower.size() != upper.size())
    throw UsageError("box bounds must have equal length");
  for (size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i]))
      throw UsageError("box requires lower <= upper in every coordinate");
  }
  FeasibleRegion r;
  r.kind_ = Kind::box;
  r.lower_ = std::move(lower);
  r.upper_ = std::move(upper);
  return r;
}

FeasibleRegion FeasibleRegion::custom(std::function<Vec(const Vec&)> projection) {
  if (!projection) throw UsageError("custom region requires a projection");
  FeasibleRegion r;
  r.kind_ = Kind::custom;
  r.projection_ = std::move(projection);
  return r;
}

Vec FeasibleRegion::project(const Vec& v) const {
  switch (kind_) {
    case Kind::unbounded:
      return v;
    case Kind::box: {
      if (v.size() != lower_.size())
        throw UsageError("vector length does not match box dimension");
      Vec out(v.size());
      for (size_t i = 0; i < v.size(); ++i)
        out[i] = std::min(std::max(v[i], lower_[i]), upper_[i]);
      return out;
    }
    case Kind::custom:
      return projection_(v);
  }
  return v;
}

bool FeasibleRegion::contains(const Vec& v) const {
  if (kind_ == Kind::unbounded) return true;
  Vec p = project(v);
  return p == v;
}

void EvalCounter::merge(const EvalCounter& other) {
  if (per_sub.size() != other.per_sub.size())
    throw UsageError("cannot merge counters of different sizes");
  for (size_t j = 0; j < per_sub.size(); ++j) per_sub[j] += other.per_sub[j];
  total += other.total;
}

SeparableProblem::SeparableProblem(int n, std::vector<SubFunction> subs,
                                   FeasibleRegion region, Vec x0)
    : n_(n), subs_(std::move(subs)), region_(std::move(region)), x0_(std::move(x0)) {
  if (n_ <= 0) throw UsageError("problem dimension must be positive");
  if (subs_.empty()) throw UsageError("problem needs at least one sub-function");
  if (static_cast<int>(x0_.size()) != n_)
    throw UsageError("start point length does not match dimension");
  if (!all_finite(x0_)) throw UsageError("start point must be finite");

  coverage_.assign(static_cast<size_t>(n_), 0);
  affected_.assign(static_cast<size_t>(n_), {});
  for (size_t j = 0; j < subs_.size(); ++j) {
    const SubFunction& s = subs_[j];
    s.block.validate(n_);
    if (!s.oracle) throw UsageError("sub-function has no oracle");
    for (int i : s.block.indices) {
      coverage_[static_cast<size_t>(i)] += 1;
      affected_[static_cast<size_t>(i)].push_back(static_cast<int>(j));
    }
  }
  for (int i = 0; i < n_; ++i) {
    if (coverage_[static_cast<size_t>(i)] == 0)
      throw UsageError("variable " + std::to_string(i) +
                       " is not covered by any sub-function");
  }
  if (!region_.contains(x0_))
    throw UsageError("start point is not feasible");
}

const std::vector<int>& SeparableProblem::affected_blocks(int i) const {
  if (i < 0 || i >= n_) throw UsageError("coordinate index out of range");
  return affected_[static_cast<size_t>(i)];
}

Vec SeparableProblem::gather(const Vec& x, int j) const {
  const IndexSet& b = sub(j).block;
  Vec out(static_cast<size_t>(b.size()));
  for (size_t p = 0; p < out.size(); ++p)
    out[p] = x[static_cast<size_t>(b.indices[p])];
  return out;
}

double SeparableProblem::evaluate_sub(int j, const Vec& y, EvalCounter& c) const {
  if (j < 0 || j >= num_subs()) throw UsageError("sub-function index out of range");
  const SubFunction& s = subs_[static_cast<size_t>(j)];
  if (static_cast<int>(y.size()) != s.block.size())
    throw UsageError("argument length does not match block size");
  c.count(j);
  return s.oracle(y);
}

double SeparableProblem::evaluate_full(const Vec& x, EvalCounter& c) const {
  if (static_cast<int>(x.size()) != n_)
    throw UsageError("argument length does not match dimension");
  double total = 0.0;
  for (int j = 0; j < num_subs(); ++j)
    total += evaluate_sub(j, gather(x, j), c);
  return total;
}

bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double dist_sq(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double inf_norm_diff(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

}  // namespace pddf
