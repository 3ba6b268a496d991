#include <algorithm>

#include "pddf/bench.hpp"

namespace pddf {

namespace {

SeparableProblem assemble(int n, std::vector<SubFunction> subs,
                          const std::vector<const BaseFunction*>& owners,
                          BoxSpec box) {
  // Start point: write each base's default start into its block, blocks in
  // ascending order, so later blocks win on shared coordinates.
  Vec start(static_cast<size_t>(n), 0.0);
  for (size_t j = 0; j < subs.size(); ++j) {
    const Vec& s0 = owners[j]->default_start;
    const auto& idx = subs[j].block.indices;
    for (size_t q = 0; q < idx.size(); ++q)
      start[static_cast<size_t>(idx[q])] = s0[q];
  }
  FeasibleRegion region = FeasibleRegion::unbounded();
  if (box) {
    Vec lo(static_cast<size_t>(n), box->first);
    Vec hi(static_cast<size_t>(n), box->second);
    region = FeasibleRegion::box(std::move(lo), std::move(hi));
    start = region.project(start);
  }
  return SeparableProblem(n, std::move(subs), std::move(region),
                          std::move(start));
}

SubFunction copy_of(const BaseFunction& base, std::vector<int> indices) {
  SubFunction s;
  s.block.indices = std::move(indices);
  s.oracle = base.oracle;
  s.test_gradient = base.gradient;
  return s;
}

}  // namespace

SeparableProblem generate_chain(const BaseFunction& base, int m, BoxSpec box) {
  if (m < 1) throw UsageError("chain requires m >= 1");
  if (base.dim < 2 && m > 1)
    throw UsageError("chain requires base dimension >= 2");
  const int d = base.dim;
  const int n = m * (d - 1) + 1;
  std::vector<SubFunction> subs;
  std::vector<const BaseFunction*> owners;
  for (int j = 0; j < m; ++j) {
    std::vector<int> idx(static_cast<size_t>(d));
    for (int q = 0; q < d; ++q) idx[static_cast<size_t>(q)] = j * (d - 1) + q;
    subs.push_back(copy_of(base, std::move(idx)));
    owners.push_back(&base);
  }
  return assemble(n, std::move(subs), owners, box);
}

SeparableProblem generate_shared_head(const std::vector<BaseFunction>& bases,
                                      int s, BoxSpec box) {
  if (bases.empty()) throw UsageError("shared_head requires at least one base");
  if (s < 1) throw UsageError("shared_head requires s >= 1");
  for (const BaseFunction& b : bases)
    if (b.dim < s)
      throw UsageError("shared_head requires every base dimension >= s");
  int n = s;
  std::vector<SubFunction> subs;
  std::vector<const BaseFunction*> owners;
  for (const BaseFunction& b : bases) {
    std::vector<int> idx;
    idx.reserve(static_cast<size_t>(b.dim));
    for (int q = 0; q < s; ++q) idx.push_back(q);
    for (int q = s; q < b.dim; ++q) idx.push_back(n + (q - s));
    n += b.dim - s;
    subs.push_back(copy_of(b, std::move(idx)));
    owners.push_back(&b);
  }
  return assemble(n, std::move(subs), owners, box);
}

SeparableProblem generate_shared_all(const BaseFunction& base, int m,
                                     BoxSpec box) {
  if (m < 1) throw UsageError("shared_all requires m >= 1");
  if (base.dim < 2) throw UsageError("shared_all requires base dimension >= 2");
  const int d = base.dim;
  const int n = m * (d - 1) + 1;
  std::vector<SubFunction> subs;
  std::vector<const BaseFunction*> owners;
  for (int j = 0; j < m; ++j) {
    // Private coordinates first, then the shared last coordinate; the base's
    // last variable is the shared one.
    std::vector<int> idx;
    idx.reserve(static_cast<size_t>(d));
    for (int q = 0; q < d - 1; ++q) idx.push_back(j * (d - 1) + q);
    idx.push_back(n - 1);
    subs.push_back(copy_of(base, std::move(idx)));
    owners.push_back(&base);
  }
  return assemble(n, std::move(subs), owners, box);
}

SeparableProblem generate_disjoint(const BaseFunction& base, int m, BoxSpec box) {
  if (m < 1) throw UsageError("disjoint requires m >= 1");
  const int d = base.dim;
  const int n = m * d;
  std::vector<SubFunction> subs;
  std::vector<const BaseFunction*> owners;
  for (int j = 0; j < m; ++j) {
    std::vector<int> idx(static_cast<size_t>(d));
    for (int q = 0; q < d; ++q) idx[static_cast<size_t>(q)] = j * d + q;
    subs.push_back(copy_of(base, std::move(idx)));
    owners.push_back(&base);
  }
  return assemble(n, std::move(subs), owners, box);
}

BenchProblem build_problem(const SuiteEntry& e) {
  BenchProblem bp = build_problem_default_start(e);
  if (e.start) {
    // explicit start points are taken as-is; infeasibility is a usage error
    bp.problem = SeparableProblem(bp.problem.dim(), bp.problem.subs(),
                                  bp.problem.region(), *e.start);
  }
  return bp;
}

BenchProblem build_problem_default_start(const SuiteEntry& e) {
  auto parse_base = [](const std::string& token) {
    auto colon = token.find(':');
    if (colon == std::string::npos) return base_function(token);
    std::string name = token.substr(0, colon);
    int d = std::stoi(token.substr(colon + 1));
    return base_function(name, d);
  };

  if (e.pattern == "native") {
    if (e.family.empty() || e.n <= 0)
      throw UsageError("native pattern requires family and n");
    return {e.id, make_cps(e.family, e.n, e.box), e.fstar};
  }
  if (e.pattern == "chain") {
    if (e.bases.size() != 1)
      throw UsageError("chain requires exactly one base");
    BaseFunction b = parse_base(e.bases[0]);
    return {e.id, generate_chain(b, e.m, e.box), e.fstar};
  }
  if (e.pattern == "shared_head") {
    std::vector<BaseFunction> bs;
    for (const std::string& t : e.bases) bs.push_back(parse_base(t));
    return {e.id, generate_shared_head(bs, e.s, e.box), e.fstar};
  }
  if (e.pattern == "shared_all") {
    if (e.bases.size() != 1)
      throw UsageError("shared_all requires exactly one base");
    BaseFunction b = parse_base(e.bases[0]);
    return {e.id, generate_shared_all(b, e.m, e.box), e.fstar};
  }
  if (e.pattern == "disjoint") {
    if (e.bases.size() != 1)
      throw UsageError("disjoint requires exactly one base");
    BaseFunction b = parse_base(e.bases[0]);
    return {e.id, generate_disjoint(b, e.m, e.box), e.fstar};
  }
  throw UsageError("unknown pattern: " + e.pattern);
}

std::vector<BenchProblem> build_suite(const SuiteSpec& spec) {
  std::vector<BenchProblem> out;
  out.reserve(spec.entries.size());
  for (const SuiteEntry& e : spec.entries) out.push_back(build_problem(e));
  return out;
}

SuiteSpec standard_suite() {
  SuiteSpec s;
  auto add = [&](SuiteEntry e) { s.entries.push_back(std::move(e)); };

  SuiteEntry e;

  e = {};
  e.id = "rosenbr_chain_m5";
  e.pattern = "chain";
  e.bases = {"ROSENBR"};
  e.m = 5;
  e.fstar = 0.0;
  add(e);

  e = {};
  e.id = "rosenbr_chain_m25_box";
  e.pattern = "chain";
  e.bases = {"ROSENBR"};
  e.m = 25;
  e.box = {{-10.0, 10.0}};
  e.fstar = 0.0;
  add(e);

  e = {};
  e.id = "tridia_n10";
  e.pattern = "native";
  e.family = "TRIDIA";
  e.n = 10;
  e.fstar = 0.0;
  add(e);

  e = {};
  e.id = "tridia_n50_box";
  e.pattern = "native";
  e.family = "TRIDIA";
  e.n = 50;
  e.box = {{-10.0, 10.0}};
  e.fstar = 0.0;
  add(e);

  e = {};
  e.id = "broydn3d_n100";
  e.pattern = "native";
  e.family = "BROYDN3D";
  e.n = 100;
  e.fstar = 0.0;
  add(e);

  e = {};
  e.id = "broydn3d_n30_box";
  e.pattern = "native";
  e.family = "BROYDN3D";
  e.n = 30;
  e.box = {{-2.0, 2.0}};
  e.fstar = 0.0;
  add(e);

  e = {};
  e.id = "woods_n8";
  e.pattern = "native";
  e.family = "WOODS";
  e.n = 8;
  e.fstar = 0.0;
  add(e);

  e = {};
  e.id = "woods_n20_box";
  e.pattern = "native";
  e.family = "WOODS";
  e.n = 20;
  e.box = {{-5.0, 5.0}};
  e.fstar = 0.0;
  add(e);

  e = {};
  e.id = "shquad_s1";
  e.pattern = "shared_head";
  e.bases = {"SPHERE:3", "SPHERE:3"};
  e.s = 1;
  e.fstar = 0.0;
  add(e);

  e = {};
  e.id = "shquad_s2_box";
  e.pattern = "shared_head";
  e.bases = {"DQUAD:5", "SPHERE:5", "DQUAD:5"};
  e.s = 2;
  e.box = {{-4.0, 4.0}};
  e.fstar = 0.0;
  add(e);

  e = {};
  e.id = "arwhead_n20";
  e.pattern = "native";
  e.family = "ARWHEAD";
  e.n = 20;
  e.fstar = 0.0;
  add(e);

  e = {};
  e.id = "beales_m5_box";
  e.pattern = "disjoint";
  e.bases = {"BEALE"};
  e.m = 5;
  e.box = {{-4.5, 4.5}};
  e.fstar = 0.0;
  add(e);

  return s;
}

}  // namespace pddf
