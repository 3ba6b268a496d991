#include <cmath>
#include <memory>

#include "pddf/bench.hpp"

namespace pddf {

namespace {

// ---- fixed-dimension elements -------------------------------------------

BaseFunction make_rosenbr() {
  BaseFunction b;
  b.name = "ROSENBR";
  b.dim = 2;
  b.oracle = [](const Vec& u) {
    double a = u[1] - u[0] * u[0];
    double c = 1.0 - u[0];
    return 100.0 * a * a + c * c;
  };
  b.gradient = [](const Vec& u) {
    double a = u[1] - u[0] * u[0];
    return Vec{-400.0 * u[0] * a - 2.0 * (1.0 - u[0]), 200.0 * a};
  };
  b.known_fstar = 0.0;
  b.known_xstar = Vec{1.0, 1.0};
  b.default_start = {-1.2, 1.0};
  return b;
}

BaseFunction make_beale() {
  BaseFunction b;
  b.name = "BEALE";
  b.dim = 2;
  b.oracle = [](const Vec& u) {
    double r1 = 1.5 - u[0] * (1.0 - u[1]);
    double r2 = 2.25 - u[0] * (1.0 - u[1] * u[1]);
    double r3 = 2.625 - u[0] * (1.0 - u[1] * u[1] * u[1]);
    return r1 * r1 + r2 * r2 + r3 * r3;
  };
  b.gradient = [](const Vec& u) {
    double v = u[1];
    double r1 = 1.5 - u[0] * (1.0 - v);
    double r2 = 2.25 - u[0] * (1.0 - v * v);
    double r3 = 2.625 - u[0] * (1.0 - v * v * v);
    double du = 2.0 * r1 * (v - 1.0) + 2.0 * r2 * (v * v - 1.0) +
                2.0 * r3 * (v * v * v - 1.0);
    double dv = 2.0 * r1 * u[0] + 2.0 * r2 * 2.0 * u[0] * v +
                2.0 * r3 * 3.0 * u[0] * v * v;
    return Vec{du, dv};
  };
  b.known_fstar = 0.0;
  b.known_xstar = Vec{3.0, 0.5};
  b.default_start = {1.0, 1.0};
  b.default_box = {{-4.5, 4.5}};
  return b;
}

BaseFunction make_woods4() {
  BaseFunction b;
  b.name = "WOODS";
  b.dim = 4;
  b.oracle = [](const Vec& u) {
    double a = u[1] - u[0] * u[0];
    double c = 1.0 - u[0];
    double d = u[3] - u[2] * u[2];
    double e = 1.0 - u[2];
    double s = u[1] + u[3] - 2.0;
    double t = u[1] - u[3];
    return 100.0 * a * a + c * c + 90.0 * d * d + e * e + 10.0 * s * s +
           0.1 * t * t;
  };
  b.gradient = [](const Vec& u) {
    double a = u[1] - u[0] * u[0];
    double d = u[3] - u[2] * u[2];
    double s = u[1] + u[3] - 2.0;
    double t = u[1] - u[3];
    return Vec{-400.0 * u[0] * a - 2.0 * (1.0 - u[0]),
               200.0 * a + 20.0 * s + 0.2 * t,
               -360.0 * u[2] * d - 2.0 * (1.0 - u[2]),
               180.0 * d + 20.0 * s - 0.2 * t};
  };
  b.known_fstar = 0.0;
  b.known_xstar = Vec{1.0, 1.0, 1.0, 1.0};
  b.default_start = {-3.0, -1.0, -3.0, -1.0};
  return b;
}

BaseFunction make_engval_element() {
  BaseFunction b;
  b.name = "ENGVAL";
  b.dim = 2;
  b.oracle = [](const Vec& u) {
    double q = u[0] * u[0] + u[1] * u[1];
    return q * q - 4.0 * u[0] + 3.0;
  };
  b.gradient = [](const Vec& u) {
    double q = u[0] * u[0] + u[1] * u[1];
    return Vec{4.0 * u[0] * q - 4.0, 4.0 * u[1] * q};
  };
  b.default_start = {2.0, 2.0};
  return b;
}

BaseFunction make_freuroth_element() {
  BaseFunction b;
  b.name = "FREUROTH";
  b.dim = 2;
  b.oracle = [](const Vec& u) {
    double v = u[1];
    double r1 = -13.0 + u[0] + ((5.0 - v) * v - 2.0) * v;
    double r2 = -29.0 + u[0] + ((v + 1.0) * v - 14.0) * v;
    return r1 * r1 + r2 * r2;
  };
  b.gradient = [](const Vec& u) {
    double v = u[1];
    double r1 = -13.0 + u[0] + ((5.0 - v) * v - 2.0) * v;
    double r2 = -29.0 + u[0] + ((v + 1.0) * v - 14.0) * v;
    double d1 = 10.0 * v - 3.0 * v * v - 2.0;
    double d2 = 2.0 * v + 3.0 * v * v - 14.0;
    return Vec{2.0 * r1 + 2.0 * r2, 2.0 * r1 * d1 + 2.0 * r2 * d2};
  };
  b.default_start = {0.5, -2.0};
  return b;
}

BaseFunction make_sphere(int dim) {
  BaseFunction b;
  b.name = "SPHERE";
  b.dim = dim;
  b.oracle = [](const Vec& u) {
    double s = 0.0;
    for (double x : u) s += x * x;
    return s;
  };
  b.gradient = [](const Vec& u) {
    Vec g(u.size());
    for (size_t i = 0; i < u.size(); ++i) g[i] = 2.0 * u[i];
    return g;
  };
  b.known_fstar = 0.0;
  b.known_xstar = Vec(static_cast<size_t>(dim), 0.0);
  b.default_start = Vec(static_cast<size_t>(dim), 1.0);
  return b;
}

// Diagonal quadratic with weights 1..dim.
BaseFunction make_dquad(int dim) {
  BaseFunction b;
  b.name = "DQUAD";
  b.dim = dim;
  b.oracle = [](const Vec& u) {
    double s = 0.0;
    for (size_t i = 0; i < u.size(); ++i)
      s += static_cast<double>(i + 1) * u[i] * u[i];
    return s;
  };
  b.gradient = [](const Vec& u) {
    Vec g(u.size());
    for (size_t i = 0; i < u.size(); ++i)
      g[i] = 2.0 * static_cast<double>(i + 1) * u[i];
    return g;
  };
  b.known_fstar = 0.0;
  b.known_xstar = Vec(static_cast<size_t>(dim), 0.0);
  b.default_start = Vec(static_cast<size_t>(dim), 1.0);
  return b;
}

// ---- natural CPS families -------------------------------------------------

struct FamilyBlocks {
  std::vector<SubFunction> subs;
  Vec start;
};

FamilyBlocks tridia_blocks(int n) {
  if (n < 2) throw UsageError("TRIDIA requires n >= 2");
  FamilyBlocks fb;
  fb.start.assign(static_cast<size_t>(n), 1.0);
  {
    SubFunction s;
    s.block.indices = {0};
    s.oracle = [](const Vec& y) { return (y[0] - 1.0) * (y[0] - 1.0); };
    s.test_gradient = [](const Vec& y) { return Vec{2.0 * (y[0] - 1.0)}; };
    fb.subs.push_back(std::move(s));
  }
  for (int i = 1; i < n; ++i) {
    double w = static_cast<double>(i + 1);
    SubFunction s;
    s.block.indices = {i - 1, i};
    s.oracle = [w](const Vec& y) {
      double r = 2.0 * y[1] - y[0];
      return w * r * r;
    };
    s.test_gradient = [w](const Vec& y) {
      double r = 2.0 * y[1] - y[0];
      return Vec{-2.0 * w * r, 4.0 * w * r};
    };
    fb.subs.push_back(std::move(s));
  }
  return fb;
}

FamilyBlocks broydn3d_blocks(int n) {
  if (n < 2) throw UsageError("BROYDN3D requires n >= 2");
  FamilyBlocks fb;
  fb.start.assign(static_cast<size_t>(n), -1.0);
  for (int i = 0; i < n; ++i) {
    SubFunction s;
    const bool has_prev = i > 0;
    const bool has_next = i < n - 1;
    if (has_prev) s.block.indices.push_back(i - 1);
    s.block.indices.push_back(i);
    if (has_next) s.block.indices.push_back(i + 1);
    const int pc = has_prev ? 1 : 0;  // position of x_i in the gathered vector
    s.oracle = [has_prev, has_next, pc](const Vec& y) {
      double xi = y[static_cast<size_t>(pc)];
      double r = (3.0 - 2.0 * xi) * xi + 1.0;
      if (has_prev) r -= y[0];
      if (has_next) r -= 2.0 * y[static_cast<size_t>(pc + 1)];
      return r * r;
    };
    s.test_gradient = [has_prev, has_next, pc](const Vec& y) {
      double xi = y[static_cast<size_t>(pc)];
      double r = (3.0 - 2.0 * xi) * xi + 1.0;
      if (has_prev) r -= y[0];
      if (has_next) r -= 2.0 * y[static_cast<size_t>(pc + 1)];
      Vec g(y.size(), 0.0);
      if (has_prev) g[0] = -2.0 * r;
      g[static_cast<size_t>(pc)] = 2.0 * r * (3.0 - 4.0 * xi);
      if (has_next) g[static_cast<size_t>(pc + 1)] = -4.0 * r;
      return g;
    };
    fb.subs.push_back(std::move(s));
  }
  return fb;
}

FamilyBlocks morebv_blocks(int n) {
  if (n < 2) throw UsageError("MOREBV requires n >= 2");
  FamilyBlocks fb;
  const double h = 1.0 / (n + 1.0);
  fb.start.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double t = (i + 1.0) * h;
    fb.start[static_cast<size_t>(i)] = t * (t - 1.0);
  }
  for (int i = 0; i < n; ++i) {
    SubFunction s;
    const bool has_prev = i > 0;
    const bool has_next = i < n - 1;
    if (has_prev) s.block.indices.push_back(i - 1);
    s.block.indices.push_back(i);
    if (has_next) s.block.indices.push_back(i + 1);
    const int pc = has_prev ? 1 : 0;
    const double t = (i + 1.0) * h;
    const double h2 = h * h;
    s.oracle = [has_prev, has_next, pc, t, h2](const Vec& y) {
      double xi = y[static_cast<size_t>(pc)];
      double cube = xi + t + 1.0;
      double r = 2.0 * xi + 0.5 * h2 * cube * cube * cube;
      if (has_prev) r -= y[0];
      if (has_next) r -= y[static_cast<size_t>(pc + 1)];
      return r * r;
    };
    s.test_gradient = [has_prev, has_next, pc, t, h2](const Vec& y) {
      double xi = y[static_cast<size_t>(pc)];
      double cube = xi + t + 1.0;
      double r = 2.0 * xi + 0.5 * h2 * cube * cube * cube;
      if (has_prev) r -= y[0];
      if (has_next) r -= y[static_cast<size_t>(pc + 1)];
      Vec g(y.size(), 0.0);
      if (has_prev) g[0] = -2.0 * r;
      g[static_cast<size_t>(pc)] = 2.0 * r * (2.0 + 1.5 * h2 * cube * cube);
      if (has_next) g[static_cast<size_t>(pc + 1)] = -2.0 * r;
      return g;
    };
    fb.subs.push_back(std::move(s));
  }
  return fb;
}

FamilyBlocks arwhead_blocks(int n) {
  if (n < 2) throw UsageError("ARWHEAD requires n >= 2");
  FamilyBlocks fb;
  fb.start.assign(static_cast<size_t>(n), 1.0);
  for (int i = 0; i < n - 1; ++i) {
    SubFunction s;
    s.block.indices = {i, n - 1};
    s.oracle = [](const Vec& y) {
      double q = y[0] * y[0] + y[1] * y[1];
      return q * q - 4.0 * y[0] + 3.0;
    };
    s.test_gradient = [](const Vec& y) {
      double q = y[0] * y[0] + y[1] * y[1];
      return Vec{4.0 * y[0] * q - 4.0, 4.0 * y[1] * q};
    };
    fb.subs.push_back(std::move(s));
  }
  return fb;
}

FamilyBlocks engval_blocks(int n) {
  if (n < 2) throw UsageError("ENGVAL requires n >= 2");
  FamilyBlocks fb;
  fb.start.assign(static_cast<size_t>(n), 2.0);
  BaseFunction el = make_engval_element();
  for (int i = 0; i < n - 1; ++i) {
    SubFunction s;
    s.block.indices = {i, i + 1};
    s.oracle = el.oracle;
    s.test_gradient = el.gradient;
    fb.subs.push_back(std::move(s));
  }
  return fb;
}

FamilyBlocks freuroth_blocks(int n) {
  if (n < 2) throw UsageError("FREUROTH requires n >= 2");
  FamilyBlocks fb;
  fb.start.assign(static_cast<size_t>(n), 0.0);
  fb.start[0] = 0.5;
  fb.start[1] = -2.0;
  BaseFunction el = make_freuroth_element();
  for (int i = 0; i < n - 1; ++i) {
    SubFunction s;
    s.block.indices = {i, i + 1};
    s.oracle = el.oracle;
    s.test_gradient = el.gradient;
    fb.subs.push_back(std::move(s));
  }
  return fb;
}

FamilyBlocks woods_blocks(int n) {
  if (n < 4 || n % 4 != 0) throw UsageError("WOODS requires n divisible by 4");
  FamilyBlocks fb;
  fb.start.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    fb.start[static_cast<size_t>(i)] = (i % 2 == 0) ? -3.0 : -1.0;
  for (int g = 0; g < n / 4; ++g) {
    int b = 4 * g;
    auto push = [&](std::vector<int> idx, Oracle o, GradientFn gr) {
      SubFunction s;
      s.block.indices = std::move(idx);
      s.oracle = std::move(o);
      s.test_gradient = std::move(gr);
      fb.subs.push_back(std::move(s));
    };
    push({b, b + 1},
         [](const Vec& y) {
           double a = y[1] - y[0] * y[0];
           return 100.0 * a * a;
         },
         [](const Vec& y) {
           double a = y[1] - y[0] * y[0];
           return Vec{-400.0 * y[0] * a, 200.0 * a};
         });
    push({b},
         [](const Vec& y) { return (1.0 - y[0]) * (1.0 - y[0]); },
         [](const Vec& y) { return Vec{-2.0 * (1.0 - y[0])}; });
    push({b + 2, b + 3},
         [](const Vec& y) {
           double a = y[1] - y[0] * y[0];
           return 90.0 * a * a;
         },
         [](const Vec& y) {
           double a = y[1] - y[0] * y[0];
           return Vec{-360.0 * y[0] * a, 180.0 * a};
         });
    push({b + 2},
         [](const Vec& y) { return (1.0 - y[0]) * (1.0 - y[0]); },
         [](const Vec& y) { return Vec{-2.0 * (1.0 - y[0])}; });
    push({b + 1, b + 3},
         [](const Vec& y) {
           double s = y[0] + y[1] - 2.0;
           return 10.0 * s * s;
         },
         [](const Vec& y) {
           double s = y[0] + y[1] - 2.0;
           return Vec{20.0 * s, 20.0 * s};
         });
    push({b + 1, b + 3},
         [](const Vec& y) {
           double t = y[0] - y[1];
           return 0.1 * t * t;
         },
         [](const Vec& y) {
           double t = y[0] - y[1];
           return Vec{0.2 * t, -0.2 * t};
         });
  }
  return fb;
}

FamilyBlocks dixmaana_blocks(int n) {
  if (n < 3 || n % 3 != 0) throw UsageError("DIXMAANA requires n divisible by 3");
  FamilyBlocks fb;
  fb.start.assign(static_cast<size_t>(n), 2.0);
  const int mp = n / 3;
  const double share = 1.0 / static_cast<double>(n);
  for (int i = 0; i < n; ++i) {
    SubFunction s;
    const bool pair1 = i < 2 * mp;  // gamma term x_i^2 x_{i+mp}^2
    const bool pair2 = i < mp;      // delta term x_i x_{i+2mp}
    s.block.indices.push_back(i);
    if (pair1) s.block.indices.push_back(i + mp);
    if (pair2) s.block.indices.push_back(i + 2 * mp);
    s.oracle = [pair1, pair2, share](const Vec& y) {
      double v = share + y[0] * y[0];
      if (pair1) v += 0.125 * y[0] * y[0] * y[1] * y[1];
      if (pair2) v += 0.125 * y[0] * y[2];
      return v;
    };
    s.test_gradient = [pair1, pair2](const Vec& y) {
      Vec g(y.size(), 0.0);
      g[0] = 2.0 * y[0];
      if (pair1) {
        g[0] += 0.25 * y[0] * y[1] * y[1];
        g[1] = 0.25 * y[0] * y[0] * y[1];
      }
      if (pair2) {
        g[0] += 0.125 * y[2];
        g[2] = 0.125 * y[0];
      }
      return g;
    };
    fb.subs.push_back(std::move(s));
  }
  return fb;
}

FamilyBlocks family_blocks(const std::string& family, int n) {
  if (family == "TRIDIA") return tridia_blocks(n);
  if (family == "BROYDN3D") return broydn3d_blocks(n);
  if (family == "MOREBV") return morebv_blocks(n);
  if (family == "ARWHEAD") return arwhead_blocks(n);
  if (family == "ENGVAL") return engval_blocks(n);
  if (family == "FREUROTH") return freuroth_blocks(n);
  if (family == "WOODS") return woods_blocks(n);
  if (family == "DIXMAANA") return dixmaana_blocks(n);
  throw UsageError("unknown CPS family: " + family);
}

// Whole-function view of a CPS family, for use as a shared-head base.
BaseFunction family_as_base(const std::string& family, int n,
                            std::optional<double> fstar,
                            std::optional<Vec> xstar) {
  FamilyBlocks fb = family_blocks(family, n);
  auto subs = std::make_shared<std::vector<SubFunction>>(std::move(fb.subs));
  BaseFunction b;
  b.name = family;
  b.dim = n;
  b.oracle = [subs](const Vec& x) {
    double total = 0.0;
    Vec y;
    for (const SubFunction& s : *subs) {
      y.resize(s.block.indices.size());
      for (size_t q = 0; q < y.size(); ++q)
        y[q] = x[static_cast<size_t>(s.block.indices[q])];
      total += s.oracle(y);
    }
    return total;
  };
  b.gradient = [subs](const Vec& x) {
    Vec g(x.size(), 0.0);
    Vec y;
    for (const SubFunction& s : *subs) {
      y.resize(s.block.indices.size());
      for (size_t q = 0; q < y.size(); ++q)
        y[q] = x[static_cast<size_t>(s.block.indices[q])];
      Vec gy = s.test_gradient(y);
      for (size_t q = 0; q < y.size(); ++q)
        g[static_cast<size_t>(s.block.indices[q])] += gy[q];
    }
    return g;
  };
  b.known_fstar = fstar;
  b.known_xstar = std::move(xstar);
  b.default_start = fb.start;
  return b;
}

}  // namespace

BaseFunction base_function(const std::string& name, std::optional<int> dim) {
  auto fixed = [&](BaseFunction b) {
    if (dim && *dim != b.dim)
      throw UsageError(name + " has fixed dimension " + std::to_string(b.dim));
    return b;
  };
  if (name == "ROSENBR") return fixed(make_rosenbr());
  if (name == "BEALE") return fixed(make_beale());
  if (name == "WOODS4") return fixed(make_woods4());
  if (name == "ENGVAL2") return fixed(make_engval_element());
  if (name == "FREUROTH2") return fixed(make_freuroth_element());
  if (name == "SPHERE") return make_sphere(dim.value_or(3));
  if (name == "DQUAD") return make_dquad(dim.value_or(3));
  if (name == "TRIDIA") {
    int n = dim.value_or(10);
    Vec xstar(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) xstar[static_cast<size_t>(i)] = std::pow(2.0, -i);
    return family_as_base(name, n, 0.0, std::move(xstar));
  }
  if (name == "BROYDN3D") return family_as_base(name, dim.value_or(10), 0.0, {});
  if (name == "MOREBV") return family_as_base(name, dim.value_or(12), {}, {});
  if (name == "ARWHEAD") {
    int n = dim.value_or(10);
    Vec xstar(static_cast<size_t>(n), 1.0);
    xstar.back() = 0.0;
    return family_as_base(name, n, 0.0, std::move(xstar));
  }
  if (name == "ENGVAL") return family_as_base(name, dim.value_or(10), {}, {});
  if (name == "FREUROTH") return family_as_base(name, dim.value_or(10), {}, {});
  if (name == "WOODS") {
    int n = dim.value_or(20);
    return family_as_base(name, n, 0.0, Vec(static_cast<size_t>(n), 1.0));
  }
  if (name == "DIXMAANA") {
    int n = dim.value_or(15);
    return family_as_base(name, n, 1.0, Vec(static_cast<size_t>(n), 0.0));
  }
  throw UsageError("unknown base function: " + name);
}

std::vector<BaseFunction> base_library() {
  std::vector<BaseFunction> out;
  for (const char* name :
       {"ROSENBR", "BEALE", "WOODS4", "ENGVAL2", "FREUROTH2", "SPHERE",
        "DQUAD", "TRIDIA", "BROYDN3D", "MOREBV", "ARWHEAD", "ENGVAL",
        "FREUROTH", "WOODS", "DIXMAANA"})
    out.push_back(base_function(name));
  return out;
}

SeparableProblem make_cps(const std::string& family, int n, BoxSpec box) {
  FamilyBlocks fb = family_blocks(family, n);
  FeasibleRegion region = FeasibleRegion::unbounded();
  Vec start = std::move(fb.start);
  if (box) {
    Vec lo(static_cast<size_t>(n), box->first);
    Vec hi(static_cast<size_t>(n), box->second);
    region = FeasibleRegion::box(std::move(lo), std::move(hi));
    start = region.project(start);
  }
  return SeparableProblem(n, std::move(fb.subs), std::move(region),
                          std::move(start));
}

}  // namespace pddf
