#include "pddf/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace pddf {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::string best;
  for (int prec = 1; prec <= 17 && best.empty(); ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) best = buf;
  }
  if (best.empty()) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    best = buf;
  }
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    if (std::strlen(buf) < best.size() && std::strtod(buf, nullptr) == v)
      best = buf;
  }
  return best;
}

namespace {

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw UsageError("malformed number: " + s);
  return v;
}

int parse_int(const std::string& s) {
  size_t pos = 0;
  int v = std::stoi(s, &pos);
  if (pos != s.size()) throw UsageError("malformed integer: " + s);
  return v;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool valid_id(const std::string& id) {
  if (id.empty()) return false;
  for (char ch : id)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-'))
      return false;
  return true;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

SolverSetup RunConfig::setup() const {
  SolverSetup s;
  s.pd = pd;
  s.search = search;
  s.ls = ls;
  s.refine = refine;
  s.workers = workers;
  return s;
}

void RunConfig::apply(const std::string& key, const std::string& value) {
  if (key == "gamma") {
    search.gamma = ls.gamma = refine.gamma = parse_double(value);
  } else if (key == "theta") {
    search.theta = ls.theta = refine.theta = parse_double(value);
  } else if (key == "xi") {
    pd.xi = parse_double(value);
  } else if (key == "xi_schedule") {
    if (value == "constant")
      pd.xi_decreasing = false;
    else if (value == "decreasing")
      pd.xi_decreasing = true;
    else
      throw UsageError("xi_schedule must be constant or decreasing");
  } else if (key == "tau0") {
    pd.tau0 = parse_double(value);
  } else if (key == "tau_growth") {
    pd.tau_growth = parse_double(value);
  } else if (key == "tau_cap") {
    pd.tau_cap = parse_double(value);
  } else if (key == "outer_step_tol") {
    pd.outer_step_tol = parse_double(value);
  } else if (key == "max_outer") {
    pd.max_outer = parse_int(value);
  } else if (key == "wall_clock_limit") {
    pd.wall_clock_limit = ls.wall_clock_limit = refine.wall_clock_limit =
        parse_double(value);
  } else if (key == "workers") {
    workers = parse_int(value);
    if (workers < 1) throw UsageError("workers must be >= 1");
  } else if (key == "max_expansions") {
    search.max_expansions = ls.max_expansions = refine.max_expansions =
        parse_int(value);
  } else if (key == "stop_alpha") {
    ls.stop_alpha = parse_double(value);
  } else if (key == "refine_stop_alpha") {
    refine.stop_alpha = parse_double(value);
  } else {
    throw UsageError("unknown config key: " + key);
  }
}

void RunConfig::print(std::ostream& os) const {
  os << "gamma = " << format_double(search.gamma) << "\n";
  os << "theta = " << format_double(search.theta) << "\n";
  os << "xi = " << format_double(pd.xi) << "\n";
  os << "xi_schedule = " << (pd.xi_decreasing ? "decreasing" : "constant") << "\n";
  os << "tau0 = " << format_double(pd.tau0) << "\n";
  os << "tau_growth = " << format_double(pd.tau_growth) << "\n";
  os << "tau_cap = " << format_double(pd.tau_cap) << "\n";
  os << "outer_step_tol = " << format_double(pd.outer_step_tol) << "\n";
  os << "max_outer = " << pd.max_outer << "\n";
  os << "wall_clock_limit = " << format_double(pd.wall_clock_limit) << "\n";
  os << "workers = " << workers << "\n";
  os << "max_expansions = " << search.max_expansions << "\n";
  os << "stop_alpha = " << format_double(ls.stop_alpha) << "\n";
  os << "refine_stop_alpha = " << format_double(refine.stop_alpha) << "\n";
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(strip_comment(line));
    if (toks.empty()) continue;
    if (toks.size() != 3 || toks[1] != "=")
      throw UsageError(path + ":" + std::to_string(lineno) +
                       ": expected 'key = value'");
    base.apply(toks[0], toks[2]);
  }
  return base;
}

SuiteSpec load_suite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open suite file: " + path);
  SuiteSpec spec;
  SuiteEntry cur;
  bool open = false;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw UsageError(path + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(strip_comment(line));
    if (toks.empty()) continue;
    if (toks[0] == "problem") {
      if (open) fail("nested problem block");
      if (toks.size() != 2 || !valid_id(toks[1]))
        fail("expected 'problem <id>' with id of [A-Za-z0-9_-]");
      cur = {};
      cur.id = toks[1];
      open = true;
      continue;
    }
    if (toks[0] == "end") {
      if (!open) fail("'end' outside a problem block");
      if (cur.pattern.empty()) fail("problem block is missing 'pattern'");
      spec.entries.push_back(cur);
      open = false;
      continue;
    }
    if (!open) fail("expected 'problem <id>'");
    if (toks.size() < 3 || toks[1] != "=") fail("expected 'key = value...'");
    const std::string& key = toks[0];
    std::vector<std::string> vals(toks.begin() + 2, toks.end());
    if (key == "pattern") {
      cur.pattern = vals[0];
    } else if (key == "base" || key == "bases") {
      cur.bases = vals;
    } else if (key == "family") {
      cur.family = vals[0];
    } else if (key == "n") {
      cur.n = parse_int(vals[0]);
    } else if (key == "m") {
      cur.m = parse_int(vals[0]);
    } else if (key == "s") {
      cur.s = parse_int(vals[0]);
    } else if (key == "box") {
      if (vals.size() == 1 && vals[0] == "none")
        cur.box = std::nullopt;
      else if (vals.size() == 2)
        cur.box = {{parse_double(vals[0]), parse_double(vals[1])}};
      else
        fail("box expects 'none' or two bounds");
    } else if (key == "start") {
      if (vals.size() == 1 && vals[0] == "default") {
        cur.start = std::nullopt;
      } else {
        Vec x0;
        for (const std::string& v : vals) x0.push_back(parse_double(v));
        cur.start = std::move(x0);
      }
    } else if (key == "fstar") {
      cur.fstar = parse_double(vals[0]);
    } else {
      fail("unknown problem key: " + key);
    }
  }
  if (open) fail("unterminated problem block");
  return spec;
}

SuiteEntry load_problem_file(const std::string& path) {
  SuiteSpec spec = load_suite(path);
  if (spec.entries.size() != 1)
    throw UsageError(path + ": expected exactly one problem block");
  return spec.entries.front();
}

void write_records_csv(const std::vector<RunRecord>& records,
                       const std::string& dir) {
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / "records.csv");
  if (!out) throw UsageError("cannot write records.csv under " + dir);
  out << "problem,solver,n,m,f0,final_f,total_evals,wall_time_sec,termination\n";
  for (const RunRecord& r : records) {
    out << r.problem_id << ',' << r.solver_id << ',' << r.n << ',' << r.m << ','
        << format_double(r.f0) << ',' << format_double(r.final_f) << ','
        << r.total_evals << ',' << format_double(r.wall_time_sec) << ','
        << r.termination << "\n";
    std::ofstream hist(fs::path(dir) /
                       ("hist_" + r.problem_id + "__" + r.solver_id + ".csv"));
    hist << "evals,f\n";
    for (const auto& [e, f] : r.history)
      hist << e << ',' << format_double(f) << "\n";
  }
}

std::vector<RunRecord> read_records_csv(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "records.csv");
  if (!in) throw UsageError("cannot open records.csv under " + dir);
  std::string line;
  if (!std::getline(in, line) ||
      line != "problem,solver,n,m,f0,final_f,total_evals,wall_time_sec,termination")
    throw UsageError("malformed records.csv header");
  std::vector<RunRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 9)
      throw UsageError("records.csv:" + std::to_string(lineno) +
                       ": expected 9 fields");
    RunRecord r;
    r.problem_id = f[0];
    r.solver_id = f[1];
    r.n = parse_int(f[2]);
    r.m = parse_int(f[3]);
    r.f0 = parse_double(f[4]);
    r.final_f = parse_double(f[5]);
    r.total_evals = std::stoll(f[6]);
    r.wall_time_sec = parse_double(f[7]);
    r.termination = f[8];

    std::ifstream hist(fs::path(dir) /
                       ("hist_" + r.problem_id + "__" + r.solver_id + ".csv"));
    if (hist) {
      std::string hline;
      std::getline(hist, hline);
      if (hline != "evals,f") throw UsageError("malformed history header");
      while (std::getline(hist, hline)) {
        if (hline.empty()) continue;
        auto hf = split_csv_line(hline);
        if (hf.size() != 2) throw UsageError("malformed history row");
        r.history.emplace_back(std::stoll(hf[0]), parse_double(hf[1]));
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_trace_csv(const SolveReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write trace file: " + path);
  out << "k,tau,inner_iters,cum_sub_evals,f,residual,feas_gap\n";
  for (const TraceRow& row : rep.trace) {
    out << row.k << ',' << format_double(row.tau) << ',' << row.inner_iters
        << ',' << row.cum_evals << ',' << format_double(row.f) << ','
        << format_double(row.residual) << ',' << format_double(row.feas_gap)
        << "\n";
  }
}

void write_profile_csv(const std::vector<ProfileCurve>& curves,
                       const std::string& path, const std::string& x_name) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write profile file: " + path);
  out << x_name;
  for (const ProfileCurve& c : curves) out << ',' << c.solver;
  out << "\n";
  if (curves.empty()) return;
  for (size_t k = 0; k < curves[0].grid.size(); ++k) {
    out << format_double(curves[0].grid[k]);
    for (const ProfileCurve& c : curves) out << ',' << format_double(c.fraction[k]);
    out << "\n";
  }
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

}  // namespace

void write_profile_svg(const std::vector<ProfileCurve>& curves,
                       const std::string& path, const std::string& title,
                       const std::string& x_label) {
  const double W = 800, H = 500;
  const double ml = 70, mr = 160, mt = 50, mb = 60;
  const double pw = W - ml - mr, ph = H - mt - mb;

  double xmax = 1.0;
  for (const ProfileCurve& c : curves)
    for (double g : c.grid) xmax = std::max(xmax, g);
  double xmin = 0.0;

  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return mt + (1.0 - y) * ph; };

  std::ofstream out(path);
  if (!out) throw UsageError("cannot write svg file: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"18\">" << title << "</text>\n";

  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    double xv = xmin + (xmax - xmin) * t / 5.0;
    double yv = t / 5.0;
    out << "<line x1=\"" << sx(xv) << "\" y1=\"" << mt + ph << "\" x2=\""
        << sx(xv) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << sx(xv) << "\" y=\"" << mt + ph + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">" << format_double(std::round(xv * 100) / 100)
        << "</text>\n";
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << sy(yv) << "\" x2=\"" << ml
        << "\" y2=\"" << sy(yv) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 10 << "\" y=\"" << sy(yv) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\">" << format_double(yv) << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" << x_label << "</text>\n";
  out << "<text x=\"20\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\" transform=\"rotate(-90 20 " << mt + ph / 2
      << ")\">fraction of problems solved</text>\n";

  for (size_t ci = 0; ci < curves.size(); ++ci) {
    const ProfileCurve& c = curves[ci];
    const char* color = kPalette[ci % 6];
    std::ostringstream pts;
    double py = c.grid.empty() ? 0.0 : c.fraction[0];
    // step curve
    for (size_t k = 0; k < c.grid.size(); ++k) {
      if (k == 0) {
        pts << sx(c.grid[0]) << ',' << sy(c.fraction[0]);
      } else {
        pts << ' ' << sx(c.grid[k]) << ',' << sy(py);
        pts << ' ' << sx(c.grid[k]) << ',' << sy(c.fraction[k]);
      }
      py = c.fraction[k];
    }
    if (!c.grid.empty() && c.grid.back() < xmax)
      pts << ' ' << sx(xmax) << ',' << sy(py);
    out << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"2\"/>\n";
    double ly = mt + 20 + 22 * static_cast<double>(ci);
    out << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly << "\" x2=\""
        << ml + pw + 40 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << ml + pw + 46 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"13\">" << c.solver
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace pddf
