#include "dunkl/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>

#include "json.hpp"

#include "dunkl/errors.hpp"
#include "dunkl/parallel.hpp"
#include "dunkl/semigroup.hpp"

namespace dunkl::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw DomainError("setting '" + key + "' expects a number, got '" + text + "'");
  }
  if (used != v.size()) throw DomainError("setting '" + key + "' expects a number, got '" + text + "'");
  return out;
}

long long parse_integer(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  if (v != std::floor(v) || std::abs(v) > 9e15) throw DomainError("setting '" + key + "' expects an integer");
  return static_cast<long long>(v);
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double("list", tok));
  return out;
}

// ---------------------------------------------------------------------------

Multiplicity RunConfig::multiplicity() const {
  if (d < 1) throw DomainError("dimension must be at least 1");
  if (kappa.size() == 1) return Multiplicity::uniform(d, kappa.front());
  if (static_cast<int>(kappa.size()) != d) throw DomainError("kappa needs one value or d values");
  return Multiplicity(kappa);
}

Family RunConfig::parsed_family() const { return parse_family(family); }
Form RunConfig::parsed_form() const { return parse_form(form); }

GridSpec RunConfig::grid() const {
  if (t_count < 1 || points < 1) throw DomainError("empty grid: t_count and points must be positive");
  return random_grid(d, log_spaced(t_min, t_max, t_count), points, seed);
}

Point RunConfig::point_x() const {
  if (x.empty()) return Point(d, 0.0);
  if (static_cast<int>(x.size()) != d) throw DomainError("x needs d coordinates");
  return x;
}

Point RunConfig::point_y() const {
  if (y.empty()) return Point(d, 0.0);
  if (static_cast<int>(y.size()) != d) throw DomainError("y needs d coordinates");
  return y;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  return {{"family", family},
          {"form", form},
          {"d", std::to_string(d)},
          {"kappa", join(kappa)},
          {"kappa_values", join(kappa_values)},
          {"t_min", format_double(t_min)},
          {"t_max", format_double(t_max)},
          {"t_count", std::to_string(t_count)},
          {"points", std::to_string(points)},
          {"seed", std::to_string(seed)},
          {"tol", format_double(tol)},
          {"format", format == Format::csv ? "csv" : "json"},
          {"out", out},
          {"jobs", std::to_string(jobs)},
          {"t", format_double(t)},
          {"x", join(x)},
          {"y", join(y)}};
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = normalize_key(trim(raw_key));
  const std::string value = trim(raw_value);
  if (key == "family") {
    parse_family(value);
    cfg.family = value;
  } else if (key == "form") {
    parse_form(value);
    cfg.form = value;
  } else if (key == "d") {
    const long long d = parse_integer(key, value);
    if (d < 1 || d > 16) throw DomainError("d must lie in [1, 16]");
    cfg.d = static_cast<int>(d);
  } else if (key == "kappa") {
    std::vector<double> k = parse_list(value);
    if (k.empty()) throw DomainError("kappa needs at least one value");
    for (double v : k) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("kappa values must be finite and nonnegative");
    }
    cfg.kappa = std::move(k);
  } else if (key == "kappa_values") {
    std::vector<double> k = parse_list(value);
    for (double v : k) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("kappa values must be finite and nonnegative");
    }
    cfg.kappa_values = std::move(k);
  } else if (key == "t_min" || key == "t_max" || key == "t") {
    const double v = parse_double(key, value);
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(key + " must be positive");
    (key == "t_min" ? cfg.t_min : key == "t_max" ? cfg.t_max : cfg.t) = v;
  } else if (key == "t_count" || key == "points") {
    const long long n = parse_integer(key, value);
    if (n < 0 || n > 10000000) throw DomainError(key + " must be a nonnegative count");
    (key == "t_count" ? cfg.t_count : cfg.points) = static_cast<int>(n);
  } else if (key == "seed") {
    const long long n = parse_integer(key, value);
    if (n < 0) throw DomainError("seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(n);
  } else if (key == "tol") {
    const double v = parse_double(key, value);
    if (!(v >= 0.0)) throw DomainError("tol must be nonnegative");
    cfg.tol = v;
  } else if (key == "format") {
    if (value == "csv") {
      cfg.format = Format::csv;
    } else if (value == "json") {
      cfg.format = Format::json;
    } else {
      throw DomainError("format must be csv or json");
    }
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "jobs") {
    const long long n = parse_integer(key, value);
    if (n < 0) throw DomainError("jobs must be nonnegative");
    cfg.jobs = static_cast<int>(n);
  } else if (key == "x" || key == "y") {
    (key == "x" ? cfg.x : cfg.y) = parse_list(value);
  } else {
    throw DomainError("unknown setting '" + raw_key + "'");
  }
}

void load_config(RunConfig& cfg, std::istream& in) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config line " + std::to_string(number) + ": expected key = value");
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file '" + path + "'");
  load_config(cfg, in);
}

// ---------------------------------------------------------------------------
// tables and writers

Table inequality_table(int width) {
  Table t;
  t.columns = {"certificate", "param", "s", "t"};
  for (int j = 1; j <= width; ++j) t.columns.push_back("x" + std::to_string(j));
  for (int j = 1; j <= width; ++j) t.columns.push_back("y" + std::to_string(j));
  for (const char* c : {"lhs", "bound", "margin"}) t.columns.push_back(c);
  return t;
}

void append_report(Table& table, const InequalityReport& report, int width) {
  for (const InequalityRecord& r : report.records) {
    std::vector<Cell> row{report.name, r.param, r.s, r.t};
    for (int j = 0; j < width; ++j) {
      row.push_back(j < static_cast<int>(r.x.size()) ? Cell(r.x[j]) : Cell(std::string()));
    }
    for (int j = 0; j < width; ++j) {
      row.push_back(j < static_cast<int>(r.y.size()) ? Cell(r.y[j]) : Cell(std::string()));
    }
    row.push_back(r.lhs);
    row.push_back(r.bound);
    row.push_back(r.margin);
    table.rows.push_back(std::move(row));
  }
}

namespace {

std::string cell_text(const Cell& c) {
  if (const double* v = std::get_if<double>(&c)) return format_double(*v);
  return std::get<std::string>(c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (const double* v = std::get_if<double>(&c)) {
    if (!std::isfinite(*v)) return nullptr;
    return *v;
  }
  const std::string& s = std::get<std::string>(c);
  if (s.empty()) return nullptr;
  return s;
}

std::string summary_text(const Summary& s) {
  return "records=" + std::to_string(s.records) + " min_margin=" + format_double(s.min_margin) +
         " violations=" + std::to_string(s.violations) + " tol=" + format_double(s.tolerance);
}

}  // namespace

void write_csv(std::ostream& out, const RunConfig& cfg, const Report& report, const std::string& timestamp) {
  out << "# command = " << report.command << '\n';
  out << "# generated = " << timestamp << '\n';
  for (const auto& [k, v] : cfg.echo()) out << "# " << k << " = " << v << '\n';
  for (const auto& [k, v] : report.extra_meta) out << "# " << k << " = " << v << '\n';
  for (const Summary& s : report.summaries) out << "# summary." << s.name << " = " << summary_text(s) << '\n';
  for (std::size_t i = 0; i < report.table.columns.size(); ++i) {
    out << (i ? "," : "") << report.table.columns[i];
  }
  out << '\n';
  for (const auto& row : report.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
}

void write_json(std::ostream& out, const RunConfig& cfg, const Report& report, const std::string& timestamp) {
  nlohmann::ordered_json meta;
  meta["command"] = report.command;
  meta["generated"] = timestamp;
  nlohmann::ordered_json config;
  for (const auto& [k, v] : cfg.echo()) config[k] = v;
  meta["config"] = config;
  for (const auto& [k, v] : report.extra_meta) meta[k] = v;
  nlohmann::ordered_json sums = nlohmann::ordered_json::array();
  for (const Summary& s : report.summaries) {
    sums.push_back({{"name", s.name},
                    {"records", s.records},
                    {"min_margin", std::isfinite(s.min_margin) ? nlohmann::ordered_json(s.min_margin) : nullptr},
                    {"violations", s.violations},
                    {"tolerance", s.tolerance}});
  }
  meta["summaries"] = sums;
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& row : report.table.rows) {
    nlohmann::ordered_json rec;
    for (std::size_t i = 0; i < row.size(); ++i) rec[report.table.columns[i]] = cell_json(row[i]);
    records.push_back(std::move(rec));
  }
  nlohmann::ordered_json doc;
  doc["meta"] = meta;
  doc["records"] = records;
  out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// certificates

namespace {

double tol_or(const RunConfig& cfg, double fallback) { return cfg.tol >= 0.0 ? cfg.tol : fallback; }

Summary summarize(const InequalityReport& r) {
  return {r.name, r.records.size(), r.min_margin, r.violation_count, r.tolerance};
}

/// A report whose records carry a deviation that must stay within tolerance of zero.
InequalityReport zero_report(const std::string& name, double tolerance) {
  InequalityReport r;
  r.name = name;
  r.tolerance = tolerance;
  return r;
}

InequalityRecord scalar_record(double param, double lhs, double bound) {
  InequalityRecord r;
  r.param = param;
  r.t = kNaN;
  r.lhs = lhs;
  r.bound = bound;
  return r;
}

KernelSpec config_spec(const RunConfig& cfg, Family family) {
  const Multiplicity m = cfg.multiplicity();
  const Form form = cfg.parsed_form() == Form::closed ? Form::integral : cfg.parsed_form();
  return make_spec(family, m, form);
}

std::vector<InequalityReport> certify_liyau(const RunConfig& cfg, Family family) {
  const KernelSpec spec = config_spec(cfg, family);
  const GridSpec grid = cfg.grid();
  const std::string tag = to_string(family);
  std::vector<InequalityReport> out;
  out.push_back(liyau_sweep(spec, grid, tol_or(cfg, 1e-8)));

  // sharp <= weak at every grid time
  InequalityReport chain = zero_report("bound-chain-" + tag, tol_or(cfg, 0.0));
  for (double t : grid.t_values) {
    const Bound b = liyau_bound(family, spec.mult, t);
    InequalityRecord r = scalar_record(kNaN, b.sharp, b.weak);
    r.t = t;
    chain.records.push_back(r);
  }
  chain.finalize();
  out.push_back(std::move(chain));

  // per-coordinate second derivative of the log kernel bounded below by -c2
  InequalityReport step = zero_report("axis-convexity-" + tag, tol_or(cfg, 1e-8));
  step.records.resize(grid.size());
  const std::size_t pairs = grid.x_points.size();
  for_each_index(grid.size(), [&](std::size_t i) {
    InequalityRecord& r = step.records[i];
    r.t = grid.t_values[i / pairs];
    r.x = grid.x_points[i % pairs];
    r.y = grid.y_points[i % pairs];
    const double c2 = axis_scales(family, r.t).c2;
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < spec.dim(); ++j) {
      worst = std::max(worst, -axis_second_log_derivative(family, spec.mult[j], r.t, r.x[j], r.y[j]));
    }
    r.lhs = worst;
    r.bound = c2;
  });
  step.finalize();
  out.push_back(std::move(step));

  // transfer to a positive solution with mixture data
  if (spec.dim() <= 3) {
    Rng rng(cfg.seed + 1);
    const Solution u(random_mixture(spec.dim(), rng), spec);
    const int pts = std::max(1, cfg.points / 4);
    const GridSpec sgrid = random_grid(spec.dim(), grid.t_values, pts, cfg.seed + 2);
    out.push_back(solution_liyau_check(u, sgrid, tol_or(cfg, 1e-8)));
    out.push_back(gradient_form_check(u, sgrid, tol_or(cfg, 1e-6)));
    out.push_back(pi_log_check(u, sgrid, tol_or(cfg, 1e-12)));
  }
  return out;
}

std::vector<InequalityReport> certify_harnack(const RunConfig& cfg, Family family) {
  const KernelSpec spec = config_spec(cfg, family);
  const int d = spec.dim();
  const double tol = tol_or(cfg, 1e-6);
  const int count = std::max(1, cfg.points * 4);
  const auto tuples = random_harnack_tuples(d, count, cfg.t_min, cfg.t_max, cfg.seed + 3);
  const std::string tag = to_string(family);
  std::vector<InequalityReport> out;

  auto run_variants = [&](const LogSolution& lu, const std::string& who) {
    for (HarnackVariant v : {HarnackVariant::sharp, HarnackVariant::weak, HarnackVariant::beta_path}) {
      InequalityReport r = harnack_check(lu, family, spec.mult, tuples, v, tol);
      r.name += "-" + who;
      out.push_back(std::move(r));
    }
  };
  Rng rng(cfg.seed + 4);
  run_variants(memoize(log_kernel_solution(spec, rng.point(d, 2.0))), "kernel");
  if (d <= 3) run_variants(memoize(log_solution(Solution(random_mixture(d, rng), spec))), "solution");

  // closed sharp exponent against the beta path integral
  InequalityReport agree = zero_report("harnack-beta-closed-" + tag, tol_or(cfg, 1e-10));
  const auto beta = gradient_beta(family, spec.mult);
  for (const HarnackTuple& h : tuples) {
    InequalityRecord r;
    r.s = h.s;
    r.t = h.t;
    r.x = h.x;
    r.y = h.y;
    r.lhs = std::abs(beta_path_exponent(beta, h.s, h.t, h.x, h.y) -
                     harnack_rhs(family, spec.mult, h.s, h.t, h.x, h.y).log_sharp);
    r.bound = 0.0;
    agree.records.push_back(std::move(r));
  }
  agree.finalize();
  out.push_back(std::move(agree));

  if (family == Family::dunkl_heat) {
    // Gaussian equality at x = y = 0
    InequalityReport eq = zero_report("harnack-gauss-equality", tol_or(cfg, 1e-10));
    const KernelSpec g = make_spec(Family::gauss, Multiplicity::uniform(d, 0.0), Form::closed);
    const Point o(d, 0.0);
    InequalityRecord r;
    r.s = 0.5;
    r.t = 1.0;
    r.x = o;
    r.y = o;
    const double ratio = evaluate(g, 0.5, o, o).log_abs - evaluate(g, 1.0, o, o).log_abs;
    r.lhs = std::abs(ratio - 0.5 * d * std::log(2.0));
    r.bound = 0.0;
    eq.records.push_back(std::move(r));
    eq.finalize();
    out.push_back(std::move(eq));
  }
  return out;
}

std::vector<InequalityReport> certify_lemma41(const RunConfig& cfg) {
  constexpr int kInstances = 50;
  Rng rng(cfg.seed + 5);
  InequalityReport chain = zero_report("chain-rule", tol_or(cfg, 1e-6));
  InequalityReport pi = zero_report("pi-log-field", tol_or(cfg, 1e-12));
  InequalityReport inv = zero_report("invariant-chain-rule", tol_or(cfg, 1e-6));
  const Psi psis[] = {Psi::log(), Psi::square(), Psi::identity()};
  for (int i = 0; i < kInstances; ++i) {
    const int d = 1 + i % 3;
    const ScalarField f = random_positive_field(d, rng);
    const ScalarField radial = random_radial_field(rng);
    std::vector<double> k(d);
    for (double& v : k) v = rng.uniform(0.1, 2.0);
    const Multiplicity m(k);
    const Point x = rng.point(d, 2.0, 1e-2);
    const Psi& psi = psis[i % 3];

    InequalityRecord r;
    r.param = m[0];
    r.t = kNaN;
    r.x = x;
    r.lhs = chain_rule_residual(f, psi, x, m).residual;
    r.bound = 0.0;
    chain.records.push_back(r);
    r.lhs = chain_rule_residual(f, Psi::log(), x, m).pi;
    pi.records.push_back(r);
    r.lhs = invariant_chain_rule_residual(radial, psi, x, m);
    inv.records.push_back(r);
  }
  chain.finalize();
  pi.finalize();
  inv.finalize();
  return {chain, pi, inv};
}

std::vector<InequalityReport> certify_phi(const RunConfig& cfg) {
  constexpr int kPoints = 10000;
  const std::vector<double> kappas =
      cfg.kappa_values.empty() ? std::vector<double>{0.1, 0.5, 1.0, 2.5, 10.0} : cfg.kappa_values;
  InequalityReport ph = zero_report("phi-nonnegative", tol_or(cfg, 1e-12));
  InequalityReport ps = zero_report("psi-sign", tol_or(cfg, 1e-12));
  ph.records.resize(kappas.size() * kPoints);
  ps.records.resize(kappas.size() * kPoints);
  for_each_index(ph.records.size(), [&](std::size_t i) {
    const double kappa = kappas[i / kPoints];
    const double a = -50.0 + 100.0 * static_cast<double>(i % kPoints) / (kPoints - 1);
    const double sign = a > 0.0 ? 1.0 : a < 0.0 ? -1.0 : 0.0;
    ph.records[i] = scalar_record(kappa, kKappaZero < kappa ? -phi(kappa, a) : 0.0, 0.0);
    ph.records[i].x = {a};
    ps.records[i] = scalar_record(kappa, kKappaZero < kappa ? -sign * psi_normalized(kappa, a) : 0.0, 0.0);
    ps.records[i].x = {a};
  });
  ph.finalize();
  ps.finalize();
  return {ph, ps};
}

std::vector<InequalityReport> certify_logconvex(const RunConfig& cfg) {
  Family family = cfg.parsed_family();
  if (family == Family::gauss) family = Family::dunkl_heat;
  if (family == Family::mehler) family = Family::dho;
  const int d = cfg.d;
  if (d > 3) throw DomainError("logconvex needs d <= 3");
  const auto segments = random_segments(d, std::max(1, cfg.points), cfg.seed + 6);
  std::vector<InequalityReport> out;
  std::vector<Multiplicity> mults{Multiplicity::uniform(d, 0.0)};
  if (!cfg.multiplicity().is_zero()) mults.push_back(cfg.multiplicity());
  Rng rng(cfg.seed + 7);
  for (const Multiplicity& m : mults) {
    const KernelSpec spec = make_spec(family, m);
    const std::string tag = m.is_zero() ? "-k0" : "-k";
    InequalityReport a = log_convexity_check(log_solution(Solution(random_mixture(d, rng), spec)), spec, cfg.t,
                                             segments, tol_or(cfg, 1e-10));
    a.name += tag + "-solution";
    InequalityReport b = log_convexity_check(log_kernel_solution(spec, rng.point(d, 2.0)), spec, cfg.t, segments,
                                             tol_or(cfg, 1e-10));
    b.name += tag + "-kernel";
    out.push_back(std::move(a));
    out.push_back(std::move(b));
  }
  return out;
}

CommandResult pack(const std::string& command, const std::vector<InequalityReport>& reports) {
  CommandResult res;
  res.report.command = command;
  int width = 1;
  for (const auto& r : reports) {
    for (const auto& rec : r.records) {
      width = std::max({width, static_cast<int>(rec.x.size()), static_cast<int>(rec.y.size())});
    }
  }
  res.report.table = inequality_table(width);
  for (const auto& r : reports) {
    append_report(res.report.table, r, width);
    res.report.summaries.push_back(summarize(r));
    if (!r.passed()) res.exit_code = kViolation;
  }
  return res;
}

}  // namespace

CommandResult cmd_certify(const RunConfig& cfg, const std::string& which) {
  static const std::vector<std::string> kAll{"liyau-dho", "liyau-dunkl", "harnack-dho", "harnack-dunkl",
                                             "lemma41",   "phi",         "logconvex"};
  std::vector<std::string> selected;
  if (which == "all") {
    selected = kAll;
  } else if (std::find(kAll.begin(), kAll.end(), which) != kAll.end()) {
    selected = {which};
  } else {
    throw DomainError("unknown certificate '" + which + "'");
  }
  std::vector<InequalityReport> reports;
  for (const std::string& w : selected) {
    std::vector<InequalityReport> part;
    if (w == "liyau-dho") part = certify_liyau(cfg, Family::dho);
    if (w == "liyau-dunkl") part = certify_liyau(cfg, Family::dunkl_heat);
    if (w == "harnack-dho") part = certify_harnack(cfg, Family::dho);
    if (w == "harnack-dunkl") part = certify_harnack(cfg, Family::dunkl_heat);
    if (w == "lemma41") part = certify_lemma41(cfg);
    if (w == "phi") part = certify_phi(cfg);
    if (w == "logconvex") part = certify_logconvex(cfg);
    for (auto& r : part) reports.push_back(std::move(r));
  }
  return pack("certify " + which, reports);
}

// ---------------------------------------------------------------------------

CommandResult cmd_kernel(const RunConfig& cfg) {
  const Family family = cfg.parsed_family();
  const Multiplicity m = cfg.multiplicity();
  const Point x = cfg.point_x();
  const Point y = cfg.point_y();
  std::vector<Form> forms;
  if (family == Family::gauss || family == Family::mehler) {
    forms = {Form::closed};
  } else if (m.is_zero()) {
    forms = {Form::bessel, Form::integral, Form::closed};
  } else {
    forms = {Form::bessel, Form::integral};
  }
  CommandResult res;
  res.report.command = "kernel";
  res.report.table.columns = {"form", "log_value", "value", "ratio_to_first"};
  double first = kNaN;
  for (Form f : forms) {
    const LogValue v = evaluate(make_spec(family, m, f), cfg.t, x, y);
    if (std::isnan(first)) first = v.log_abs;
    res.report.table.rows.push_back({to_string(f), v.log_abs, v.value(), std::exp(v.log_abs - first)});
  }
  return res;
}

CommandResult cmd_audit(const RunConfig& cfg) {
  const Family family = cfg.parsed_family();
  const Multiplicity m = cfg.multiplicity();
  const int d = m.dim();
  const Form form = family == Family::gauss || family == Family::mehler ? Form::closed : Form::integral;
  const KernelSpec spec = make_spec(family, m, form);
  CommandResult res;
  res.report.command = "audit";
  res.report.table.columns = {"check", "value", "tolerance", "passed"};
  auto row = [&](const std::string& name, double value, double tol, bool ok) {
    res.report.table.rows.push_back({name, value, tol, std::string(ok ? "true" : "false")});
    if (!ok) res.exit_code = kViolation;
  };
  auto at_most = [&](const std::string& name, double value, double tol) { row(name, value, tol, value <= tol); };

  Rng rng(cfg.seed + 8);
  std::vector<Point> xs{Point(d, 0.0)};
  for (int i = 0; i < 4; ++i) xs.push_back(rng.point(d, 2.0));
  const std::vector<double> ts = log_spaced(std::max(cfg.t_min, 0.05), std::min(cfg.t_max, 5.0), 4);

  const double c = measured_constant(spec);
  res.report.extra_meta["measured_constant"] = format_double(c);
  row("measured-constant", c, kNaN, std::isfinite(c) && c > 0.0);
  if (!spec.has_potential()) {
    const MassReport mass = mass_audit(spec, ts, xs);
    at_most("mass-variation", mass.max_variation, 1e-6);
  } else {
    double worst = 0.0;
    for (double t : {0.2, 1.0}) {
      for (const Point& x : xs) worst = std::max(worst, std::abs(eigen_decay_ratio(spec, t, x) / c - 1.0));
    }
    at_most("eigen-decay-variation", worst, 1e-6);
  }

  double ck = 0.0;
  for (auto [s, t] : {std::pair{0.3, 0.7}, std::pair{0.5, 0.5}}) {
    for (int i = 0; i < 3; ++i) {
      ck = std::max(ck, chapman_kolmogorov_residual(spec, s, t, rng.point(d, 1.5), rng.point(d, 1.5), c) / c);
    }
  }
  at_most("chapman-kolmogorov-relative", ck, 1e-6);

  double heat = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double t = rng.uniform(0.2, 2.0);
    heat = std::max(heat, heat_equation_residual(spec, t, rng.point(d, 2.0, 1e-2), rng.point(d, 2.0, 1e-2)));
  }
  at_most("heat-equation-residual", heat, 1e-5);

  if ((family == Family::dho || family == Family::dunkl_heat) && !m.is_zero()) {
    const KernelSpec sb = make_spec(family, m, Form::bessel);
    const KernelSpec si = make_spec(family, m, Form::integral);
    double first = kNaN, spread = 0.0;
    for (double t : {0.1, 1.0, 3.0}) {
      for (int i = 0; i < 5; ++i) {
        const Point x = rng.point(d, 3.0), y = rng.point(d, 3.0);
        const double lr = evaluate(sb, t, x, y).log_abs - evaluate(si, t, x, y).log_abs;
        if (std::isnan(first)) first = lr;
        spread = std::max(spread, std::abs(std::expm1(lr - first)));
      }
    }
    res.report.extra_meta["bessel_over_integral"] = format_double(std::exp(first));
    at_most("form-ratio-variation", spread, 1e-10);
  }

  const MehlerExponentAudit mehler = mehler_exponent_audit(d, 0.7, rng.point(d, 1.5), rng.point(d, 1.5));
  row("mehler-selected-power", mehler.selected_power, 0.0, mehler.selected_power == 0.5);
  return res;
}

CommandResult cmd_sweep(const RunConfig& cfg) {
  const Family family = cfg.parsed_family();
  if (cfg.kappa_values.empty()) {
    const KernelSpec spec = config_spec(cfg, family);
    const InequalityReport r = liyau_sweep(spec, cfg.grid(), tol_or(cfg, 1e-8));
    CommandResult res;
    res.report.command = "sweep";
    res.report.table.columns = {"t"};
    for (int j = 1; j <= cfg.d; ++j) res.report.table.columns.push_back("x" + std::to_string(j));
    for (int j = 1; j <= cfg.d; ++j) res.report.table.columns.push_back("y" + std::to_string(j));
    for (const char* c : {"lhs", "bound", "margin"}) res.report.table.columns.push_back(c);
    for (const InequalityRecord& rec : r.records) {
      std::vector<Cell> row{rec.t};
      for (double v : rec.x) row.push_back(v);
      for (double v : rec.y) row.push_back(v);
      row.push_back(rec.lhs);
      row.push_back(rec.bound);
      row.push_back(rec.margin);
      res.report.table.rows.push_back(std::move(row));
    }
    res.report.summaries.push_back(summarize(r));
    if (!r.passed()) res.exit_code = kViolation;
    return res;
  }

  const Point x = cfg.point_x();
  const Point y = cfg.point_y();
  InequalityReport r = zero_report("sweep-kappa-" + to_string(family), tol_or(cfg, 1e-8));
  for (double k : cfg.kappa_values) {
    const KernelSpec spec = make_spec(family, Multiplicity::uniform(cfg.d, k));
    InequalityRecord rec;
    rec.param = k;
    rec.t = cfg.t;
    rec.x = x;
    rec.y = y;
    rec.lhs = liyau_lhs(spec, cfg.t, x, y);
    rec.bound = liyau_bound(family, spec.mult, cfg.t).sharp;
    r.records.push_back(std::move(rec));
  }
  r.finalize();
  CommandResult res;
  res.report.command = "sweep";
  res.report.table.columns = {"kappa", "t"};
  for (int j = 1; j <= cfg.d; ++j) res.report.table.columns.push_back("x" + std::to_string(j));
  for (int j = 1; j <= cfg.d; ++j) res.report.table.columns.push_back("y" + std::to_string(j));
  for (const char* c : {"lhs", "bound", "margin"}) res.report.table.columns.push_back(c);
  for (const InequalityRecord& rec : r.records) {
    std::vector<Cell> row{rec.param, rec.t};
    for (double v : rec.x) row.push_back(v);
    for (double v : rec.y) row.push_back(v);
    row.push_back(rec.lhs);
    row.push_back(rec.bound);
    row.push_back(rec.margin);
    res.report.table.rows.push_back(std::move(row));
  }
  res.report.summaries.push_back(summarize(r));
  if (!r.passed()) res.exit_code = kViolation;
  return res;
}

// ---------------------------------------------------------------------------

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void print_worst(std::ostream& log, const Report& report) {
  // the first row of each failing certificate with the smallest margin
  const auto& cols = report.table.columns;
  const auto margin_col = std::find(cols.begin(), cols.end(), "margin") - cols.begin();
  for (const Summary& s : report.summaries) {
    if (s.violations == 0) continue;
    const std::vector<Cell>* worst = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& row : report.table.rows) {
      if (cols.front() == "certificate" && std::get<std::string>(row.front()) != s.name) continue;
      const double m = std::get<double>(row[margin_col]);
      if (worst == nullptr || m < best || std::isnan(m)) {
        worst = &row;
        best = m;
        if (std::isnan(m)) break;
      }
    }
    if (worst == nullptr) continue;
    log << "  worst record of " << s.name << ":";
    for (std::size_t i = 0; i < cols.size(); ++i) log << ' ' << cols[i] << '=' << cell_text((*worst)[i]);
    log << '\n';
  }
}

}  // namespace

int run(const std::string& command, const std::string& which, const RunConfig& cfg, std::ostream& log) {
  CommandResult res;
  try {
    parallel_jobs() = cfg.jobs;
    if (command == "kernel") {
      res = cmd_kernel(cfg);
    } else if (command == "certify") {
      res = cmd_certify(cfg, which);
    } else if (command == "audit") {
      res = cmd_audit(cfg);
    } else if (command == "sweep") {
      res = cmd_sweep(cfg);
    } else {
      throw DomainError("unknown command '" + command + "'");
    }
  } catch (const DomainError& e) {
    log << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const AccuracyError& e) {
    log << "accuracy error: " << e.what() << " (best estimate " << format_double(e.best_estimate()) << ")\n";
    return kAccuracy;
  } catch (const EvaluationError& e) {
    log << "evaluation error: " << e.what() << '\n';
    return kAccuracy;
  }

  const std::string stamp = utc_timestamp();
  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) {
      log << "error: cannot write '" << cfg.out << "'\n";
      return kUsage;
    }
  }
  std::ostream& out = cfg.out.empty() ? std::cout : file;
  if (cfg.format == Format::csv) {
    write_csv(out, cfg, res.report, stamp);
  } else {
    write_json(out, cfg, res.report, stamp);
  }
  out.flush();

  for (const Summary& s : res.report.summaries) {
    log << (s.violations == 0 ? "PASS " : "FAIL ") << s.name << ' ' << summary_text(s) << '\n';
  }
  if (res.report.summaries.empty()) {
    for (const auto& row : res.report.table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        log << (i ? " " : "") << res.report.table.columns[i] << '=' << cell_text(row[i]);
      }
      log << '\n';
    }
  }
  if (res.exit_code == kViolation) print_worst(log, res.report);
  return res.exit_code;
}

}  // namespace dunkl::cli
