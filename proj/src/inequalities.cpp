#include "dunkl/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "dunkl/errors.hpp"
#include "dunkl/numerics.hpp"

namespace dunkl {

Point Rng::point(int d, double box, double tube) {
  Point p(d);
  for (int j = 0; j < d; ++j) {
    do {
      p[j] = uniform(-box, box);
    } while (std::abs(p[j]) < tube);
  }
  return p;
}

GridSpec random_grid(int d, std::vector<double> t_values, int pairs, std::uint64_t seed, double box, double tube) {
  if (t_values.empty() || pairs < 1) throw DomainError("grid must contain at least one time and one point pair");
  for (double t : t_values) {
    if (!(t > 0.0)) throw DomainError("grid times must be positive");
  }
  GridSpec g;
  g.t_values = std::move(t_values);
  g.seed = seed;
  Rng rng(seed);
  for (int i = 0; i < pairs; ++i) {
    g.x_points.push_back(rng.point(d, box, tube));
    g.y_points.push_back(rng.point(d, box, tube));
  }
  return g;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw DomainError("log_spaced needs 0 < lo <= hi and n >= 1");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  }
  return out;
}

void InequalityReport::finalize() {
  min_margin = std::numeric_limits<double>::infinity();
  argmin = 0;
  violation_count = 0;
  bool seen_nan = false;
  for (std::size_t i = 0; i < records.size(); ++i) {
    InequalityRecord& r = records[i];
    r.margin = r.bound - r.lhs;
    if (!(r.margin >= -tolerance)) ++violation_count;  // NaN counts as a violation
    if (seen_nan) continue;
    if (std::isnan(r.margin)) {
      seen_nan = true;
      min_margin = r.margin;
      argmin = i;
    } else if (r.margin < min_margin) {
      min_margin = r.margin;
      argmin = i;
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

bool classical(Family f) { return f == Family::gauss || f == Family::mehler; }

Family base_family(Family f) {
  return (f == Family::dho || f == Family::mehler) ? Family::dho : Family::dunkl_heat;
}

Multiplicity operator_mult(const KernelSpec& spec) {
  return classical(spec.family) ? Multiplicity::uniform(spec.dim(), 0.0) : spec.mult;
}

double phi_over_a2_from(double kappa, const TiltedMoments& tm) {
  const double a = tm.a;
  if (std::abs(a) < 1e-2) {
    const JacobiCumulants c = jacobi_cumulants(kappa);
    const double* k = c.k;
    return 2.0 * k[2] + a * (2.0 / 3.0 * k[3] + a * (k[4] / 3.0 + a * (k[5] / 15.0 + a * k[6] / 60.0)));
  }
  return (2.0 * a * tm.mean + tm.log_reflection_ratio()) / (a * a);
}

}  // namespace

FdProtocol log_kernel_fd() { return FdProtocol{1e-3, 3, 1e-5}; }

double liyau_lhs_axis(Family family, double kappa, double t, double u, double v) {
  const AxisScales sc = axis_scales(family, t);
  if (classical(family) || kappa < kKappaZero) return sc.c2;
  const TiltedMoments tm = tilted_moments(kappa, u * v / sc.s);
  const double r = v / sc.s;
  return (1.0 + 2.0 * kappa) * sc.c2 - r * r * (tm.variance + kappa * phi_over_a2_from(kappa, tm));
}

double axis_second_log_derivative(Family family, double kappa, double t, double u, double v) {
  return axis_log_jet(family, kappa, t, u, v).d2;
}

double liyau_lhs(const KernelSpec& spec, double t, const Point& x, const Point& y, LhsPath path,
                 const FdProtocol& fd) {
  if (static_cast<int>(x.size()) != spec.dim() || static_cast<int>(y.size()) != spec.dim()) {
    throw DomainError("point dimension does not match the kernel");
  }
  if (path == LhsPath::fd_oracle) {
    return -dunkl_laplacian(log_kernel_slice(spec, t, y), x, operator_mult(spec), fd);
  }
  double sum = 0.0;
  for (int j = 0; j < spec.dim(); ++j) {
    const double kappa = classical(spec.family) ? 0.0 : spec.mult[j];
    sum += liyau_lhs_axis(spec.family, kappa, t, x[j], y[j]);
  }
  return sum;
}

Bound liyau_bound(Family family, const Multiplicity& mult, double t) {
  if (!(t > 0.0)) throw DomainError("time must be positive");
  const double dim = mult.homogeneous_dim();
  if (base_family(family) == Family::dho) {
    return {dim / std::tanh(2.0 * t), dim * (1.0 + 1.0 / (2.0 * t))};
  }
  return {dim / (2.0 * t), dim / (2.0 * t)};
}

InequalityReport liyau_sweep(const KernelSpec& spec, const GridSpec& grid, double tolerance, LhsPath path,
                             Execution exec) {
  if (grid.size() == 0) throw DomainError("empty grid");
  InequalityReport report;
  report.name = "liyau-" + to_string(spec.family);
  report.tolerance = tolerance;
  report.records.resize(grid.size());
  const std::size_t pairs = grid.x_points.size();
  for_each_index(
      grid.size(),
      [&](std::size_t i) {
        InequalityRecord& r = report.records[i];
        r.t = grid.t_values[i / pairs];
        r.x = grid.x_points[i % pairs];
        r.y = grid.y_points[i % pairs];
        r.lhs = liyau_lhs(spec, r.t, r.x, r.y, path);
        r.bound = liyau_bound(spec.family, spec.mult, r.t).sharp;
      },
      exec);
  report.finalize();
  return report;
}

// ---------------------------------------------------------------------------

double phi(double kappa, double a) {
  const TiltedMoments tm = tilted_moments(kappa, a);
  return 2.0 * a * tm.mean + tm.log_reflection_ratio();
}

double phi_over_a2(double kappa, double a) { return phi_over_a2_from(kappa, tilted_moments(kappa, a)); }

double psi_normalized(double kappa, double a) {
  const TiltedMoments tm = tilted_moments(kappa, a);
  return tm.mean - tm.reflected_mean;
}

// ---------------------------------------------------------------------------

double liyau_beta(Family family, const Multiplicity& mult, double t) { return liyau_bound(family, mult, t).sharp; }

SolutionJet kernel_jet(const KernelSpec& spec, double t, const Point& x, const Point& y) {
  const int d = spec.dim();
  SolutionJet jet;
  jet.value = 1.0;
  jet.grad.resize(d);
  jet.second.resize(d);
  jet.reflected.resize(d);
  for (int j = 0; j < d; ++j) {
    const double kappa = classical(spec.family) ? 0.0 : spec.mult[j];
    const AxisLogJet a = axis_log_jet(spec.family, kappa, t, x[j], y[j]);
    jet.grad[j] = a.d1;
    jet.second[j] = a.d2 + a.d1 * a.d1;
    jet.reflected[j] = std::exp(a.reflection);
    jet.dt += a.dt;
  }
  return jet;
}

double gradient_form_lhs(const Solution& u, double t, const Point& x) {
  const SolutionJet j = u.jet(t, x);
  return j.grad_norm2_over_u2() - j.dt / j.value;
}

namespace {

template <class Fill>
InequalityReport point_report(const std::string& name, const GridSpec& grid, double tolerance, Execution exec,
                              Fill&& fill) {
  if (grid.size() == 0) throw DomainError("empty grid");
  InequalityReport report;
  report.name = name;
  report.tolerance = tolerance;
  report.records.resize(grid.size());
  const std::size_t pairs = grid.x_points.size();
  for_each_index(
      grid.size(),
      [&](std::size_t i) {
        InequalityRecord& r = report.records[i];
        r.t = grid.t_values[i / pairs];
        r.x = grid.x_points[i % pairs];
        fill(r);
      },
      exec);
  report.finalize();
  return report;
}

}  // namespace

InequalityReport gradient_form_check(const Solution& u, const GridSpec& grid, double tolerance, Execution exec) {
  const KernelSpec& spec = u.spec();
  return point_report("gradient-form-" + to_string(spec.family), grid, tolerance, exec, [&](InequalityRecord& r) {
    const SolutionJet j = u.jet(r.t, r.x);
    r.lhs = j.grad_norm2_over_u2() - j.dt / j.value;
    r.bound = liyau_beta(spec.family, spec.mult, r.t) + u.potential(r.x);
  });
}

InequalityReport solution_liyau_check(const Solution& u, const GridSpec& grid, double tolerance, Execution exec) {
  const KernelSpec& spec = u.spec();
  return point_report("solution-liyau-" + to_string(spec.family), grid, tolerance, exec, [&](InequalityRecord& r) {
    const SolutionJet j = u.jet(r.t, r.x);
    r.lhs = j.neg_dunkl_laplacian_log(r.x, operator_mult(spec));
    r.bound = liyau_beta(spec.family, spec.mult, r.t);
  });
}

InequalityReport pi_log_check(const Solution& u, const GridSpec& grid, double tolerance, Execution exec) {
  const KernelSpec& spec = u.spec();
  return point_report("pi-log-" + to_string(spec.family), grid, tolerance, exec, [&](InequalityRecord& r) {
    const SolutionJet j = u.jet(r.t, r.x);
    r.lhs = j.pi_log(r.x, operator_mult(spec));
    r.bound = 0.0;
  });
}

// ---------------------------------------------------------------------------

double varsigma(const Point& x, const Point& y) {
  if (x.size() != y.size()) throw DomainError("point dimensions differ");
  double xx = 0.0, yy = 0.0, xy = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    xx += x[j] * x[j];
    yy += y[j] * y[j];
    xy += x[j] * y[j];
  }
  return (xx + yy + xy) / 3.0;
}

namespace {

double dist2(const Point& x, const Point& y) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += (x[j] - y[j]) * (x[j] - y[j]);
  return s;
}

// log sinh(z) for z > 0 without overflow
double log_sinh(double z) { return z + std::log1p(-std::exp(-2.0 * z)) - std::log(2.0); }

}  // namespace

HarnackRhs harnack_rhs(Family family, const Multiplicity& mult, double s, double t, const Point& x, const Point& y) {
  if (!(s > 0.0) || !(t > s)) throw DomainError("Harnack times need 0 < s < t");
  if (static_cast<int>(x.size()) != mult.dim() || static_cast<int>(y.size()) != mult.dim()) {
    throw DomainError("point dimension does not match the multiplicity");
  }
  const double half_dim = 0.5 * mult.homogeneous_dim();
  const double spatial = dist2(x, y) / (4.0 * (t - s));
  const double power = half_dim * std::log(t / s);
  if (base_family(family) == Family::dunkl_heat) return {power + spatial, power + spatial};
  const double sig = varsigma(x, y);
  return {half_dim * (log_sinh(2.0 * t) - log_sinh(2.0 * s)) + spatial + (t - s) * sig,
          power + spatial + (t - s) * (2.0 * half_dim + sig)};
}

double beta_path_exponent(const std::function<double(double, const Point&)>& beta, double s, double t,
                          const Point& x, const Point& y, double tol) {
  if (!(s > 0.0) || !(t > s)) throw DomainError("Harnack times need 0 < s < t");
  const auto gl = cached_jacobi_rule(0.0, 0.0, 16);
  const std::size_t d = x.size();
  auto composite = [&](int panels) {
    double sum = 0.0;
    Point z(d);
    for (int p = 0; p < panels; ++p) {
      const double lo = static_cast<double>(p) / panels;
      const double half = 0.5 / panels;
      for (int i = 0; i < gl->order(); ++i) {
        const double tau = lo + half * (1.0 + gl->nodes[i]);
        for (std::size_t j = 0; j < d; ++j) z[j] = y[j] + tau * (x[j] - y[j]);
        sum += half * gl->weights[i] * beta(t + tau * (s - t), z);
      }
    }
    return sum;
  };
  double prev = composite(1);
  for (int panels = 2; panels <= 4096; panels *= 2) {
    const double next = composite(panels);
    if (std::abs(next - prev) <= tol * std::max(1.0, std::abs(next))) {
      return dist2(x, y) / (4.0 * (t - s)) + (t - s) * next;
    }
    prev = next;
  }
  throw AccuracyError("beta path integral did not converge", prev, 0.0);
}

std::function<double(double, const Point&)> gradient_beta(Family family, const Multiplicity& mult) {
  const double dim = mult.homogeneous_dim();
  if (base_family(family) == Family::dho) {
    return [dim](double t, const Point& x) {
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      return dim / std::tanh(2.0 * t) + r2;
    };
  }
  return [dim](double t, const Point&) { return dim / (2.0 * t); };
}

std::vector<HarnackTuple> random_harnack_tuples(int d, int count, double t_min, double t_max, std::uint64_t seed,
                                                double box) {
  if (!(t_min > 0.0) || !(t_max > t_min)) throw DomainError("tuple times need 0 < t_min < t_max");
  Rng rng(seed);
  std::vector<HarnackTuple> out;
  for (int i = 0; i < count; ++i) {
    double a = rng.uniform(t_min, t_max);
    double b = rng.uniform(t_min, t_max);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-3 * t_min) b = a + 1e-3 * t_min;
    out.push_back({a, b, rng.point(d, box), rng.point(d, box)});
  }
  return out;
}

LogSolution log_solution(const Solution& u) {
  return [u](double t, const Point& x) { return std::log(u.value(t, x)); };
}

LogSolution log_kernel_solution(const KernelSpec& spec, const Point& y) {
  return [spec, y](double t, const Point& x) { return evaluate(spec, t, x, y).log_abs; };
}

LogSolution memoize(LogSolution f) {
  struct Cache {
    std::mutex m;
    std::map<std::vector<double>, double> values;
  };
  auto cache = std::make_shared<Cache>();
  return [f = std::move(f), cache](double t, const Point& x) {
    std::vector<double> key{t};
    key.insert(key.end(), x.begin(), x.end());
    {
      std::lock_guard<std::mutex> lock(cache->m);
      auto it = cache->values.find(key);
      if (it != cache->values.end()) return it->second;
    }
    const double v = f(t, x);
    std::lock_guard<std::mutex> lock(cache->m);
    cache->values.emplace(std::move(key), v);
    return v;
  };
}

InequalityReport harnack_check(const LogSolution& log_u, Family family, const Multiplicity& mult,
                               const std::vector<HarnackTuple>& tuples, HarnackVariant variant, double tolerance,
                               Execution exec) {
  if (tuples.empty()) throw DomainError("no Harnack tuples");
  InequalityReport report;
  const char* tag = variant == HarnackVariant::sharp ? "sharp" : variant == HarnackVariant::weak ? "weak" : "beta";
  report.name = "harnack-" + to_string(base_family(family)) + "-" + tag;
  report.tolerance = std::log1p(tolerance);
  report.records.resize(tuples.size());
  const auto beta = gradient_beta(family, mult);
  for_each_index(
      tuples.size(),
      [&](std::size_t i) {
        const HarnackTuple& h = tuples[i];
        InequalityRecord& r = report.records[i];
        r.s = h.s;
        r.t = h.t;
        r.x = h.x;
        r.y = h.y;
        double exponent;
        if (variant == HarnackVariant::beta_path) {
          exponent = beta_path_exponent(beta, h.s, h.t, h.x, h.y);
        } else {
          const HarnackRhs rhs = harnack_rhs(family, mult, h.s, h.t, h.x, h.y);
          exponent = variant == HarnackVariant::sharp ? rhs.log_sharp : rhs.log_weak;
        }
        r.lhs = log_u(h.s, h.x);
        r.bound = log_u(h.t, h.y) + exponent;
      },
      exec);
  report.finalize();
  return report;
}

// ---------------------------------------------------------------------------

std::vector<Segment> random_segments(int d, int count, std::uint64_t seed, double box) {
  Rng rng(seed);
  std::vector<Segment> out;
  for (int i = 0; i < count; ++i) {
    Segment s;
    s.x1 = rng.point(d, box);
    s.x2 = rng.point(d, box);
    s.theta = rng.uniform(0.05, 0.95);
    out.push_back(std::move(s));
  }
  return out;
}

InequalityReport log_convexity_check(const LogSolution& log_u, const KernelSpec& spec, double t,
                                     const std::vector<Segment>& segments, double tolerance, Execution exec) {
  if (segments.empty()) throw DomainError("no segments");
  InequalityReport report;
  report.name = "logconvex-" + to_string(spec.family);
  report.tolerance = tolerance;
  report.records.resize(segments.size());
  const Point origin(spec.dim(), 0.0);
  auto log_ratio = [&](const Point& x) { return log_u(t, x) - evaluate(spec, t, x, origin).log_abs; };
  for_each_index(
      segments.size(),
      [&](std::size_t i) {
        const Segment& s = segments[i];
        Point mid(s.x1.size());
        for (std::size_t j = 0; j < mid.size(); ++j) mid[j] = s.theta * s.x1[j] + (1.0 - s.theta) * s.x2[j];
        InequalityRecord& r = report.records[i];
        r.t = t;
        r.x = s.x1;
        r.y = s.x2;
        r.lhs = log_ratio(mid);
        r.bound = s.theta * log_ratio(s.x1) + (1.0 - s.theta) * log_ratio(s.x2);
      },
      exec);
  report.finalize();
  return report;
}

// ---------------------------------------------------------------------------

ScalarField random_positive_field(int d, Rng& rng) {
  std::vector<double> c(d), b(d), a(d), m(d);
  for (int j = 0; j < d; ++j) {
    c[j] = rng.uniform(0.05, 0.3);
    b[j] = rng.uniform(-1.0, 1.0);
    a[j] = rng.uniform(0.05, 0.3);
    m[j] = rng.uniform(-1.0, 1.0);
  }
  const double floor = rng.uniform(0.05, 0.5);
  return ScalarField{[c, b, a, m, floor](const Point& x) {
                       double poly = 1.0, expo = 0.0;
                       for (std::size_t j = 0; j < x.size(); ++j) {
                         poly += c[j] * (x[j] - b[j]) * (x[j] - b[j]);
                         expo += a[j] * (x[j] - m[j]) * (x[j] - m[j]);
                       }
                       return poly * std::exp(-expo) + floor;
                     },
                     "polynomial times gaussian"};
}

InitialData random_mixture(int d, Rng& rng, int bumps) {
  if (d < 1 || bumps < 1) throw DomainError("mixture needs d >= 1 and at least one bump");
  InitialData data;
  for (int i = 0; i < bumps; ++i) {
    GaussianBump b;
    b.weight = rng.uniform(0.3, 1.5);
    b.center = rng.point(d, 2.0);
    b.width = rng.uniform(0.4, 1.2);
    data.bumps.push_back(std::move(b));
  }
  return data;
}

ScalarField random_radial_field(Rng& rng) {
  const double c = rng.uniform(0.05, 0.3);
  const double a = rng.uniform(0.05, 0.3);
  const double floor = rng.uniform(0.05, 0.5);
  return ScalarField{[c, a, floor](const Point& x) {
                       double r2 = 0.0;
                       for (double v : x) r2 += v * v;
                       return (1.0 + c * r2) * std::exp(-a * r2) + floor;
                     },
                     "radial"};
}

ChainRuleResult chain_rule_residual(const ScalarField& f, const Psi& psi, const Point& x, const Multiplicity& mult,
                                    const FdProtocol& fd) {
  const double fx = f(x);
  const double lhs = dunkl_laplacian(compose(psi, f), x, mult, fd);
  const double lap = dunkl_laplacian(f, x, mult, fd);
  double grad2 = 0.0;
  for (double g : gradient(f, x, fd)) grad2 += g * g;
  const double pi = pi_psi(f, psi, x, mult, fd);
  return {std::abs(lhs - psi.d1(fx) * lap - psi.d2(fx) * grad2 - pi), pi};
}

double invariant_chain_rule_residual(const ScalarField& f, const Psi& psi, const Point& x, const Multiplicity& mult,
                                     const FdProtocol& fd) {
  const double fx = f(x);
  const double lhs = dunkl_laplacian(compose(psi, f), x, mult, fd);
  const double lap = dunkl_laplacian(f, x, mult, fd);
  double grad2 = 0.0;
  for (double g : gradient(f, x, fd)) grad2 += g * g;
  return std::abs(lhs - psi.d1(fx) * lap - psi.d2(fx) * grad2);
}

}  // namespace dunkl
