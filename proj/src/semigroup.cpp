#include "dunkl/semigroup.hpp"

#include <algorithm>
#include <cmath>

#include "dunkl/errors.hpp"
#include "dunkl/numerics.hpp"

namespace dunkl {

namespace {

AxisRule build_axis_rule(double exponent, double radius, int order) {
  const auto half = cached_jacobi_rule(0.0, exponent, order);
  const double scale = std::pow(0.5 * radius, exponent + 1.0);
  AxisRule r;
  r.radius = radius;
  r.exponent = exponent;
  r.order_per_half = order;
  r.nodes.resize(2 * order);
  r.weights.resize(2 * order);
  for (int i = 0; i < order; ++i) {
    const double y = 0.5 * radius * (1.0 + half->nodes[i]);
    const double w = scale * half->weights[i];
    r.nodes[order + i] = y;
    r.weights[order + i] = w;
    r.nodes[order - 1 - i] = -y;
    r.weights[order - 1 - i] = w;
  }
  return r;
}

std::vector<double> test_integrals(const AxisRule& r, double width) {
  std::vector<double> out;
  for (double frac : {0.0, 0.25, 0.5, 0.75}) {
    const double c = frac * r.radius;
    double sum = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const double z = (r.nodes[i] - c) / width;
      sum += r.weights[i] * std::exp(-0.5 * z * z);
    }
    out.push_back(sum);
  }
  return out;
}

AxisRule axis_rule(double kappa, double t, double max_center, const MuQuadratureOptions& opt) {
  if (!(t > 0.0)) throw DomainError("quadrature time must be positive");
  if (opt.order < 16) throw DomainError("quadrature order must be at least 16");
  const double spread = std::sqrt(2.0 * t);
  double radius = max_center + opt.safety * spread * std::max(1.0, std::sqrt(1.0 + 2.0 * kappa));
  if (opt.data_radius > 0.0) radius = std::min(radius, opt.data_radius);
  double width = spread;
  if (opt.min_width > 0.0) width = std::min(width, opt.min_width);
  const double exponent = kappa < kKappaZero ? 0.0 : 2.0 * kappa;

  int n = opt.order;
  AxisRule current = build_axis_rule(exponent, radius, n);
  std::vector<double> prev = test_integrals(current, width);
  while (2 * n <= opt.max_order) {
    AxisRule next = build_axis_rule(exponent, radius, 2 * n);
    const std::vector<double> vals = test_integrals(next, width);
    bool ok = true;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (std::abs(vals[i] - prev[i]) > opt.tolerance * std::abs(vals[i])) ok = false;
    }
    if (ok) return next;
    n *= 2;
    current = std::move(next);
    prev = vals;
  }
  throw AccuracyError("mu_quadrature: order budget exhausted", prev.front(), 0.0);
}

double max_abs_coord(const std::vector<Point>& centers, int j) {
  double m = 0.0;
  for (const Point& c : centers) m = std::max(m, std::abs(c.at(j)));
  return m;
}

void check_tensor_dim(int d) {
  if (d < 1 || d > 3) throw DomainError("tensor quadrature supports dimensions 1 to 3");
}

// Calls visit(y, w) over the tensor grid.
template <class Visit>
void for_each_node(const MuQuadrature& q, Visit&& visit) {
  const int d = static_cast<int>(q.axes.size());
  check_tensor_dim(d);
  std::vector<std::size_t> idx(d, 0);
  Point y(d);
  while (true) {
    double w = 1.0;
    for (int j = 0; j < d; ++j) {
      y[j] = q.axes[j].nodes[idx[j]];
      w *= q.axes[j].weights[idx[j]];
    }
    visit(y, w, idx);
    int j = d - 1;
    while (j >= 0 && ++idx[j] == q.axes[j].nodes.size()) {
      idx[j] = 0;
      --j;
    }
    if (j < 0) break;
  }
}

double kappa_of(const KernelSpec& spec, int j) {
  return (spec.family == Family::gauss || spec.family == Family::mehler) ? 0.0 : spec.mult[j];
}

}  // namespace

MuQuadrature mu_quadrature(const Multiplicity& mult, double t, const std::vector<Point>& centers,
                           const MuQuadratureOptions& opt) {
  MuQuadrature q;
  for (int j = 0; j < mult.dim(); ++j) {
    q.axes.push_back(axis_rule(mult[j], t, max_abs_coord(centers, j), opt));
  }
  return q;
}

double integrate(const MuQuadrature& q, const ScalarField& f) {
  double sum = 0.0;
  for_each_node(q, [&](const Point& y, double w, const std::vector<std::size_t>&) { sum += w * f(y); });
  return sum;
}

double apply_heat(const ScalarField& f, const KernelSpec& spec, double t, const Point& x, double support,
                  const MuQuadratureOptions& opt) {
  const int d = spec.dim();
  check_tensor_dim(d);
  if (static_cast<int>(x.size()) != d) throw DomainError("point dimension does not match the kernel");
  const MuQuadrature q = mu_quadrature(spec.mult, t, {x, Point(d, support)}, opt);
  std::vector<std::vector<double>> log_k(d);
  for (int j = 0; j < d; ++j) {
    for (double y : q.axes[j].nodes) log_k[j].push_back(log_axis_factor(spec, j, t, x[j], y));
  }
  double sum = 0.0;
  for_each_node(q, [&](const Point& y, double w, const std::vector<std::size_t>& idx) {
    double lk = 0.0;
    for (int j = 0; j < d; ++j) lk += log_k[j][idx[j]];
    sum += w * f(y) * std::exp(lk);
  });
  return sum;
}

// ---------------------------------------------------------------------------

double InitialData::operator()(const Point& y) const {
  double sum = 0.0;
  for (const GaussianBump& b : bumps) {
    double r2 = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double dz = y[j] - b.center[j];
      r2 += dz * dz;
    }
    sum += b.weight * std::exp(-0.5 * r2 / (b.width * b.width));
  }
  return sum;
}

ScalarField InitialData::field() const {
  InitialData copy = *this;
  return ScalarField{[copy](const Point& y) { return copy(y); }, "gaussian mixture"};
}

int InitialData::dim() const { return bumps.empty() ? 0 : static_cast<int>(bumps.front().center.size()); }

double InitialData::min_width() const {
  double w = INFINITY;
  for (const GaussianBump& b : bumps) w = std::min(w, b.width);
  return w;
}

InitialData ground_state(int d) { return InitialData{{GaussianBump{1.0, Point(d, 0.0), 1.0}}}; }

double SolutionJet::grad_norm2_over_u2() const {
  double s = 0.0;
  for (double g : grad) s += g * g;
  return s / (value * value);
}

double SolutionJet::neg_dunkl_laplacian_log(const Point& x, const Multiplicity& mult, double axis_threshold) const {
  const double log_u = std::log(value);
  double sum = 0.0;
  for (int j = 0; j < mult.dim(); ++j) {
    const double g1 = grad[j] / value;
    const double g2 = second[j] / value - g1 * g1;  // d_jj log u
    sum += g2;
    const double k = mult[j];
    if (k == 0.0) continue;
    if (std::abs(x[j]) < axis_threshold) {
      sum += 2.0 * k * g2;
    } else {
      sum += k / (x[j] * x[j]) * (2.0 * x[j] * g1 - log_u + std::log(reflected[j]));
    }
  }
  return -sum;
}

double SolutionJet::pi_log(const Point& x, const Multiplicity& mult, double axis_threshold) const {
  double sum = 0.0;
  for (int j = 0; j < mult.dim(); ++j) {
    const double k = mult[j];
    if (k == 0.0) continue;
    if (std::abs(x[j]) < axis_threshold) {
      const double g1 = grad[j] / value;
      sum -= 2.0 * k * g1 * g1;
    } else {
      const double r = reflected[j] / value;
      // pi_log(u(sigma_j x), u(x)) = log r - (r - 1)
      sum += k / (x[j] * x[j]) * (std::log(r) - (r - 1.0));
    }
  }
  return sum;
}

// ---------------------------------------------------------------------------

Solution::Solution(InitialData data, KernelSpec spec, double box, MuQuadratureOptions opt)
    : data_(std::move(data)), spec_(std::move(spec)), box_(box), opt_(opt) {
  if (data_.bumps.empty()) throw DomainError("initial data needs at least one bump");
  for (const GaussianBump& b : data_.bumps) {
    if (static_cast<int>(b.center.size()) != spec_.dim()) throw DomainError("bump dimension mismatch");
    if (!(b.weight > 0.0) || !(b.width > 0.0)) throw DomainError("bumps need positive weight and width");
  }
  opt_.min_width = data_.min_width();
  opt_.data_radius = 0.0;
  for (const GaussianBump& b : data_.bumps) {
    for (double c : b.center) opt_.data_radius = std::max(opt_.data_radius, std::abs(c) + opt_.safety * b.width);
  }
}

MuQuadrature Solution::rule(double t) const {
  std::vector<Point> centers;
  for (const GaussianBump& b : data_.bumps) centers.push_back(b.center);
  centers.push_back(Point(spec_.dim(), box_));
  Multiplicity m = spec_.mult;
  if (spec_.family == Family::gauss || spec_.family == Family::mehler) m = Multiplicity::uniform(spec_.dim(), 0.0);
  return mu_quadrature(m, t, centers, opt_);
}

double Solution::value_with(const MuQuadrature& q, double t, const Point& x) const {
  const int d = spec_.dim();
  if (static_cast<int>(x.size()) != d) throw DomainError("point dimension does not match the solution");
  const std::size_t nb = data_.bumps.size();
  std::vector<double> prod(nb, 1.0);
  for (int j = 0; j < d; ++j) {
    const AxisRule& ax = q.axes[j];
    std::vector<double> axis_sum(nb, 0.0);
    for (std::size_t i = 0; i < ax.nodes.size(); ++i) {
      const double y = ax.nodes[i];
      const double wk = ax.weights[i] * std::exp(log_axis_factor(spec_, j, t, x[j], y));
      for (std::size_t c = 0; c < nb; ++c) {
        const GaussianBump& b = data_.bumps[c];
        const double z = (y - b.center[j]) / b.width;
        axis_sum[c] += wk * std::exp(-0.5 * z * z);
      }
    }
    for (std::size_t c = 0; c < nb; ++c) prod[c] *= axis_sum[c];
  }
  double u = 0.0;
  for (std::size_t c = 0; c < nb; ++c) u += data_.bumps[c].weight * prod[c];
  return u;
}

double Solution::value(double t, const Point& x) const { return value_with(rule(t), t, x); }

double Solution::time_derivative(double t, const Point& x) const {
  const MuQuadrature q = rule(t);
  const double h = 1e-5 * t;
  return (value_with(q, t + h, x) - value_with(q, t - h, x)) / (2.0 * h);
}

SolutionJet Solution::jet(double t, const Point& x) const {
  const int d = spec_.dim();
  if (static_cast<int>(x.size()) != d) throw DomainError("point dimension does not match the solution");
  const MuQuadrature q = rule(t);
  const std::size_t nb = data_.bumps.size();
  // per bump and axis: U, U', U'', U(-x), d_t U
  struct Axis {
    double u = 0, u1 = 0, u2 = 0, ur = 0, ut = 0;
  };
  std::vector<std::vector<Axis>> acc(nb, std::vector<Axis>(d));
  for (int j = 0; j < d; ++j) {
    const AxisRule& ax = q.axes[j];
    const double kappa = kappa_of(spec_, j);
    const double offset = form_log_offset(spec_.family, spec_.form, kappa);
    for (std::size_t i = 0; i < ax.nodes.size(); ++i) {
      const double y = ax.nodes[i];
      const AxisLogJet jt = axis_log_jet(spec_.family, kappa, t, x[j], y);
      const double wk = ax.weights[i] * std::exp(jt.log_value + offset);
      const double wkr = ax.weights[i] * std::exp(jt.log_value + offset + jt.reflection);
      for (std::size_t c = 0; c < nb; ++c) {
        const GaussianBump& b = data_.bumps[c];
        const double z = (y - b.center[j]) / b.width;
        const double g = std::exp(-0.5 * z * z);
        Axis& a = acc[c][j];
        a.u += wk * g;
        a.u1 += wk * g * jt.d1;
        a.u2 += wk * g * (jt.d2 + jt.d1 * jt.d1);
        a.ur += wkr * g;
        a.ut += wk * g * jt.dt;
      }
    }
  }
  SolutionJet out;
  out.grad.assign(d, 0.0);
  out.second.assign(d, 0.0);
  out.reflected.assign(d, 0.0);
  for (std::size_t c = 0; c < nb; ++c) {
    double p = data_.bumps[c].weight;
    for (int j = 0; j < d; ++j) p *= acc[c][j].u;
    out.value += p;
    double dt_rel = 0.0;
    for (int j = 0; j < d; ++j) {
      const Axis& a = acc[c][j];
      out.grad[j] += p * a.u1 / a.u;
      out.second[j] += p * a.u2 / a.u;
      out.reflected[j] += p * a.ur / a.u;
      dt_rel += a.ut / a.u;
    }
    out.dt += p * dt_rel;
  }
  return out;
}

ScalarField Solution::slice(double t) const {
  const Solution self = *this;
  const MuQuadrature q = rule(t);
  return ScalarField{[self, q, t](const Point& x) { return self.value_with(q, t, x); }, "solution slice"};
}

ScalarField Solution::log_slice(double t) const {
  const Solution self = *this;
  const MuQuadrature q = rule(t);
  return ScalarField{[self, q, t](const Point& x) { return std::log(self.value_with(q, t, x)); },
                     "log solution slice"};
}

double Solution::potential(const Point& x) const {
  if (!spec_.has_potential()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

Solution make_solution(const InitialData& f0, const KernelSpec& spec, double box) {
  return Solution(f0, spec, box);
}

// ---------------------------------------------------------------------------

namespace {

Multiplicity axis_multiplicity(const KernelSpec& spec, int j) { return Multiplicity({kappa_of(spec, j)}); }

}  // namespace

double chapman_kolmogorov_ratio(const KernelSpec& spec, double s, double t, const Point& x, const Point& y) {
  if (!(s > 0.0) || !(t > 0.0)) throw DomainError("Chapman-Kolmogorov times must be positive");
  if (static_cast<int>(x.size()) != spec.dim() || static_cast<int>(y.size()) != spec.dim()) {
    throw DomainError("point dimension does not match the kernel");
  }
  double ratio = 1.0;
  for (int j = 0; j < spec.dim(); ++j) {
    const MuQuadrature q = mu_quadrature(axis_multiplicity(spec, j), std::min(s, t), {{x[j]}, {y[j]}});
    const double l_st = log_axis_factor(spec, j, s + t, x[j], y[j]);
    const AxisRule& ax = q.axes[0];
    double sum = 0.0;
    for (std::size_t i = 0; i < ax.nodes.size(); ++i) {
      const double z = ax.nodes[i];
      sum += ax.weights[i] * std::exp(log_axis_factor(spec, j, s, x[j], z) + log_axis_factor(spec, j, t, z, y[j]) - l_st);
    }
    ratio *= sum;
  }
  return ratio;
}

double chapman_kolmogorov_residual(const KernelSpec& spec, double s, double t, const Point& x, const Point& y,
                                   double c) {
  return std::abs(chapman_kolmogorov_ratio(spec, s, t, x, y) - c);
}

namespace {

double kernel_mass(const KernelSpec& spec, double t, const Point& x) {
  double mass = 1.0;
  for (int j = 0; j < spec.dim(); ++j) {
    const MuQuadrature q = mu_quadrature(axis_multiplicity(spec, j), t, {{x[j]}});
    const AxisRule& ax = q.axes[0];
    double sum = 0.0;
    for (std::size_t i = 0; i < ax.nodes.size(); ++i) {
      sum += ax.weights[i] * std::exp(log_axis_factor(spec, j, t, x[j], ax.nodes[i]));
    }
    mass *= sum;
  }
  return mass;
}

}  // namespace

MassReport mass_audit(const KernelSpec& spec, const std::vector<double>& t_list, const std::vector<Point>& x_list) {
  if (t_list.empty() || x_list.empty()) throw DomainError("mass audit needs a nonempty grid");
  MassReport report;
  for (double t : t_list) {
    for (const Point& x : x_list) {
      if (static_cast<int>(x.size()) != spec.dim()) throw DomainError("point dimension does not match the kernel");
      report.records.push_back({t, x, kernel_mass(spec, t, x)});
    }
  }
  report.constant = report.records.front().mass;
  for (const MassRecord& r : report.records) {
    report.max_variation = std::max(report.max_variation, std::abs(r.mass / report.constant - 1.0));
  }
  return report;
}

double eigen_decay_ratio(const KernelSpec& spec, double t, const Point& x) {
  if (static_cast<int>(x.size()) != spec.dim()) throw DomainError("point dimension does not match the kernel");
  double ratio = 1.0;
  for (int j = 0; j < spec.dim(); ++j) {
    const double kappa = kappa_of(spec, j);
    MuQuadratureOptions opt;
    opt.min_width = 1.0;
    const MuQuadrature q = mu_quadrature(axis_multiplicity(spec, j), t, {{x[j]}}, opt);
    const AxisRule& ax = q.axes[0];
    const double shift = 0.5 * x[j] * x[j] + (1.0 + 2.0 * kappa) * t;
    double sum = 0.0;
    for (std::size_t i = 0; i < ax.nodes.size(); ++i) {
      const double y = ax.nodes[i];
      sum += ax.weights[i] * std::exp(log_axis_factor(spec, j, t, x[j], y) - 0.5 * y * y + shift);
    }
    ratio *= sum;
  }
  return ratio;
}

double measured_constant(const KernelSpec& spec) {
  const Point origin(spec.dim(), 0.0);
  if (spec.has_potential()) return eigen_decay_ratio(spec, 1.0, origin);
  return kernel_mass(spec, 1.0, origin);
}

}  // namespace dunkl
