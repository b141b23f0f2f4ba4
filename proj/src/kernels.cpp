#include "dunkl/kernels.hpp"

#include <cmath>
#include <numbers>

#include "dunkl/errors.hpp"
#include "dunkl/numerics.hpp"

namespace dunkl {

std::string to_string(Family f) {
  switch (f) {
    case Family::dunkl_heat: return "dunkl_heat";
    case Family::dho: return "dho";
    case Family::gauss: return "gauss";
    case Family::mehler: return "mehler";
  }
  return "?";
}

std::string to_string(Form f) {
  switch (f) {
    case Form::bessel: return "bessel";
    case Form::integral: return "integral";
    case Form::closed: return "closed";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  if (s == "dunkl_heat" || s == "dunkl-heat" || s == "heat") return Family::dunkl_heat;
  if (s == "dho") return Family::dho;
  if (s == "gauss") return Family::gauss;
  if (s == "mehler") return Family::mehler;
  throw DomainError("unknown kernel family '" + s + "'");
}

Form parse_form(const std::string& s) {
  if (s == "bessel") return Form::bessel;
  if (s == "integral") return Form::integral;
  if (s == "closed") return Form::closed;
  throw DomainError("unknown kernel form '" + s + "'");
}

KernelSpec make_spec(Family family, Multiplicity mult, Form form) {
  KernelSpec spec;
  spec.family = family;
  spec.form = form;
  spec.mult = std::move(mult);
  if ((family == Family::gauss || family == Family::mehler) && !spec.mult.is_zero()) {
    throw DomainError(to_string(family) + " kernel requires zero multiplicity");
  }
  if (spec.mult.dim() < 1) throw DomainError("kernel dimension must be at least 1");
  return spec;
}

namespace {

constexpr double kLogPi = 1.1447298858494002;  // log(pi)
constexpr double kLog2 = std::numbers::ln2;

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time must be positive and finite");
}

void check_kappa(double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("multiplicity must be finite and nonnegative");
}

void check_points(const KernelSpec& spec, const Point& x, const Point& y) {
  if (static_cast<int>(x.size()) != spec.dim() || static_cast<int>(y.size()) != spec.dim()) {
    throw DomainError("point dimension does not match the kernel dimension");
  }
}

// log[ B_lambda(z) + z B_{lambda+1}(z) ] with B_nu(z) = z^{-nu} I_nu(z).
double log_bessel_pair(double lambda, double z) {
  const double az = std::abs(z);
  const double l1 = log_bessel_i_scaled(lambda, az);
  if (z == 0.0) return l1;
  const double l2 = std::log(az) + log_bessel_i_scaled(lambda + 1.0, az);
  if (z > 0.0) {
    return std::max(l1, l2) + std::log1p(std::exp(-std::abs(l1 - l2)));
  }
  // B_lambda(|z|) > |z| B_{lambda+1}(|z|) because the pair is a positive integral.
  return l1 + std::log1p(-std::exp(l2 - l1));
}

double log_mehler_1d(double t, double u, double v, double power) {
  const double s = std::sinh(2.0 * t);
  const double sum = u + v;
  const double diff = u - v;
  return -power * std::log(2.0 * std::numbers::pi * s) -
         (std::tanh(t) * sum * sum + diff * diff / std::tanh(t)) / 4.0;
}

double log_gauss_1d(double t, double u, double v) {
  const double diff = u - v;
  return -0.5 * std::log(4.0 * std::numbers::pi * t) - diff * diff / (4.0 * t);
}

// log c_kappa of the integral form, c^{-1} = 2^{kappa+1/2} sqrt(pi) Gamma(kappa+1/2).
double log_integral_constant(double kappa) {
  return -((kappa + 0.5) * kLog2 + 0.5 * kLogPi + log_gamma(kappa + 0.5));
}

double log_dho_1d(double kappa, double t, double u, double v, Form form) {
  check_time(t);
  check_kappa(kappa);
  if (kappa < kKappaZero) return log_mehler_1d(t, u, v, 0.5);
  const double s = std::sinh(2.0 * t);
  const double c2 = 1.0 / std::tanh(2.0 * t);
  const double gauss_part = -0.5 * c2 * (u * u + v * v);
  const double z = u * v / s;
  switch (form) {
    case Form::bessel:
      return -kLog2 - (kappa + 0.5) * std::log(s) + gauss_part + log_bessel_pair(kappa - 0.5, z);
    case Form::integral:
      return log_integral_constant(kappa) - (kappa + 0.5) * std::log(s) + gauss_part +
             tilted_moments(kappa, z).log_m0();
    case Form::closed:
      break;
  }
  throw DomainError("closed form exists only for zero multiplicity");
}

double log_heat_1d(double kappa, double t, double u, double v, Form form) {
  check_time(t);
  check_kappa(kappa);
  if (kappa < kKappaZero) return log_gauss_1d(t, u, v);
  const double gauss_part = -(u * u + v * v) / (4.0 * t);
  const double a = u * v / (2.0 * t);
  const double log_prefactor = -(kappa + 0.5) * std::log(2.0 * t);
  switch (form) {
    case Form::bessel:
      return (kappa - 0.5) * kLog2 + log_prefactor + gauss_part + log_bessel_pair(kappa - 0.5, a);
    case Form::integral:
      // 1/Gamma(kappa+1/2) from the kernel, Gamma(kappa+1/2)/(sqrt(pi) Gamma(kappa)) from E_kappa
      return -0.5 * kLogPi - log_gamma(kappa) + log_prefactor + gauss_part + tilted_moments(kappa, a).log_m0();
    case Form::closed:
      break;
  }
  throw DomainError("closed form exists only for zero multiplicity");
}

}  // namespace

LogValue dho_kernel_1d(double kappa, double t, double u, double v, Form form) {
  return LogValue::from_log(log_dho_1d(kappa, t, u, v, form));
}

LogValue dunkl_heat_kernel_1d(double kappa, double t, double u, double v, Form form) {
  return LogValue::from_log(log_heat_1d(kappa, t, u, v, form));
}

LogValue dho_kernel(const KernelSpec& spec, double t, const Point& x, const Point& y) {
  check_points(spec, x, y);
  double sum = 0.0;
  for (int j = 0; j < spec.dim(); ++j) sum += log_dho_1d(spec.mult[j], t, x[j], y[j], spec.form);
  return LogValue::from_log(sum);
}

LogValue dunkl_heat_kernel(const KernelSpec& spec, double t, const Point& x, const Point& y) {
  check_points(spec, x, y);
  double sum = 0.0;
  for (int j = 0; j < spec.dim(); ++j) sum += log_heat_1d(spec.mult[j], t, x[j], y[j], spec.form);
  return LogValue::from_log(sum);
}

LogValue gauss_kernel(double t, const Point& x, const Point& y) {
  check_time(t);
  if (x.size() != y.size()) throw DomainError("point dimensions differ");
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) sum += log_gauss_1d(t, x[j], y[j]);
  return LogValue::from_log(sum);
}

LogValue mehler_kernel(double t, const Point& x, const Point& y, double power) {
  check_time(t);
  if (x.size() != y.size()) throw DomainError("point dimensions differ");
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) sum += log_mehler_1d(t, x[j], y[j], power);
  return LogValue::from_log(sum);
}

LogValue evaluate(const KernelSpec& spec, double t, const Point& x, const Point& y) {
  check_points(spec, x, y);
  switch (spec.family) {
    case Family::dho: return dho_kernel(spec, t, x, y);
    case Family::dunkl_heat: return dunkl_heat_kernel(spec, t, x, y);
    case Family::gauss: return gauss_kernel(t, x, y);
    case Family::mehler: return mehler_kernel(t, x, y, spec.mehler_power);
  }
  throw DomainError("unknown kernel family");
}

double log_axis_factor(const KernelSpec& spec, int j, double t, double u, double v) {
  if (j < 0 || j >= spec.dim()) throw DomainError("axis index out of range");
  switch (spec.family) {
    case Family::dho: return log_dho_1d(spec.mult[j], t, u, v, spec.form);
    case Family::dunkl_heat: return log_heat_1d(spec.mult[j], t, u, v, spec.form);
    case Family::gauss: check_time(t); return log_gauss_1d(t, u, v);
    case Family::mehler: check_time(t); return log_mehler_1d(t, u, v, spec.mehler_power);
  }
  throw DomainError("unknown kernel family");
}

double form_log_offset(Family family, Form form, double kappa) {
  if (family == Family::dho && form == Form::bessel && kappa >= kKappaZero) {
    return log_gamma(kappa + 0.5) - log_gamma(kappa);
  }
  return 0.0;
}

AxisScales axis_scales(Family family, double t) {
  check_time(t);
  if (family == Family::dho || family == Family::mehler) {
    return {1.0 / std::tanh(2.0 * t), std::sinh(2.0 * t)};
  }
  return {1.0 / (2.0 * t), 2.0 * t};
}

AxisLogJet axis_log_jet(Family family, double kappa, double t, double u, double v) {
  check_kappa(kappa);
  const bool oscillator = family == Family::dho || family == Family::mehler;
  const bool zero = kappa < kKappaZero || family == Family::gauss || family == Family::mehler;
  const AxisScales sc = axis_scales(family, t);
  AxisLogJet jet{};
  jet.a = u * v / sc.s;
  if (zero) {
    jet.mean = 1.0;
    jet.variance = 0.0;
    jet.reflection = -2.0 * jet.a;
    jet.log_value = oscillator ? log_mehler_1d(t, u, v, 0.5) : log_gauss_1d(t, u, v);
  } else {
    const TiltedMoments tm = tilted_moments(kappa, jet.a);
    jet.mean = tm.mean;
    jet.variance = tm.variance;
    jet.reflection = tm.log_reflection_ratio();
    if (oscillator) {
      jet.log_value = log_integral_constant(kappa) - (kappa + 0.5) * std::log(sc.s) -
                      0.5 * sc.c2 * (u * u + v * v) + tm.log_m0();
    } else {
      jet.log_value = -0.5 * kLogPi - log_gamma(kappa) - (kappa + 0.5) * std::log(2.0 * t) -
                      (u * u + v * v) / (4.0 * t) + tm.log_m0();
    }
  }
  const double k = zero ? 0.0 : kappa;
  const double r = v / sc.s;
  jet.d1 = -sc.c2 * u + r * jet.mean;
  jet.d2 = -sc.c2 + r * r * jet.variance;
  const double uv2 = 0.5 * (u * u + v * v);
  if (oscillator) {
    // d/dt of log S^{-(k+1/2)}, of -c2 (u^2+v^2)/2 and of log M_0(u v / S)
    jet.dt = -(2.0 * k + 1.0) * sc.c2 + 2.0 * uv2 / (sc.s * sc.s) - 2.0 * jet.a * sc.c2 * jet.mean;
  } else {
    jet.dt = -(k + 0.5) / t + uv2 / (2.0 * t * t) - jet.a / t * jet.mean;
  }
  return jet;
}

ScalarField kernel_slice(const KernelSpec& spec, double t, const Point& y, const Point& x0) {
  const double l0 = evaluate(spec, t, x0, y).log_abs;
  return ScalarField{[spec, t, y, l0](const Point& x) { return std::exp(evaluate(spec, t, x, y).log_abs - l0); },
                     "kernel slice"};
}

ScalarField log_kernel_slice(const KernelSpec& spec, double t, const Point& y) {
  return ScalarField{[spec, t, y](const Point& x) { return evaluate(spec, t, x, y).log_abs; }, "log kernel slice"};
}

namespace {

Multiplicity operator_multiplicity(const KernelSpec& spec) {
  if (spec.family == Family::gauss || spec.family == Family::mehler) {
    return Multiplicity::uniform(spec.dim(), 0.0);
  }
  return spec.mult;
}

}  // namespace

double heat_equation_residual(const KernelSpec& spec, double t, const Point& x, const Point& y,
                              const FdProtocol& fd) {
  check_time(t);
  const double h = 1e-5 * t;
  const double l0 = evaluate(spec, t, x, y).log_abs;
  const double lp = evaluate(spec, t + h, x, y).log_abs;
  const double lm = evaluate(spec, t - h, x, y).log_abs;
  const double dt = (std::exp(lp - l0) - std::exp(lm - l0)) / (2.0 * h);
  const double lap = dunkl_laplacian(kernel_slice(spec, t, y, x), x, operator_multiplicity(spec), fd);
  double potential = 0.0;
  if (spec.has_potential()) {
    for (double xi : x) potential += xi * xi;
  }
  return std::abs(dt - (lap - potential));
}

MehlerExponentAudit mehler_exponent_audit(int d, double t, const Point& x, const Point& y,
                                          const FdProtocol& fd) {
  KernelSpec spec = make_spec(Family::mehler, Multiplicity::uniform(d, 0.0), Form::closed);
  spec.mehler_power = 0.5;
  MehlerExponentAudit out{};
  out.residual_half = heat_equation_residual(spec, t, x, y, fd);
  spec.mehler_power = 1.0;
  out.residual_full = heat_equation_residual(spec, t, x, y, fd);
  out.selected_power = out.residual_half <= out.residual_full ? 0.5 : 1.0;
  return out;
}

}  // namespace dunkl
