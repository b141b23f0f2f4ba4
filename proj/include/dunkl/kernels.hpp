#pragma once

// Heat kernels with respect to the measure prod_j |y_j|^{2 kappa_j} dy.
//
// Every kernel factorizes over axes, and each axis factor has the shape
//
//     k(u, v) = C * exp(-c2 (u^2 + v^2) / 2) * M_0(u v / S)
//
// with (c2, S) = (coth 2t, sinh 2t) for the Dunkl harmonic oscillator and
// (1/(2t), 2t) for the Dunkl heat semigroup. Axes with kappa_j = 0 use the
// closed Gaussian / Mehler factor instead.

#include <string>
#include <vector>

#include "dunkl/core.hpp"
#include "dunkl/log_value.hpp"

namespace dunkl {

enum class Family { dunkl_heat, dho, gauss, mehler };
enum class Form { bessel, integral, closed };

std::string to_string(Family f);
std::string to_string(Form f);
Family parse_family(const std::string& s);
Form parse_form(const std::string& s);

/// Multiplicities below this are treated as exactly zero.
inline constexpr double kKappaZero = 1e-12;

struct KernelSpec {
  Family family = Family::dho;
  Form form = Form::integral;
  Multiplicity mult;
  /// Exponent p in the Mehler prefactor (2 pi sinh 2t)^{-p d}. Only read by
  /// the mehler family; 1/2 is the value that solves the heat equation.
  double mehler_power = 0.5;

  int dim() const { return mult.dim(); }
  /// True for families whose generator carries the -|x|^2 potential.
  bool has_potential() const { return family == Family::dho || family == Family::mehler; }
};

KernelSpec make_spec(Family family, Multiplicity mult, Form form = Form::integral);

LogValue dho_kernel_1d(double kappa, double t, double u, double v, Form form = Form::integral);
LogValue dho_kernel(const KernelSpec& spec, double t, const Point& x, const Point& y);

LogValue dunkl_heat_kernel_1d(double kappa, double t, double u, double v, Form form = Form::integral);
LogValue dunkl_heat_kernel(const KernelSpec& spec, double t, const Point& x, const Point& y);

LogValue gauss_kernel(double t, const Point& x, const Point& y);
LogValue mehler_kernel(double t, const Point& x, const Point& y, double power = 0.5);

/// Dispatch on spec.family.
LogValue evaluate(const KernelSpec& spec, double t, const Point& x, const Point& y);

/// log of the j-th axis factor of evaluate(spec, t, x, y).
double log_axis_factor(const KernelSpec& spec, int j, double t, double u, double v);

/// log(bessel form / integral form) for one axis: log Gamma(k+1/2) - log Gamma(k)
/// for the oscillator with k > 0, zero otherwise.
double form_log_offset(Family family, Form form, double kappa);

/// Per-axis scale pair (c2, S).
struct AxisScales {
  double c2;
  double s;
};
AxisScales axis_scales(Family family, double t);

/// Derivatives of one axis factor l(u) = log k(u, v) at fixed (t, v).
struct AxisLogJet {
  double log_value;   // l(u)
  double d1;          // dl/du
  double d2;          // d^2 l / du^2
  double reflection;  // l(-u) - l(u)
  double dt;          // dl/dt
  double a;           // tilt u v / S
  double mean;        // mean of s under g(s) e^{a s} ds (1 when kappa = 0)
  double variance;    // its variance (0 when kappa = 0)
};

/// Jet of the integral-form axis factor. Family gauss behaves like
/// dunkl_heat and mehler like dho, with kappa = 0.
AxisLogJet axis_log_jet(Family family, double kappa, double t, double u, double v);

/// x -> k_t(x, y) / k_t(x0, y), a well-scaled slice for finite differences.
ScalarField kernel_slice(const KernelSpec& spec, double t, const Point& y, const Point& x0);
/// x -> log k_t(x, y).
ScalarField log_kernel_slice(const KernelSpec& spec, double t, const Point& y);

/// |d_t k - (Delta_kappa - V) k| / k at (t, x, y), with d_t by a central
/// difference of step 1e-5 t and Delta_kappa by finite differences. V = |x|^2
/// for dho and mehler, 0 otherwise.
double heat_equation_residual(const KernelSpec& spec, double t, const Point& x, const Point& y,
                              const FdProtocol& fd = {});

struct MehlerExponentAudit {
  double residual_half;  // prefactor power d/2
  double residual_full;  // prefactor power d
  double selected_power; // per-dimension power with the smaller residual
};
MehlerExponentAudit mehler_exponent_audit(int d, double t, const Point& x, const Point& y,
                                          const FdProtocol& fd = {});

}  // namespace dunkl
