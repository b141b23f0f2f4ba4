#pragma once

// Special functions and quadrature primitives.
//
// The recurring integral in this library is the tilted Jacobi moment
//
//     M_m(a) = \int_{-1}^{1} s^m (1-s)^{k-1} (1+s)^{k} e^{a s} ds ,   m = 0, 1, 2,
//
// which carries the whole x-dependence of the Dunkl kernels on one axis.

#include <functional>
#include <memory>
#include <vector>

namespace dunkl {

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// z^{-lambda} I_lambda(z) by its power series, or the large-argument
/// expansion when |z| is big; lambda >= -1/2.
double bessel_i_scaled(double lambda, double z);

/// log(z^{-lambda} I_lambda(z)); finite for arguments where the linear value
/// would overflow.
double log_bessel_i_scaled(double lambda, double z);

/// Gauss rule for the Jacobi weight (1-s)^alpha (1+s)^beta on (-1, 1).
struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing, inside (-1, 1)
  std::vector<double> weights;  // all positive
  double alpha = 0.0;
  double beta = 0.0;

  int order() const { return static_cast<int>(nodes.size()); }
  /// kappa of the (kappa - 1, kappa) family; meaningful only for rules from
  /// gauss_jacobi_rule(kappa, n).
  double kappa() const { return beta; }
};

/// Rule for (1-s)^{kappa-1} (1+s)^{kappa}; exact for polynomials of degree
/// <= 2*order - 1. kappa > 0.
QuadratureRule gauss_jacobi_rule(double kappa, int order);

/// General Jacobi weight; alpha, beta > -1.
QuadratureRule gauss_jacobi_rule(double alpha, double beta, int order);

QuadratureRule gauss_legendre_rule(int order);

/// Shared immutable rule, built once per (alpha, beta, order).
std::shared_ptr<const QuadratureRule> cached_jacobi_rule(double alpha, double beta, int order);

/// Moments of g(s) e^{a s} with g(s) = (1-s)^{k-1}(1+s)^k, all scaled by
/// e^{-|a|} so that ratios stay finite for |a| in the hundreds.
struct TiltedMoments {
  double a = 0.0;
  double m0 = 0.0;  // e^{-|a|} M_0(a)
  double m1 = 0.0;  // e^{-|a|} M_1(a)
  double m2 = 0.0;  // e^{-|a|} M_2(a)
  double mean = 0.0;      // M_1(a) / M_0(a)
  double variance = 0.0;  // M_2/M_0 - mean^2, accumulated around the mean
  double reflected_m0 = 0.0;    // e^{-|a|} M_0(-a)
  double reflected_mean = 0.0;  // M_1(-a) / M_0(-a)
  int order = 0;                // Gauss-Jacobi order that met the tolerance

  double log_scale() const;
  double log_m0() const;                // log M_0(a)
  double log_reflection_ratio() const;  // log(M_0(-a) / M_0(a))
};

/// Adaptive-order evaluation: starts at order 48 and doubles until two
/// successive orders agree to 1e-12, capped at 512.
TiltedMoments tilted_moments(double kappa, double a);

/// Unscaled M_m(a) for m in {0, 1, 2}. Overflows to inf beyond |a| ~ 700;
/// use tilted_moments for ratios.
double jacobi_exp_moment(double kappa, int m, double a);

/// Cumulants k_1..k_6 of the probability measure g(s)ds / M_0(0).
struct JacobiCumulants {
  double k[7] = {};  // k[1]..k[6]; k[0] unused
};
JacobiCumulants jacobi_cumulants(double kappa);

struct Interval {
  double lo;
  double hi;
};

struct IntegrationResult {
  double value;
  double error;
};

/// Globally adaptive Gauss-Kronrod (15/31) integration to an absolute
/// tolerance. Throws AccuracyError carrying the best estimate when the
/// subdivision budget runs out first.
IntegrationResult adaptive_integrate_1d(const std::function<double(double)>& f, Interval iv,
                                        double tol, int max_subdivisions = 4000);

enum class Endpoint { lo, hi };

/// \int_lo^hi |s - e|^{exponent} h(s) ds with e the chosen endpoint and
/// exponent > -1, integrated after the substitution u = |s - e|^{exponent+1}
/// which removes the algebraic endpoint behaviour.
IntegrationResult integrate_endpoint_power(const std::function<double(double)>& h, Interval iv,
                                           double exponent, Endpoint at, double tol);

}  // namespace dunkl
