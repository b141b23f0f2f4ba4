#include "dunkl/numerics.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <shared_mutex>
#include <string>
#include <tuple>

#include <Eigen/Dense>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "dunkl/errors.hpp"

namespace dunkl {

double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  // boost::math::lgamma is reentrant, unlike ::lgamma which writes signgam.
  return boost::math::lgamma(x);
}

namespace {

// log of z^{-lambda} I_lambda(z) = 2^{-lambda} sum_j (z^2/4)^j / (j! Gamma(lambda+j+1)),
// with the partial sum rescaled whenever it grows past 1e250.
double log_bessel_series(double lambda, double z) {
  if (!(lambda >= -0.5)) {
    throw DomainError("bessel_i_scaled: order must be >= -1/2, got " + std::to_string(lambda));
  }
  if (!std::isfinite(z)) {
    throw DomainError("bessel_i_scaled: argument must be finite");
  }
  constexpr int kMaxTerms = 500;
  constexpr double kRescale = 1e250;
  const double q = 0.25 * z * z;
  double term = 1.0;
  double sum = 1.0;
  double log_scale = -log_gamma(lambda + 1.0) - lambda * std::log(2.0);
  for (int j = 0; j < kMaxTerms; ++j) {
    term *= q / ((j + 1.0) * (lambda + j + 1.0));
    sum += term;
    if (sum > kRescale) {
      sum /= kRescale;
      term /= kRescale;
      log_scale += std::log(kRescale);
    }
    // terms rise until j ~ z/2, so only stop on the falling side
    if (term < 1e-17 * sum && (j + 1.0) * (lambda + j + 1.0) > q) {
      return log_scale + std::log(sum);
    }
  }
  throw AccuracyError("bessel_i_scaled: series did not converge within 500 terms",
                      std::exp(log_scale) * sum, std::exp(log_scale) * term);
}

// log of z^{-lambda} I_lambda(z) from the large-argument expansion
// I_lambda(z) ~ e^z / sqrt(2 pi z) sum_k (-1)^k a_k(lambda) / z^k, truncated at its smallest term.
double log_bessel_asymptotic(double lambda, double z) {
  const double mu = 4.0 * lambda * lambda;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = -term * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * z);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return z - 0.5 * std::log(2.0 * std::numbers::pi * z) + std::log(sum) - lambda * std::log(z);
}

double log_bessel(double lambda, double z) {
  const double a = std::abs(z);
  if (std::isfinite(a) && lambda >= -0.5 && a > 40.0 + 2.0 * lambda * lambda) return log_bessel_asymptotic(lambda, a);
  return log_bessel_series(lambda, z);
}

}  // namespace

double bessel_i_scaled(double lambda, double z) { return std::exp(log_bessel(lambda, z)); }

double log_bessel_i_scaled(double lambda, double z) { return log_bessel(lambda, z); }

// ---------------------------------------------------------------------------
// Gauss-Jacobi rules: Golub-Welsch eigenvalues for the nodes, one or two
// Newton steps on P_n^{(alpha,beta)} to polish them, and the closed-form
// Christoffel weights.

namespace {

// Orthonormal Jacobi recurrence p_{k+1} = ((x - diag_k) p_k - sub_k p_{k-1}) / sub_{k+1}.
struct Recurrence {
  std::vector<double> diag;
  std::vector<double> sub;  // sub[k] couples p_k and p_{k+1}
  double mass;              // integral of the weight
};

Recurrence jacobi_recurrence(double alpha, double beta, int n) {
  const double ab = alpha + beta;
  Recurrence r;
  r.diag.resize(n);
  r.sub.resize(n);
  r.diag[0] = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double c = 2.0 * k + ab;
    r.diag[k] = (beta * beta - alpha * alpha) / (c * (c + 2.0));
  }
  for (int k = 1; k <= n; ++k) {
    const double c = 2.0 * k + ab;
    double b;
    if (k == 1) {
      b = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (c * c * (c + 1.0) * (c - 1.0));
    }
    r.sub[k - 1] = std::sqrt(b);
  }
  r.mass = std::exp((ab + 1.0) * std::log(2.0) + log_gamma(alpha + 1.0) + log_gamma(beta + 1.0) -
                    log_gamma(ab + 2.0));
  return r;
}

struct NodeEval {
  double p;        // p_n(x), orthonormal
  double dp;       // p_n'(x)
  double sum_sq;   // sum_{k<n} p_k(x)^2
};

// Evaluated at x = end - y (end = +1) or x = y - 1 (end = -1) so that nodes
// crowding an endpoint are resolved relative to it.
NodeEval orthonormal_eval(const Recurrence& r, int n, double end, double y) {
  double p_prev = 0.0, dp_prev = 0.0;
  double p = 1.0 / std::sqrt(r.mass), dp = 0.0;
  double sum_sq = 0.0;
  for (int k = 0; k < n; ++k) {
    sum_sq += p * p;
    const double back = k > 0 ? r.sub[k - 1] : 0.0;
    const double x_minus_d = end > 0 ? (1.0 - r.diag[k]) - y : y - (1.0 + r.diag[k]);
    const double p_next = (x_minus_d * p - back * p_prev) / r.sub[k];
    const double dp_next = (p + x_minus_d * dp - back * dp_prev) / r.sub[k];
    p_prev = p;
    dp_prev = dp;
    p = p_next;
    dp = dp_next;
  }
  return {p, dp, sum_sq};
}

}  // namespace

QuadratureRule gauss_jacobi_rule(double alpha, double beta, int order) {
  if (!(alpha > -1.0) || !(beta > -1.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw DomainError("gauss_jacobi_rule: exponents must exceed -1");
  }
  if (order < 1) {
    throw DomainError("gauss_jacobi_rule: order must be positive");
  }
  const int n = order;
  const Recurrence rec = jacobi_recurrence(alpha, beta, n);

  std::vector<double> nodes(n);
  if (n == 1) {
    nodes[0] = rec.diag[0];
  } else {
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(rec.diag.data(), n);
    Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(rec.sub.data(), n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i) nodes[i] = solver.eigenvalues()[i];
  }

  QuadratureRule rule;
  rule.alpha = alpha;
  rule.beta = beta;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double end = nodes[i] > 0.0 ? 1.0 : -1.0;
    double y = end > 0 ? 1.0 - nodes[i] : nodes[i] + 1.0;
    for (int it = 0; it < 2; ++it) {
      const NodeEval e = orthonormal_eval(rec, n, end, y);
      const double step = e.p / e.dp;  // Newton step in x
      const double candidate = end > 0 ? y + step : y - step;
      if (std::isfinite(candidate) && std::abs(step) < 1e-8 && candidate > 0.0 && candidate < 2.0) {
        y = candidate;
      }
    }
    // Christoffel numbers 1 / sum p_k(x)^2: no division by (1 - x^2), so the
    // weights next to a singular endpoint keep full relative accuracy.
    rule.nodes[i] = end > 0 ? 1.0 - y : y - 1.0;
    rule.weights[i] = 1.0 / orthonormal_eval(rec, n, end, y).sum_sq;
  }
  return rule;
}

QuadratureRule gauss_jacobi_rule(double kappa, int order) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw DomainError("gauss_jacobi_rule: kappa must be positive (kappa = 0 is the two-point limit)");
  }
  return gauss_jacobi_rule(kappa - 1.0, kappa, order);
}

QuadratureRule gauss_legendre_rule(int order) { return gauss_jacobi_rule(0.0, 0.0, order); }

std::shared_ptr<const QuadratureRule> cached_jacobi_rule(double alpha, double beta, int order) {
  using Key = std::tuple<double, double, int>;
  static std::shared_mutex mutex;
  static std::map<Key, std::shared_ptr<const QuadratureRule>> cache;
  const Key key{alpha, beta, order};
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadratureRule>(gauss_jacobi_rule(alpha, beta, order));
  std::unique_lock lock(mutex);
  return cache.emplace(key, std::move(rule)).first->second;
}

// ---------------------------------------------------------------------------

double TiltedMoments::log_scale() const { return std::abs(a); }
double TiltedMoments::log_m0() const { return std::abs(a) + std::log(m0); }
double TiltedMoments::log_reflection_ratio() const { return std::log(reflected_m0 / m0); }

namespace {

struct TiltSums {
  double m0 = 0.0, m1 = 0.0, central = 0.0;
};

// Sums of w e^{a s - |a|} s^m over a node set for the weight (1-s)^{kappa-1} (1+s)^kappa.
// For large |a| the mass sits within O(1/|a|) of one endpoint, so the rule is
// placed on [1 - h, 1] or [-1, -1 + h] with h = kTiltWindow / |a|.
constexpr double kTiltWindow = 80.0;

TiltSums tilt_sums(double kappa, double a, int order) {
  std::vector<double> s, w;
  if (std::abs(a) <= 1.25 * kTiltWindow) {
    const auto rule = cached_jacobi_rule(kappa - 1.0, kappa, order);
    s = rule->nodes;
    w = rule->weights;
  } else {
    const double half = 0.5 * kTiltWindow / std::abs(a);
    const bool upper = a > 0.0;
    const auto rule = upper ? cached_jacobi_rule(kappa - 1.0, 0.0, order) : cached_jacobi_rule(0.0, kappa, order);
    const double scale = upper ? std::pow(half, kappa) : std::pow(half, kappa + 1.0);
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
      const double r = rule->nodes[i];
      if (upper) {
        const double si = 1.0 - half * (1.0 - r);
        s.push_back(si);
        w.push_back(rule->weights[i] * scale * std::pow(1.0 + si, kappa));
      } else {
        const double si = -1.0 + half * (1.0 + r);
        s.push_back(si);
        w.push_back(rule->weights[i] * scale * std::pow(1.0 - si, kappa - 1.0));
      }
    }
  }
  const double shift = std::abs(a);
  TiltSums out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double e = w[i] * std::exp(a * s[i] - shift);
    out.m0 += e;
    out.m1 += e * s[i];
  }
  const double mean = out.m1 / out.m0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double dev = s[i] - mean;
    out.central += w[i] * std::exp(a * s[i] - shift) * dev * dev;
  }
  return out;
}

TiltedMoments moments_at_order(double kappa, double a, int order) {
  const TiltSums f = tilt_sums(kappa, a, order);
  const TiltSums r = tilt_sums(kappa, -a, order);
  TiltedMoments out;
  out.a = a;
  out.order = order;
  out.m0 = f.m0;
  out.m1 = f.m1;
  out.mean = f.m1 / f.m0;
  out.variance = f.central / f.m0;
  out.m2 = (out.variance + out.mean * out.mean) * f.m0;
  out.reflected_m0 = r.m0;
  out.reflected_mean = r.m1 / r.m0;
  return out;
}

bool moments_agree(const TiltedMoments& lo, const TiltedMoments& hi) {
  auto rel = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::abs(y); };
  return rel(lo.m0, hi.m0) && rel(lo.reflected_m0, hi.reflected_m0) &&
         std::abs(lo.mean - hi.mean) <= 1e-12 && std::abs(lo.reflected_mean - hi.reflected_mean) <= 1e-12 &&
         std::abs(lo.variance - hi.variance) <= 1e-10 * hi.variance + 1e-15;
}

}  // namespace

TiltedMoments tilted_moments(double kappa, double a) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw DomainError("tilted_moments: kappa must be positive");
  }
  if (!std::isfinite(a)) {
    throw DomainError("tilted_moments: tilt must be finite");
  }
  constexpr int kLadder[] = {48, 96, 192, 384, 512};
  TiltedMoments prev = moments_at_order(kappa, a, kLadder[0]);
  for (std::size_t i = 1; i < std::size(kLadder); ++i) {
    TiltedMoments next = moments_at_order(kappa, a, kLadder[i]);
    if (moments_agree(prev, next)) return next;
    prev = next;
  }
  throw AccuracyError("tilted_moments: order 512 reached without convergence at a = " + std::to_string(a),
                      prev.m0, std::abs(prev.m0));
}

double jacobi_exp_moment(double kappa, int m, double a) {
  if (m < 0 || m > 2) {
    throw DomainError("jacobi_exp_moment: m must be 0, 1 or 2");
  }
  const TiltedMoments t = tilted_moments(kappa, a);
  const double scaled = m == 0 ? t.m0 : (m == 1 ? t.m1 : t.m2);
  return scaled * std::exp(std::abs(a));
}

JacobiCumulants jacobi_cumulants(double kappa) {
  if (!(kappa > 0.0)) throw DomainError("jacobi_cumulants: kappa must be positive");
  const auto rule = cached_jacobi_rule(kappa - 1.0, kappa, 48);
  double mass = 0.0, first = 0.0;
  for (int i = 0; i < rule->order(); ++i) {
    mass += rule->weights[i];
    first += rule->weights[i] * rule->nodes[i];
  }
  const double mu = first / mass;
  double c[7] = {};
  for (int i = 0; i < rule->order(); ++i) {
    const double dev = rule->nodes[i] - mu;
    double p = dev * dev;
    for (int k = 2; k <= 6; ++k) {
      c[k] += rule->weights[i] * p;
      p *= dev;
    }
  }
  for (int k = 2; k <= 6; ++k) c[k] /= mass;
  JacobiCumulants out;
  out.k[1] = mu;
  out.k[2] = c[2];
  out.k[3] = c[3];
  out.k[4] = c[4] - 3.0 * c[2] * c[2];
  out.k[5] = c[5] - 10.0 * c[3] * c[2];
  out.k[6] = c[6] - 15.0 * c[4] * c[2] - 10.0 * c[3] * c[3] + 30.0 * c[2] * c[2] * c[2];
  return out;
}

// ---------------------------------------------------------------------------

IntegrationResult adaptive_integrate_1d(const std::function<double(double)>& f, Interval iv, double tol,
                                        int max_subdivisions) {
  if (!(tol > 0.0)) throw DomainError("adaptive_integrate_1d: tolerance must be positive");
  if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
    throw DomainError("adaptive_integrate_1d: interval must be finite with lo < hi");
  }
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  struct Piece {
    double lo, hi, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  auto eval = [&](double lo, double hi) {
    double err = 0.0;
    const double v = GK::integrate(f, lo, hi, 0, 0.0, &err);
    if (!std::isfinite(v)) throw EvaluationError("adaptive_integrate_1d: integrand is not finite");
    return Piece{lo, hi, v, err};
  };

  std::priority_queue<Piece> heap;
  Piece first = eval(iv.lo, iv.hi);
  double total = first.value;
  double total_error = first.error;
  heap.push(first);
  int pieces = 1;
  while (total_error > tol) {
    if (pieces >= max_subdivisions) {
      throw AccuracyError("adaptive_integrate_1d: subdivision budget exhausted", total, total_error);
    }
    Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw AccuracyError("adaptive_integrate_1d: interval cannot be split further", total, total_error);
    }
    Piece left = eval(worst.lo, mid);
    Piece right = eval(mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++pieces;
    if (total_error <= tol) {
      // recompute from scratch to wash out drift in the running sums
      double v = 0.0, e = 0.0;
      auto copy = heap;
      while (!copy.empty()) {
        v += copy.top().value;
        e += copy.top().error;
        copy.pop();
      }
      total = v;
      total_error = e;
    }
  }
  return {total, total_error};
}

IntegrationResult integrate_endpoint_power(const std::function<double(double)>& h, Interval iv, double exponent,
                                           Endpoint at, double tol) {
  if (!(exponent > -1.0)) throw DomainError("integrate_endpoint_power: exponent must exceed -1");
  const double q = exponent + 1.0;
  const double width = iv.hi - iv.lo;
  if (!(width > 0.0)) throw DomainError("integrate_endpoint_power: empty interval");
  const double upper = std::pow(width, q);
  std::function<double(double)> g;
  if (at == Endpoint::hi) {
    g = [&](double u) { return h(iv.hi - std::pow(u, 1.0 / q)) / q; };
  } else {
    g = [&](double u) { return h(iv.lo + std::pow(u, 1.0 / q)) / q; };
  }
  return adaptive_integrate_1d(g, {0.0, upper}, tol);
}

}  // namespace dunkl
