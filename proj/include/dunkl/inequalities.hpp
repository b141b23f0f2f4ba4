#pragma once

// Li-Yau and Harnack certificates, the scalar functions behind the kernel
// estimate, and the chain-rule identity for Dunkl Laplacians.

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "dunkl/core.hpp"
#include "dunkl/kernels.hpp"
#include "dunkl/parallel.hpp"
#include "dunkl/semigroup.hpp"

namespace dunkl {

// ---------------------------------------------------------------------------
// grids and reports

/// Deterministic uniform doubles in [0, 1) from a 64-bit Mersenne twister.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Point in [-box, box]^d with every |coordinate| >= tube.
  Point point(int d, double box, double tube = 0.0);

 private:
  std::mt19937_64 engine_;
};

/// Every t is paired with every (x_points[i], y_points[i]).
struct GridSpec {
  std::vector<double> t_values;
  std::vector<Point> x_points;
  std::vector<Point> y_points;
  std::uint64_t seed = 0;

  std::size_t size() const { return t_values.size() * x_points.size(); }
};

GridSpec random_grid(int d, std::vector<double> t_values, int pairs, std::uint64_t seed, double box = 3.0,
                     double tube = 1e-3);

/// n values evenly spaced on a log scale in [lo, hi].
std::vector<double> log_spaced(double lo, double hi, int n);

struct InequalityRecord {
  double param = std::numeric_limits<double>::quiet_NaN();  // free parameter, e.g. kappa of a scalar check
  double s = std::numeric_limits<double>::quiet_NaN();      // earlier time, Harnack only
  double t = 0.0;
  Point x;
  Point y;
  double lhs = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - lhs
};

struct InequalityReport {
  std::string name;
  std::vector<InequalityRecord> records;
  double tolerance = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::size_t argmin = 0;
  std::size_t violation_count = 0;

  /// Recompute margins, min_margin, argmin and violation_count from records.
  void finalize();
  bool passed() const { return violation_count == 0; }
  const InequalityRecord& worst() const { return records.at(argmin); }
};

// ---------------------------------------------------------------------------
// Li-Yau for kernels

enum class LhsPath { closed_moment, fd_oracle };

/// Protocol used by the fd_oracle path on log kernels, whose magnitude makes
/// the default 1e-4 step roundoff-limited.
FdProtocol log_kernel_fd();

/// -Delta_kappa log k_t(., y)(x).
double liyau_lhs(const KernelSpec& spec, double t, const Point& x, const Point& y,
                 LhsPath path = LhsPath::closed_moment, const FdProtocol& fd = log_kernel_fd());

/// One coordinate's share of the closed-moment left side:
/// (1 + 2 kappa) c2 - (v / S)^2 [Var(a) + kappa phi(a) / a^2].
double liyau_lhs_axis(Family family, double kappa, double t, double u, double v);

/// d^2/du^2 log of one axis factor, bounded below by -c2.
double axis_second_log_derivative(Family family, double kappa, double t, double u, double v);

struct Bound {
  double sharp;
  double weak;
};

/// dho: ((d+2l) coth 2t, (d+2l)(1 + 1/(2t))); dunkl_heat: (d+2l)/(2t) twice.
Bound liyau_bound(Family family, const Multiplicity& mult, double t);

InequalityReport liyau_sweep(const KernelSpec& spec, const GridSpec& grid, double tolerance = 1e-8,
                             LhsPath path = LhsPath::closed_moment, Execution exec = Execution::parallel);

// ---------------------------------------------------------------------------
// scalar functions of the proof

/// phi(a) = 2 a M1(a)/M0(a) + log(M0(-a)/M0(a)).
double phi(double kappa, double a);
/// phi(a) / a^2, by a cumulant series near a = 0.
double phi_over_a2(double kappa, double a);
/// M1(a)/M0(a) - M1(-a)/M0(-a), carrying the sign of the cross-moment expression.
double psi_normalized(double kappa, double a);

// ---------------------------------------------------------------------------
// solutions

/// beta(t, x) of the gradient form: the Li-Yau bound of the family.
double liyau_beta(Family family, const Multiplicity& mult, double t);

/// Jet of the kernel slice x -> k_t(x, y), normalized to value 1.
SolutionJet kernel_jet(const KernelSpec& spec, double t, const Point& x, const Point& y);

/// |grad u|^2 / u^2 - d_t u / u.
double gradient_form_lhs(const Solution& u, double t, const Point& x);

/// LHS <= beta + V at every (t, x_i) of the grid (y points unused).
InequalityReport gradient_form_check(const Solution& u, const GridSpec& grid, double tolerance = 1e-6,
                                     Execution exec = Execution::parallel);

/// -Delta_kappa log u <= beta at every (t, x_i).
InequalityReport solution_liyau_check(const Solution& u, const GridSpec& grid, double tolerance = 1e-8,
                                      Execution exec = Execution::parallel);

/// Pi_log(u)(x) <= 0 at every (t, x_i).
InequalityReport pi_log_check(const Solution& u, const GridSpec& grid, double tolerance = 1e-12,
                              Execution exec = Execution::parallel);

// ---------------------------------------------------------------------------
// Harnack

/// (|x|^2 + |y|^2 + <x, y>) / 3.
double varsigma(const Point& x, const Point& y);

/// Logs of the two right-hand factors multiplying u(t, y).
struct HarnackRhs {
  double log_sharp;
  double log_weak;
};

/// Oscillator: sinh-ratio and (t/s)-power forms; heat: (t/s)^{(d+2l)/2} exp(|x-y|^2/(4(t-s))) for both.
HarnackRhs harnack_rhs(Family family, const Multiplicity& mult, double s, double t, const Point& x, const Point& y);

/// |x-y|^2/(4(t-s)) + (t-s) int_0^1 beta(t + tau(s-t), y + tau(x-y)) dtau,
/// by composite 16-point Gauss-Legendre with panel doubling.
double beta_path_exponent(const std::function<double(double, const Point&)>& beta, double s, double t,
                          const Point& x, const Point& y, double tol = 1e-13);

/// beta + V of the family, as a function of (t, x).
std::function<double(double, const Point&)> gradient_beta(Family family, const Multiplicity& mult);

struct HarnackTuple {
  double s;
  double t;
  Point x;
  Point y;
};

std::vector<HarnackTuple> random_harnack_tuples(int d, int count, double t_min, double t_max, std::uint64_t seed,
                                                double box = 3.0);

/// (t, x) -> log u(t, x) for any positive solution.
using LogSolution = std::function<double(double, const Point&)>;

LogSolution log_solution(const Solution& u);
LogSolution log_kernel_solution(const KernelSpec& spec, const Point& y);
/// Thread-safe cache of every (t, x) already evaluated.
LogSolution memoize(LogSolution f);

enum class HarnackVariant { sharp, weak, beta_path };

/// u(s, x) <= u(t, y) RHS (1 + tolerance); lhs and bound are recorded as logs.
InequalityReport harnack_check(const LogSolution& log_u, Family family, const Multiplicity& mult,
                               const std::vector<HarnackTuple>& tuples, HarnackVariant variant,
                               double tolerance = 1e-6, Execution exec = Execution::parallel);

// ---------------------------------------------------------------------------
// log-convexity of u_t / rho_t

struct Segment {
  Point x1;
  Point x2;
  double theta;
};

std::vector<Segment> random_segments(int d, int count, std::uint64_t seed, double box = 3.0);

/// log(u_t / rho_t)(theta x1 + (1-theta) x2) <= theta L(x1) + (1-theta) L(x2) + tolerance,
/// with rho_t = k_t(., 0) and L = log(u_t / rho_t).
InequalityReport log_convexity_check(const LogSolution& log_u, const KernelSpec& spec, double t,
                                     const std::vector<Segment>& segments, double tolerance = 1e-10,
                                     Execution exec = Execution::parallel);

// ---------------------------------------------------------------------------
// chain rule

/// Smooth positive test field: (1 + sum c_j (x_j - b_j)^2) exp(-sum a_j (x_j - m_j)^2) + floor.
ScalarField random_positive_field(int d, Rng& rng);
/// Positive mixture of `bumps` Gaussians with centers in [-2, 2]^d and widths in [0.4, 1.2].
InitialData random_mixture(int d, Rng& rng, int bumps = 3);

/// Radial positive field g(|x|^2).
ScalarField random_radial_field(Rng& rng);

struct ChainRuleResult {
  double residual;  // |Delta_k psi(f) - psi'(f) Delta_k f - psi''(f) |grad f|^2 - Pi_psi(f)|
  double pi;        // Pi_psi(f)(x)
};

ChainRuleResult chain_rule_residual(const ScalarField& f, const Psi& psi, const Point& x, const Multiplicity& mult,
                                    const FdProtocol& fd = {});

/// The identity without the defect term, which must hold for fields
/// invariant under every sigma_j.
double invariant_chain_rule_residual(const ScalarField& f, const Psi& psi, const Point& x, const Multiplicity& mult,
                                     const FdProtocol& fd = {});

}  // namespace dunkl
