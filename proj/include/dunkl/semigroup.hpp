#pragma once

// Integration against mu_kappa(dy) = prod_j |y_j|^{2 kappa_j} dy and the
// semigroups generated by the kernels.

#include <vector>

#include "dunkl/core.hpp"
#include "dunkl/kernels.hpp"

namespace dunkl {

/// One axis of a tensor rule on [-R, R]; weights already contain |y|^{2 kappa}.
struct AxisRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double radius = 0.0;
  double exponent = 0.0;  // 2 kappa
  int order_per_half = 0;
};

struct MuQuadrature {
  std::vector<AxisRule> axes;
};

struct MuQuadratureOptions {
  int order = 64;          // starting order per half axis
  double safety = 10.0;    // standard deviations of the kernel kept inside R
  double min_width = 0.0;  // narrowest feature of the integrand besides the kernel; 0 = none
  double data_radius = 0.0;  // the integrand is negligible beyond this |y_j|; 0 = unknown
  int max_order = 1024;
  double tolerance = 1e-10;  // relative agreement of successive orders on test integrals
};

/// R_j = max_c |c_j| + safety sqrt(2t) max(1, sqrt(1 + 2 kappa_j)), capped by
/// data_radius when that is set. The order
/// per half axis doubles until Gaussian test integrals of the narrowest width
/// stop changing.
MuQuadrature mu_quadrature(const Multiplicity& mult, double t, const std::vector<Point>& centers,
                           const MuQuadratureOptions& opt = {});

/// Integral of f against mu_kappa with the tensor rule (d <= 3).
double integrate(const MuQuadrature& q, const ScalarField& f);

/// H_t f(x) = int f(y) k_t(x, y) dmu(y) for a general field, tensor quadrature
/// over the ball of radius support (plus the kernel spread). d <= 3.
double apply_heat(const ScalarField& f, const KernelSpec& spec, double t, const Point& x,
                  double support = 3.0, const MuQuadratureOptions& opt = {});

/// weight * exp(-|y - center|^2 / (2 width^2)).
struct GaussianBump {
  double weight = 1.0;
  Point center;
  double width = 1.0;
};

/// Initial data as a positive mixture of isotropic Gaussians.
struct InitialData {
  std::vector<GaussianBump> bumps;

  double operator()(const Point& y) const;
  ScalarField field() const;
  int dim() const;
  double min_width() const;
};

/// e^{-|y|^2/2}, the ground state of Delta_kappa - |x|^2.
InitialData ground_state(int d);

/// Everything the Li-Yau and Harnack checks need from u(t, .) at one point.
struct SolutionJet {
  double value = 0.0;
  std::vector<double> grad;       // d_j u
  std::vector<double> second;     // d_jj u
  std::vector<double> reflected;  // u(sigma_j x)
  double dt = 0.0;                // d_t u from the differentiated representation

  /// -Delta_kappa log u at x.
  double neg_dunkl_laplacian_log(const Point& x, const Multiplicity& mult, double axis_threshold = 1e-5) const;
  /// Pi_log(u)(x), with the on-axis limit -2 kappa_j (d_j u / u)^2.
  double pi_log(const Point& x, const Multiplicity& mult, double axis_threshold = 1e-5) const;
  double grad_norm2_over_u2() const;
};

/// u(t, x) = int f0(y) k_t(x, y) dmu(y) for mixture data f0. The quadrature
/// depends on t, the data and the box radius only, so u is smooth in x.
class Solution {
 public:
  Solution(InitialData data, KernelSpec spec, double box = 3.0, MuQuadratureOptions opt = {});

  double value(double t, const Point& x) const;
  /// Central difference in t with step 1e-5 t under the integral, reusing the nodes of time t.
  double time_derivative(double t, const Point& x) const;
  /// Values, derivatives and reflections from analytic kernel jets in one pass.
  SolutionJet jet(double t, const Point& x) const;
  ScalarField slice(double t) const;
  ScalarField log_slice(double t) const;
  /// |x|^2 for the oscillator families, 0 otherwise.
  double potential(const Point& x) const;

  const KernelSpec& spec() const { return spec_; }
  const InitialData& data() const { return data_; }
  MuQuadrature rule(double t) const;

 private:
  double value_with(const MuQuadrature& q, double t, const Point& x) const;

  InitialData data_;
  KernelSpec spec_;
  double box_;
  MuQuadratureOptions opt_;
};

Solution make_solution(const InitialData& f0, const KernelSpec& spec, double box = 3.0);

/// |int k_s(x,z) k_t(z,y) dmu(z) / k_{s+t}(x,y) - c|.
double chapman_kolmogorov_residual(const KernelSpec& spec, double s, double t, const Point& x, const Point& y,
                                   double c);

/// The ratio int k_s(x,z) k_t(z,y) dmu(z) / k_{s+t}(x,y) itself.
double chapman_kolmogorov_ratio(const KernelSpec& spec, double s, double t, const Point& x, const Point& y);

struct MassRecord {
  double t;
  Point x;
  double mass;
};

struct MassReport {
  std::vector<MassRecord> records;
  double constant = 0.0;       // mass at the first grid point
  double max_variation = 0.0;  // max |m / constant - 1|
};

/// m(t, x) = int k_t(x, y) dmu(y) over the grid.
MassReport mass_audit(const KernelSpec& spec, const std::vector<double>& t_list, const std::vector<Point>& x_list);

/// H_t g(x) / (g(x) e^{-(d + 2 lambda) t}) for the ground state g: constant in
/// (t, x) for the oscillator, equal to the normalization m_0.
double eigen_decay_ratio(const KernelSpec& spec, double t, const Point& x);

/// The Chapman-Kolmogorov constant c of a kernel normalization: mass for the
/// heat families, m_0 for the oscillator families. Measured at t = 1, x = 0.
double measured_constant(const KernelSpec& spec);

}  // namespace dunkl
