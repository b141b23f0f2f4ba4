#pragma once

// Calculus for the reflection group Z_2^d acting by coordinate sign flips.
// Axes are 0-based throughout: axis j flips coordinate x[j].

#include <functional>
#include <string>
#include <vector>

namespace dunkl {

using Point = std::vector<double>;

/// Per-axis multiplicities kappa_j >= 0.
class Multiplicity {
 public:
  Multiplicity() = default;
  explicit Multiplicity(std::vector<double> kappa);
  static Multiplicity uniform(int d, double kappa);

  int dim() const { return static_cast<int>(kappa_.size()); }
  double operator[](int j) const { return kappa_[j]; }
  const std::vector<double>& values() const { return kappa_; }
  double lambda() const { return lambda_; }
  /// d + 2 lambda, the homogeneous dimension.
  double homogeneous_dim() const { return dim() + 2.0 * lambda_; }
  bool is_zero() const { return lambda_ == 0.0; }

 private:
  std::vector<double> kappa_;
  double lambda_ = 0.0;
};

struct FdProtocol {
  double step = 1e-4;           // finest step, multiplied by max(1, |x_j|)
  int richardson_levels = 2;    // number of step sizes h, 2h, 4h, ...
  double axis_threshold = 1e-5; // |x_j| below this uses the on-axis limit forms
};

struct ScalarField {
  std::function<double(const Point&)> eval;
  std::string domain_note;

  double operator()(const Point& x) const;
};

Point reflect(const Point& x, int j);

/// prod_j |x_j|^{2 kappa_j}.
double weight(const Point& x, const Multiplicity& mult);

/// Richardson-extrapolated central differences along one axis.
double partial(const ScalarField& f, int j, const Point& x, const FdProtocol& fd = {});
double second_partial(const ScalarField& f, int j, const Point& x, const FdProtocol& fd = {});
double laplacian(const ScalarField& f, const Point& x, const FdProtocol& fd = {});
std::vector<double> gradient(const ScalarField& f, const Point& x, const FdProtocol& fd = {});

/// D_j f(x) = d_j f(x) + kappa_j (f(x) - f(sigma_j x)) / x_j.
double dunkl_derivative(const ScalarField& f, int j, const Point& x, const Multiplicity& mult,
                        const FdProtocol& fd = {});

/// Delta f(x) + sum_j kappa_j / x_j^2 (2 x_j d_j f(x) - f(x) + f(sigma_j x)).
double dunkl_laplacian(const ScalarField& f, const Point& x, const Multiplicity& mult,
                       const FdProtocol& fd = {});

/// A C^2 scalar function with its first two derivatives.
struct Psi {
  std::function<double(double)> f;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  std::string name;
  bool needs_positive = false;

  static Psi log();
  static Psi square();
  static Psi identity();
};

/// pi_psi(a, b) = psi(a) - psi(b) - psi'(b)(a - b).
double pi_psi_pair(const Psi& psi, double a, double b);

/// Chain-rule defect sum_j kappa_j / x_j^2 pi_psi(f(sigma_j x), f(x)). Near
/// the hyperplane x_j = 0 the j-th term takes its limit 2 kappa_j psi''(f) (d_j f)^2.
double pi_psi(const ScalarField& f, const Psi& psi, const Point& x, const Multiplicity& mult,
              const FdProtocol& fd = {});

ScalarField compose(const Psi& psi, const ScalarField& f);

}  // namespace dunkl
