#include "dunkl/core.hpp"

#include <cmath>
#include <string>

#include "dunkl/errors.hpp"

namespace dunkl {

Multiplicity::Multiplicity(std::vector<double> kappa) : kappa_(std::move(kappa)) {
  for (double k : kappa_) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
      throw DomainError("multiplicity entries must be finite and nonnegative");
    }
    lambda_ += k;
  }
}

Multiplicity Multiplicity::uniform(int d, double kappa) {
  if (d < 1) throw DomainError("dimension must be at least 1");
  return Multiplicity(std::vector<double>(d, kappa));
}

double ScalarField::operator()(const Point& x) const {
  const double v = eval(x);
  if (!std::isfinite(v)) {
    throw EvaluationError("scalar field returned a non-finite value" +
                          (domain_note.empty() ? std::string() : " (" + domain_note + ")"));
  }
  return v;
}

namespace {

void check_axis(const Point& x, int j) {
  if (j < 0 || j >= static_cast<int>(x.size())) {
    throw DomainError("axis index " + std::to_string(j) + " out of range for dimension " +
                      std::to_string(x.size()));
  }
}

void check_dims(const Point& x, const Multiplicity& mult) {
  if (static_cast<int>(x.size()) != mult.dim()) {
    throw DomainError("point dimension does not match the multiplicity");
  }
}

// Neville tableau for an even error expansion in h, steps h, 2h, 4h, ...
double richardson(std::vector<double> t) {
  const int n = static_cast<int>(t.size());
  double factor = 1.0;
  for (int m = 1; m < n; ++m) {
    factor *= 4.0;
    for (int k = 0; k + m < n; ++k) {
      t[k] = t[k] + (t[k] - t[k + 1]) / (factor - 1.0);
    }
  }
  return t[0];
}

double base_step(const FdProtocol& fd, double xj) {
  if (!(fd.step > 0.0) || fd.richardson_levels < 1) {
    throw DomainError("finite-difference step must be positive with at least one level");
  }
  return fd.step * std::max(1.0, std::abs(xj));
}

}  // namespace

Point reflect(const Point& x, int j) {
  check_axis(x, j);
  Point y = x;
  y[j] = -y[j];
  return y;
}

double weight(const Point& x, const Multiplicity& mult) {
  check_dims(x, mult);
  double w = 1.0;
  for (int j = 0; j < mult.dim(); ++j) {
    if (mult[j] > 0.0) w *= std::pow(std::abs(x[j]), 2.0 * mult[j]);
  }
  return w;
}

double partial(const ScalarField& f, int j, const Point& x, const FdProtocol& fd) {
  check_axis(x, j);
  const double h0 = base_step(fd, x[j]);
  std::vector<double> est(fd.richardson_levels);
  Point p = x;
  for (int k = 0; k < fd.richardson_levels; ++k) {
    const double h = std::ldexp(h0, k);
    p[j] = x[j] + h;
    const double fp = f(p);
    p[j] = x[j] - h;
    const double fm = f(p);
    est[k] = (fp - fm) / (2.0 * h);
  }
  return richardson(std::move(est));
}

double second_partial(const ScalarField& f, int j, const Point& x, const FdProtocol& fd) {
  check_axis(x, j);
  const double h0 = base_step(fd, x[j]);
  const double f0 = f(x);
  std::vector<double> est(fd.richardson_levels);
  Point p = x;
  for (int k = 0; k < fd.richardson_levels; ++k) {
    const double h = std::ldexp(h0, k);
    p[j] = x[j] + h;
    const double fp = f(p);
    p[j] = x[j] - h;
    const double fm = f(p);
    est[k] = (fp - 2.0 * f0 + fm) / (h * h);
  }
  return richardson(std::move(est));
}

double laplacian(const ScalarField& f, const Point& x, const FdProtocol& fd) {
  double sum = 0.0;
  for (int j = 0; j < static_cast<int>(x.size()); ++j) sum += second_partial(f, j, x, fd);
  return sum;
}

std::vector<double> gradient(const ScalarField& f, const Point& x, const FdProtocol& fd) {
  std::vector<double> g(x.size());
  for (int j = 0; j < static_cast<int>(x.size()); ++j) g[j] = partial(f, j, x, fd);
  return g;
}

double dunkl_derivative(const ScalarField& f, int j, const Point& x, const Multiplicity& mult,
                        const FdProtocol& fd) {
  check_dims(x, mult);
  check_axis(x, j);
  const double dj = partial(f, j, x, fd);
  const double k = mult[j];
  if (k == 0.0) return dj;
  if (std::abs(x[j]) < fd.axis_threshold) return (1.0 + 2.0 * k) * dj;
  return dj + k * (f(x) - f(reflect(x, j))) / x[j];
}

double dunkl_laplacian(const ScalarField& f, const Point& x, const Multiplicity& mult,
                       const FdProtocol& fd) {
  check_dims(x, mult);
  const double fx = f(x);
  double sum = 0.0;
  for (int j = 0; j < mult.dim(); ++j) {
    const double k = mult[j];
    const double djj = second_partial(f, j, x, fd);
    sum += djj;
    if (k == 0.0) continue;
    if (std::abs(x[j]) < fd.axis_threshold) {
      sum += 2.0 * k * djj;
    } else {
      const double dj = partial(f, j, x, fd);
      sum += k / (x[j] * x[j]) * (2.0 * x[j] * dj - fx + f(reflect(x, j)));
    }
  }
  return sum;
}

Psi Psi::log() {
  Psi p;
  p.f = [](double v) { return std::log(v); };
  p.d1 = [](double v) { return 1.0 / v; };
  p.d2 = [](double v) { return -1.0 / (v * v); };
  p.name = "log";
  p.needs_positive = true;
  return p;
}

Psi Psi::square() {
  Psi p;
  p.f = [](double v) { return v * v; };
  p.d1 = [](double v) { return 2.0 * v; };
  p.d2 = [](double) { return 2.0; };
  p.name = "square";
  return p;
}

Psi Psi::identity() {
  Psi p;
  p.f = [](double v) { return v; };
  p.d1 = [](double) { return 1.0; };
  p.d2 = [](double) { return 0.0; };
  p.name = "identity";
  return p;
}

double pi_psi_pair(const Psi& psi, double a, double b) {
  if (psi.needs_positive && (!(a > 0.0) || !(b > 0.0))) {
    throw DomainError(psi.name + ": arguments must be positive");
  }
  return psi.f(a) - psi.f(b) - psi.d1(b) * (a - b);
}

double pi_psi(const ScalarField& f, const Psi& psi, const Point& x, const Multiplicity& mult,
              const FdProtocol& fd) {
  check_dims(x, mult);
  const double fx = f(x);
  if (psi.needs_positive && !(fx > 0.0)) throw DomainError(psi.name + ": field must be positive");
  double sum = 0.0;
  for (int j = 0; j < mult.dim(); ++j) {
    const double k = mult[j];
    if (k == 0.0) continue;
    if (std::abs(x[j]) < fd.axis_threshold) {
      const double dj = partial(f, j, x, fd);
      sum += 2.0 * k * psi.d2(fx) * dj * dj;
    } else {
      sum += k / (x[j] * x[j]) * pi_psi_pair(psi, f(reflect(x, j)), fx);
    }
  }
  return sum;
}

ScalarField compose(const Psi& psi, const ScalarField& f) {
  return ScalarField{[psi, f](const Point& x) {
                       const double v = f(x);
                       if (psi.needs_positive && !(v > 0.0)) {
                         throw DomainError(psi.name + ": field must be positive");
                       }
                       return psi.f(v);
                     },
                     psi.name + " of " + f.domain_note};
}

}  // namespace dunkl
