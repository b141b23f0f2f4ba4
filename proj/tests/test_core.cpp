#include <cmath>
#include <limits>

#include "doctest.h"
#include "dunkl/core.hpp"
#include "dunkl/errors.hpp"

using namespace dunkl;

namespace {

ScalarField field(std::function<double(const Point&)> f) { return ScalarField{std::move(f), "test"}; }

}  // namespace

TEST_CASE("multiplicity") {
  const Multiplicity m({0.5, 1.5});
  CHECK(m.dim() == 2);
  CHECK(m.lambda() == doctest::Approx(2.0));
  CHECK(m.homogeneous_dim() == doctest::Approx(6.0));
  CHECK_FALSE(m.is_zero());
  CHECK(Multiplicity::uniform(3, 0.0).is_zero());
  CHECK_THROWS_AS(Multiplicity({-0.1}), DomainError);
  CHECK_THROWS_AS(Multiplicity::uniform(0, 1.0), DomainError);
}

TEST_CASE("reflections and weight") {
  const Point x{1.0, -2.0, 3.0};
  CHECK(reflect(x, 1) == Point{1.0, 2.0, 3.0});
  CHECK(reflect(reflect(x, 2), 2) == x);
  CHECK_THROWS_AS(reflect(x, 3), DomainError);
  CHECK(weight({2.0, -3.0}, Multiplicity({0.5, 1.0})) == doctest::Approx(2.0 * 9.0));
  CHECK(weight({0.0, 1.0}, Multiplicity({0.0, 1.0})) == doctest::Approx(1.0));
}

TEST_CASE("classical derivatives") {
  const ScalarField f = field([](const Point& x) { return std::sin(x[0]) * std::exp(0.5 * x[1]); });
  const Point x{0.3, -0.8};
  CHECK(partial(f, 0, x) == doctest::Approx(std::cos(0.3) * std::exp(-0.4)).epsilon(1e-10));
  CHECK(second_partial(f, 1, x) == doctest::Approx(0.25 * std::sin(0.3) * std::exp(-0.4)).epsilon(1e-8));
  CHECK(laplacian(f, x) == doctest::Approx(-0.75 * std::sin(0.3) * std::exp(-0.4)).epsilon(1e-8));
}

TEST_CASE("Dunkl derivative of coordinate functions") {
  const Multiplicity m = Multiplicity::uniform(1, 0.7);
  const ScalarField lin = field([](const Point& x) { return x[0]; });
  CHECK(dunkl_derivative(lin, 0, {1.3}, m) == doctest::Approx(1.0 + 2.0 * 0.7).epsilon(1e-10));
  const ScalarField quad = field([](const Point& x) { return x[0] * x[0]; });
  // even functions: D x^2 = 2x
  CHECK(dunkl_derivative(quad, 0, {1.3}, m) == doctest::Approx(2.6).epsilon(1e-10));
}

TEST_CASE("Dunkl Laplacian of |x|^2 is 2(d + 2 lambda)") {
  const Multiplicity m({0.3, 1.0, 2.5});
  const ScalarField r2 = field([](const Point& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; });
  for (const Point& x : {Point{0.4, -1.1, 2.0}, Point{0.0, 0.5, -0.3}, Point{1e-7, 1e-7, 1.0}}) {
    CHECK(dunkl_laplacian(r2, x, m) == doctest::Approx(2.0 * m.homogeneous_dim()).epsilon(1e-7));
  }
}

TEST_CASE("Dunkl Laplacian of an exponential") {
  const double kappa = 1.3, a = 0.8;
  const Multiplicity m = Multiplicity::uniform(1, kappa);
  const ScalarField f = field([a](const Point& x) { return std::exp(a * x[0]); });
  for (double u : {-1.7, 0.4, 2.2}) {
    const double ex = std::exp(a * u);
    const double expected = a * a * ex + kappa / (u * u) * (2.0 * u * a * ex - ex + std::exp(-a * u));
    CHECK(dunkl_laplacian(f, {u}, m) == doctest::Approx(expected).epsilon(1e-7));
  }
  SUBCASE("on-axis limit") {
    // the difference term tends to 2 kappa f''(0)
    const double on_axis = dunkl_laplacian(f, {0.0}, m);
    const double near = dunkl_laplacian(f, {2e-3}, m);
    CHECK(on_axis == doctest::Approx(a * a * (1.0 + 2.0 * kappa)).epsilon(1e-7));
    CHECK(near == doctest::Approx(on_axis).epsilon(5e-3));
  }
}

TEST_CASE("zero multiplicity recovers the classical Laplacian") {
  const ScalarField f = field([](const Point& x) { return std::cos(x[0]) + x[1] * x[1] * x[0]; });
  const Point x{0.7, -0.2};
  CHECK(dunkl_laplacian(f, x, Multiplicity::uniform(2, 0.0)) == doctest::Approx(laplacian(f, x)).epsilon(1e-12));
}

TEST_CASE("chain-rule defect") {
  SUBCASE("pair values") {
    CHECK(pi_psi_pair(Psi::log(), 2.0, 1.0) == doctest::Approx(std::log(2.0) - 1.0));
    CHECK(pi_psi_pair(Psi::square(), 3.0, 1.0) == doctest::Approx(4.0));
    CHECK(pi_psi_pair(Psi::identity(), 3.0, 1.0) == doctest::Approx(0.0));
  }
  SUBCASE("log defect is nonpositive and vanishes for even fields") {
    const Multiplicity m({0.8, 1.2});
    const ScalarField f = field([](const Point& x) { return 1.0 + std::exp(x[0] - 0.3 * x[1]); });
    CHECK(pi_psi(f, Psi::log(), {0.6, -1.0}, m) < 0.0);
    const ScalarField even = field([](const Point& x) { return 2.0 + x[0] * x[0] + std::cos(x[1]); });
    CHECK(std::abs(pi_psi(even, Psi::log(), {0.6, -1.0}, m)) < 1e-14);
  }
  SUBCASE("log needs a positive field") {
    const ScalarField neg = field([](const Point& x) { return x[0] - 5.0; });
    CHECK_THROWS_AS(compose(Psi::log(), neg)({1.0}), DomainError);
  }
}

TEST_CASE("non-finite field values are reported") {
  const ScalarField bad = field([](const Point&) { return std::numeric_limits<double>::quiet_NaN(); });
  CHECK_THROWS_AS(bad({1.0}), EvaluationError);
  CHECK_THROWS_AS(dunkl_laplacian(bad, {1.0}, Multiplicity::uniform(1, 1.0)), EvaluationError);
}
