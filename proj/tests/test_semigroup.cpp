#include <cmath>

#include "doctest.h"
#include "dunkl/errors.hpp"
#include "dunkl/semigroup.hpp"

using namespace dunkl;

namespace {

// int_R e^{-y^2/2} |y|^{2 kappa} dy
double gaussian_moment(double kappa) { return std::exp((kappa + 0.5) * std::log(2.0) + std::lgamma(kappa + 0.5)); }

}  // namespace

TEST_CASE("mu quadrature integrates weighted Gaussians") {
  for (double kappa : {0.0, 0.3, 1.0, 2.5}) {
    const Multiplicity m({kappa, 0.5});
    const MuQuadrature q = mu_quadrature(m, 0.5, {{0.0, 0.0}});
    const ScalarField g{[](const Point& y) { return std::exp(-0.5 * (y[0] * y[0] + y[1] * y[1])); }, "gaussian"};
    const double expected = gaussian_moment(kappa) * gaussian_moment(0.5);
    CHECK(std::abs(integrate(q, g) / expected - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(mu_quadrature(Multiplicity::uniform(1, 1.0), -1.0, {{0.0}}), DomainError);
}

TEST_CASE("mass of the Dunkl heat kernel is constant") {
  SUBCASE("Gaussian mass is one") {
    const KernelSpec g = make_spec(Family::gauss, Multiplicity::uniform(2, 0.0), Form::closed);
    const MassReport r = mass_audit(g, {0.1, 1.0, 4.0}, {{0.0, 0.0}, {1.5, -2.0}});
    CHECK(std::abs(r.constant - 1.0) < 1e-10);
    CHECK(r.max_variation < 1e-10);
  }
  SUBCASE("kappa > 0: 2^{kappa + 1/2} per axis") {
    const KernelSpec h = make_spec(Family::dunkl_heat, Multiplicity({1.0, 0.3}));
    const MassReport r = mass_audit(h, {0.1, 1.0, 4.0}, {{0.0, 0.0}, {1.5, -2.0}, {-0.2, 2.7}});
    CHECK(r.max_variation < 1e-6);
    CHECK(std::abs(r.constant / std::pow(2.0, 1.5 + 0.8) - 1.0) < 1e-8);
  }
}

TEST_CASE("oscillator ground state decays at rate d + 2 lambda") {
  const KernelSpec s = make_spec(Family::dho, Multiplicity({0.7}));
  const double m0 = std::exp(std::lgamma(0.7) - std::lgamma(1.2));
  for (double t : {0.2, 1.0}) {
    for (double x : {0.0, 0.8, -1.9}) CHECK(std::abs(eigen_decay_ratio(s, t, {x}) / m0 - 1.0) < 1e-8);
  }
  CHECK(std::abs(measured_constant(s) / m0 - 1.0) < 1e-8);
  const KernelSpec mehler = make_spec(Family::mehler, Multiplicity::uniform(1, 0.0), Form::closed);
  CHECK(std::abs(measured_constant(mehler) - 1.0) < 1e-10);
}

TEST_CASE("Chapman-Kolmogorov") {
  for (Family f : {Family::dho, Family::dunkl_heat}) {
    for (double kappa : {0.0, 0.5, 1.0, 2.5}) {
      const KernelSpec spec = make_spec(f, Multiplicity::uniform(1, kappa));
      const double c = measured_constant(spec);
      CHECK(chapman_kolmogorov_residual(spec, 0.3, 0.7, {0.4}, {-1.3}, c) < 1e-6);
      CHECK(chapman_kolmogorov_residual(spec, 0.5, 0.5, {2.0}, {0.9}, c) < 1e-6);
    }
  }
}

TEST_CASE("solutions from mixture data") {
  InitialData f0{{{1.0, {0.5, -0.2}, 0.7}, {0.6, {-1.0, 1.1}, 0.5}}};
  for (Family fam : {Family::dho, Family::dunkl_heat}) {
    const Solution u(f0, make_spec(fam, Multiplicity({0.8, 1.5})));
    const double t = 0.6;
    const Point x{0.35, -0.9};
    const SolutionJet j = u.jet(t, x);
    SUBCASE("jet values agree with direct evaluation") {
      CHECK(j.value == doctest::Approx(u.value(t, x)).epsilon(1e-12));
      CHECK(j.dt == doctest::Approx(u.time_derivative(t, x)).epsilon(1e-6));
      CHECK(j.grad[0] == doctest::Approx(partial(u.slice(t), 0, x)).epsilon(1e-7));
      CHECK(j.second[1] == doctest::Approx(second_partial(u.slice(t), 1, x)).epsilon(1e-6));
      CHECK(j.reflected[0] == doctest::Approx(u.value(t, reflect(x, 0))).epsilon(1e-12));
    }
    SUBCASE("the solution satisfies its equation") {
      const double lap = dunkl_laplacian(u.slice(t), x, u.spec().mult);
      const double residual = std::abs(j.dt - lap + u.potential(x) * j.value) / j.value;
      CHECK(residual < 1e-5);
    }
    SUBCASE("closed and finite-difference log Laplacians agree") {
      const double closed = j.neg_dunkl_laplacian_log(x, u.spec().mult);
      const double fd = -dunkl_laplacian(u.log_slice(t), x, u.spec().mult);
      CHECK(closed == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("ground-state data evolves by the eigenvalue") {
  const KernelSpec spec = make_spec(Family::dho, Multiplicity({1.0}));
  const Solution u(ground_state(1), spec);
  const double m0 = measured_constant(spec);
  for (double x : {0.0, 1.2}) {
    const double expected = m0 * std::exp(-3.0 * 0.5) * std::exp(-0.5 * x * x);
    CHECK(u.value(0.5, {x}) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("apply_heat matches the mixture solution") {
  const KernelSpec spec = make_spec(Family::dunkl_heat, Multiplicity({0.6}));
  InitialData f0{{{1.0, {0.3}, 0.6}}};
  const Solution u(f0, spec);
  CHECK(apply_heat(f0.field(), spec, 0.4, {0.5}, 6.0) == doctest::Approx(u.value(0.4, {0.5})).epsilon(1e-9));
}

TEST_CASE("solution input checks") {
  const KernelSpec spec = make_spec(Family::dho, Multiplicity::uniform(1, 1.0));
  CHECK_THROWS_AS(Solution(InitialData{}, spec), DomainError);
  CHECK_THROWS_AS(Solution(InitialData{{{1.0, {0.0, 0.0}, 1.0}}}, spec), DomainError);
  CHECK_THROWS_AS(Solution(InitialData{{{-1.0, {0.0}, 1.0}}}, spec), DomainError);
}
