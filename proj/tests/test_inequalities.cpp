#include <cmath>
#include <limits>

#include "doctest.h"
#include "dunkl/errors.hpp"
#include "dunkl/inequalities.hpp"

using namespace dunkl;

TEST_CASE("report bookkeeping") {
  InequalityReport r;
  r.tolerance = 1e-3;
  r.records.resize(3);
  r.records[0].lhs = 1.0;
  r.records[0].bound = 2.0;
  r.records[1].lhs = 2.0005;
  r.records[1].bound = 2.0;
  r.records[2].lhs = 1.0;
  r.records[2].bound = 1.5;
  r.finalize();
  CHECK(r.argmin == 1);
  CHECK(r.min_margin == doctest::Approx(-0.0005));
  CHECK(r.passed());
  r.records[2].lhs = std::numeric_limits<double>::quiet_NaN();
  r.finalize();
  CHECK(r.violation_count == 1);
  CHECK(r.argmin == 2);
  CHECK_FALSE(r.passed());
}

TEST_CASE("grids are deterministic and avoid the axes") {
  const GridSpec a = random_grid(3, {0.1, 1.0}, 50, 7);
  const GridSpec b = random_grid(3, {0.1, 1.0}, 50, 7);
  CHECK(a.size() == 100);
  CHECK(a.x_points == b.x_points);
  for (const Point& p : a.x_points) {
    for (double c : p) {
      CHECK(std::abs(c) >= 1e-3);
      CHECK(std::abs(c) <= 3.0);
    }
  }
  CHECK_THROWS_AS(random_grid(1, {}, 5, 1), DomainError);
  CHECK_THROWS_AS(random_grid(1, {1.0}, 0, 1), DomainError);
  const std::vector<double> ts = log_spaced(0.05, 5.0, 3);
  CHECK(ts[1] == doctest::Approx(0.5));
}

TEST_CASE("Li-Yau is an equality for the Mehler kernel") {
  const KernelSpec spec = make_spec(Family::mehler, Multiplicity::uniform(2, 0.0), Form::closed);
  const InequalityReport r = liyau_sweep(spec, random_grid(2, {0.1, 0.5, 1.0, 2.0}, 20, 3));
  CHECK(r.passed());
  for (const auto& rec : r.records) CHECK(std::abs(rec.margin) < 1e-6);
}

TEST_CASE("Li-Yau certificates with positive multiplicity") {
  SUBCASE("oscillator, kappa = 0.7") {
    const KernelSpec spec = make_spec(Family::dho, Multiplicity({0.7}));
    const InequalityReport r = liyau_sweep(spec, random_grid(1, log_spaced(0.05, 5.0, 10), 100, 11));
    CHECK(r.records.size() == 1000);
    CHECK(r.violation_count == 0);
  }
  SUBCASE("Dunkl heat, kappa = (0.5, 1.5)") {
    const KernelSpec spec = make_spec(Family::dunkl_heat, Multiplicity({0.5, 1.5}));
    const InequalityReport r = liyau_sweep(spec, random_grid(2, log_spaced(0.05, 5.0, 10), 100, 12));
    CHECK(r.violation_count == 0);
  }
}

TEST_CASE("closed-moment and finite-difference paths agree") {
  for (Family f : {Family::dho, Family::dunkl_heat}) {
    const KernelSpec spec = make_spec(f, Multiplicity({1.0, 0.4}));
    const GridSpec g = random_grid(2, {0.1, 1.0, 3.0}, 8, 21);
    for (std::size_t i = 0; i < g.x_points.size(); ++i) {
      for (double t : g.t_values) {
        const double a = liyau_lhs(spec, t, g.x_points[i], g.y_points[i], LhsPath::closed_moment);
        const double b = liyau_lhs(spec, t, g.x_points[i], g.y_points[i], LhsPath::fd_oracle);
        CHECK(std::abs(a - b) < 1e-6);
      }
    }
  }
}

TEST_CASE("closed-moment assembly is continuous across the axes") {
  const double t = 0.4, v = 1.3;
  const KernelSpec spec = make_spec(Family::dho, Multiplicity::uniform(1, 1.0));
  for (double kappa : {0.3, 2.5}) {
    const double on = liyau_lhs_axis(Family::dho, kappa, t, 0.0, v);
    CHECK(std::isfinite(on));
    CHECK(std::abs(on - liyau_lhs_axis(Family::dho, kappa, t, 1e-10, v)) < 1e-8);
    // both sides of the switch from the cumulant series to the moment ratios at |a| = 1e-2
    const double edge = 1e-2 * std::sinh(2.0 * t) / v;
    for (double sign : {-1.0, 1.0}) {
      const double below = liyau_lhs_axis(Family::dho, kappa, t, sign * edge * (1.0 - 1e-9), v);
      const double above = liyau_lhs_axis(Family::dho, kappa, t, sign * edge * (1.0 + 1e-9), v);
      CHECK(std::abs(below - above) < 1e-8);
    }
  }
  const Point y{v};
  CHECK(liyau_lhs(spec, t, {1e-3}, y) ==
        doctest::Approx(liyau_lhs(spec, t, {1e-3}, y, LhsPath::fd_oracle)).epsilon(1e-5));
}

TEST_CASE("sharp and weak bounds") {
  const Multiplicity m({0.5, 1.0});
  for (double t : {0.05, 0.5, 5.0}) {
    const Bound b = liyau_bound(Family::dho, m, t);
    CHECK(b.sharp == doctest::Approx(5.0 / std::tanh(2.0 * t)));
    CHECK(b.sharp <= b.weak);
    CHECK(liyau_bound(Family::dunkl_heat, m, t).sharp == doctest::Approx(5.0 / (2.0 * t)));
  }
  CHECK_THROWS_AS(liyau_bound(Family::dho, m, 0.0), DomainError);
}

TEST_CASE("per-coordinate convexity bound") {
  for (double kappa : {0.3, 1.0, 2.5}) {
    for (double t : {0.05, 0.5, 3.0}) {
      for (double u : {-2.0, 0.3, 2.9}) {
        for (double v : {-1.0, 2.5}) {
          const double c2 = 1.0 / std::tanh(2.0 * t);
          CHECK(axis_second_log_derivative(Family::dho, kappa, t, u, v) >= -c2 - 1e-8);
        }
      }
    }
  }
}

TEST_CASE("phi and normalized psi") {
  for (double kappa : {0.3, 1.0, 2.5}) CHECK(std::abs(phi(kappa, 0.0)) < 1e-15);
  CHECK(phi(1.0, 5.0) == doctest::Approx(6.0243809784668372).epsilon(1e-10));
  CHECK(phi(1.0, -5.0) == doctest::Approx(8.2068136684849928).epsilon(1e-10));
  CHECK(phi(0.3, 0.5) == doctest::Approx(0.10504778641605633).epsilon(1e-10));
  CHECK(phi_over_a2(0.3, 0.5) == doctest::Approx(0.10504778641605633 / 0.25).epsilon(1e-10));
  // the series branch and the direct branch meet
  CHECK(phi_over_a2(1.0, 0.0099) == doctest::Approx(phi_over_a2(1.0, 0.0101)).epsilon(1e-4));
  for (double a : {-5.0, -0.5, 0.5, 5.0}) CHECK(psi_normalized(1.0, a) * (a > 0 ? 1.0 : -1.0) >= 0.0);
  CHECK_THROWS_AS(phi(0.0, 1.0), DomainError);
}

TEST_CASE("varsigma and Harnack factors") {
  CHECK(varsigma({0.0, 0.0}, {0.0, 0.0}) == 0.0);
  CHECK(varsigma({1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(2.0 / 3.0));
  const Multiplicity m({0.5, 1.0});
  for (const HarnackTuple& h : random_harnack_tuples(2, 100, 0.05, 3.0, 4)) {
    const HarnackRhs r = harnack_rhs(Family::dho, m, h.s, h.t, h.x, h.y);
    CHECK(r.log_sharp <= r.log_weak);
  }
  CHECK_THROWS_AS(harnack_rhs(Family::dho, m, 1.0, 1.0, {0.0, 0.0}, {0.0, 0.0}), DomainError);
}

TEST_CASE("Gaussian Harnack equality at the origin") {
  const KernelSpec g = make_spec(Family::gauss, Multiplicity::uniform(1, 0.0), Form::closed);
  const double ratio = std::exp(evaluate(g, 0.5, {0.0}, {0.0}).log_abs - evaluate(g, 1.0, {0.0}, {0.0}).log_abs);
  CHECK(std::abs(ratio - std::sqrt(2.0)) < 1e-10);
  const HarnackRhs r = harnack_rhs(Family::gauss, g.mult, 0.5, 1.0, {0.0}, {0.0});
  CHECK(std::abs(std::exp(r.log_sharp) - std::sqrt(2.0)) < 1e-10);
}

TEST_CASE("beta path integral reproduces the closed sharp form") {
  const Multiplicity m({1.0, 0.3});
  const auto beta = gradient_beta(Family::dho, m);
  for (const HarnackTuple& h : random_harnack_tuples(2, 50, 0.05, 3.0, 9)) {
    const double path = beta_path_exponent(beta, h.s, h.t, h.x, h.y);
    CHECK(std::abs(path - harnack_rhs(Family::dho, m, h.s, h.t, h.x, h.y).log_sharp) < 1e-10);
  }
}

TEST_CASE("Harnack checks on kernel slices") {
  for (Family f : {Family::dho, Family::dunkl_heat}) {
    const KernelSpec spec = make_spec(f, Multiplicity({1.0}));
    const auto tuples = random_harnack_tuples(1, 300, 0.05, 3.0, 31);
    for (HarnackVariant v : {HarnackVariant::sharp, HarnackVariant::weak, HarnackVariant::beta_path}) {
      CHECK(harnack_check(log_kernel_solution(spec, {0.8}), f, spec.mult, tuples, v).violation_count == 0);
    }
  }
}

TEST_CASE("margins do not depend on the scale of the solution") {
  const KernelSpec spec = make_spec(Family::dho, Multiplicity({0.5}));
  const LogSolution base = log_kernel_solution(spec, {0.4});
  const auto tuples = random_harnack_tuples(1, 40, 0.1, 2.0, 5);
  const auto segments = random_segments(1, 40, 5);
  const InequalityReport h0 = harnack_check(base, Family::dho, spec.mult, tuples, HarnackVariant::sharp);
  const InequalityReport c0 = log_convexity_check(base, spec, 0.7, segments);
  for (double c : {1e-6, 1e6}) {
    const LogSolution scaled = [&](double t, const Point& x) { return base(t, x) + std::log(c); };
    const InequalityReport h = harnack_check(scaled, Family::dho, spec.mult, tuples, HarnackVariant::sharp);
    const InequalityReport l = log_convexity_check(scaled, spec, 0.7, segments);
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      CHECK(std::abs(h.records[i].margin - h0.records[i].margin) < 1e-10);
      CHECK(std::abs(l.records[i].margin - c0.records[i].margin) < 1e-10);
    }
  }
}

TEST_CASE("log-convexity") {
  SUBCASE("Gaussian ratio is affine") {
    const KernelSpec g = make_spec(Family::dunkl_heat, Multiplicity::uniform(2, 0.0));
    const InequalityReport r =
        log_convexity_check(log_kernel_solution(g, {0.5, -1.0}), g, 0.6, random_segments(2, 100, 8));
    CHECK(r.passed());
    for (const auto& rec : r.records) CHECK(std::abs(rec.margin) < 1e-10);
  }
  SUBCASE("single-point segment is an equality") {
    const KernelSpec spec = make_spec(Family::dho, Multiplicity({1.0}));
    const InequalityReport r =
        log_convexity_check(log_kernel_solution(spec, {0.5}), spec, 0.6, {Segment{{1.1}, {1.1}, 0.3}});
    CHECK(std::abs(r.records[0].margin) < 1e-12);
  }
  SUBCASE("oscillator slice with kappa = 1") {
    const KernelSpec spec = make_spec(Family::dho, Multiplicity({1.0}));
    CHECK(log_convexity_check(log_kernel_solution(spec, {-0.9}), spec, 0.6, random_segments(1, 200, 2)).passed());
  }
}

TEST_CASE("gradient form on kernel jets") {
  SUBCASE("Gaussian slice is an equality") {
    const KernelSpec g = make_spec(Family::dunkl_heat, Multiplicity::uniform(2, 0.0));
    const SolutionJet j = kernel_jet(g, 0.8, {0.3, -1.0}, {1.2, 0.4});
    const double lhs = j.grad_norm2_over_u2() - j.dt / j.value;
    CHECK(std::abs(lhs - liyau_beta(Family::dunkl_heat, g.mult, 0.8)) < 1e-8);
  }
  SUBCASE("oscillator slice") {
    const KernelSpec s = make_spec(Family::dho, Multiplicity({0.9, 0.2}));
    const Point x{0.7, -1.4};
    const SolutionJet j = kernel_jet(s, 0.5, x, {-0.6, 2.0});
    const double lhs = j.grad_norm2_over_u2() - j.dt / j.value;
    CHECK(lhs <= liyau_beta(Family::dho, s.mult, 0.5) + x[0] * x[0] + x[1] * x[1] + 1e-8);
  }
}

TEST_CASE("transfer to solutions") {
  Rng rng(99);
  const KernelSpec spec = make_spec(Family::dho, Multiplicity({1.0}));
  const Solution u(random_mixture(1, rng), spec);
  const GridSpec g = random_grid(1, {0.1, 0.5, 2.0}, 20, 4);
  CHECK(solution_liyau_check(u, g).passed());
  CHECK(gradient_form_check(u, g).passed());
  CHECK(pi_log_check(u, g).passed());
}

TEST_CASE("chain rule for Dunkl Laplacians") {
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    const int d = 1 + i % 3;
    const ScalarField f = random_positive_field(d, rng);
    const Multiplicity m = Multiplicity::uniform(d, rng.uniform(0.1, 2.0));
    const Point x = rng.point(d, 2.0, 1e-2);
    for (const Psi& psi : {Psi::log(), Psi::square(), Psi::identity()}) {
      const ChainRuleResult c = chain_rule_residual(f, psi, x, m);
      CHECK(c.residual < 1e-6);
      if (psi.name == "log") CHECK(c.pi <= 0.0);
    }
    CHECK(invariant_chain_rule_residual(random_radial_field(rng), Psi::log(), x, m) < 1e-6);
  }
}
