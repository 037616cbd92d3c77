#include <doctest.h>

#include <cmath>
#include <numbers>
#include <limits>
#include <random>

#include "hankel/errors.hpp"
#include "hankel/operators.hpp"
#include "hankel/special_functions.hpp"
#include "oracles.hpp"

using namespace hankel;

namespace {

CoeffVector random_coeffs(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  CoeffVector g;
  g.g.resize(k);
  for (double& x : g.g) x = unit(rng);
  return g;
}

std::vector<Measure> test_measures() {
  return {Measure::lebesgue01(), Measure::compact(), Measure::point_mass(-0.5, 2.0),
          Measure({{0.3, 0.5}, {-0.7, 0.25}}, {{-1.0, 1.0, Expr::parse("1 - x^2")}})};
}

Measure unit_density(double a, double b) { return Measure({}, {{a, b, Expr::constant(1.0)}}); }

}  // namespace

TEST_CASE("eval_power_series examples") {
  CHECK(eval_power_series({{1.0}}, 0.7) == 1.0);
  CHECK(eval_power_series({{1, 1, 1, 1}}, 0.5) == 15.0 / 8.0);
  CHECK(eval_power_series({{0, 1}}, -1.0) == -1.0);
  CHECK(eval_power_series({{}}, 0.3) == 0.0);
  CHECK_THROWS_AS(eval_power_series({{1.0}}, 1.5), ArgumentError);
  CHECK(power_series_expr({{1, 2}})(3.0) == 7.0);
}

TEST_CASE("form_direct examples") {
  const MomentSequence leb = families::hilbert(8);
  CHECK(form_direct(leb, {{1.0}}) == 1.0);
  CHECK(form_direct(leb, {{1.0, 1.0}}) == doctest::Approx(7.0 / 3.0).epsilon(1e-15));
  CHECK(form_direct(families::all_ones(8), {{1.0, -1.0}}) == 0.0);
  CHECK_THROWS_AS(form_direct(families::hilbert(4), {{1, 1, 1}}), ArgumentError);
}

TEST_CASE("form_integral examples") {
  CHECK(form_integral(Measure::lebesgue01(), {{1.0, 1.0}}) == doctest::Approx(7.0 / 3.0).epsilon(1e-13));
  CHECK(form_integral(Measure::point_mass(1.0), {{1.0, -1.0}}) == 0.0);
  CHECK(form_integral(Measure::compact(), {{0.0, 1.0}}) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
}

TEST_CASE("property: form identity and non-negativity") {
  std::mt19937_64 rng(3);
  for (const Measure& m : test_measures()) {
    const MomentSequence q = moments(m, 63);
    for (int trial = 0; trial < 25; ++trial) {
      const CoeffVector g = random_coeffs(rng, 1 + rng() % 32);
      const double direct = form_direct(q, g);
      CHECK(std::abs(direct - form_integral(m, g)) <= 1e-9 * (1.0 + std::abs(direct)));
      CHECK(direct >= -1e-10);
    }
  }
}

TEST_CASE("form on long geometric coefficients beyond finite support") {
  // g_n = r^n with r^K negligible: the closure value is int (1 - r mu)^{-2} dmu = 1/(1-r).
  const double r = 0.9;
  CoeffVector g;
  for (int n = 0; n < 400; ++n) g.g.push_back(std::pow(r, n));
  const double closed = 1.0 / (1.0 - r);
  CHECK(form_integral(Measure::lebesgue01(), g) == doctest::Approx(closed).epsilon(1e-10));
  CHECK(form_direct(families::hilbert(799), g) == doctest::Approx(closed).epsilon(1e-10));
}

TEST_CASE("adjoint_moments examples") {
  const AdjointMoments leb = adjoint_moments(Measure::lebesgue01(), Expr::constant(1.0), 32);
  for (std::size_t n = 0; n < 32; ++n) CHECK(leb.values[n] == doctest::Approx(1.0 / (n + 1.0)).epsilon(1e-13));
  CHECK(leb.l2_decaying);

  const AdjointMoments atom = adjoint_moments(Measure::point_mass(1.0), Expr::variable(), 32);
  for (double v : atom.values) CHECK(v == 1.0);
  CHECK(atom.l2_partial_sum == 32.0);
  CHECK_FALSE(atom.l2_decaying);

  // Support within [-a, a]: |u_n| <= C a^n.
  const double a = 0.6;
  const AdjointMoments inner = adjoint_moments(unit_density(-a, a), Expr::constant(1.0), 40);
  for (std::size_t n = 0; n < 40; ++n) CHECK(std::abs(inner.values[n]) <= 2.0 * a * std::pow(a, n) * (1 + 1e-12));
  CHECK(inner.l2_decaying);
}

TEST_CASE("adjoint_moments from a grid function") {
  GridFunction u{{0.0, 0.5, 1.0}, {1.0, 1.0, 1.0}, GridDomain::mu_interval};
  const AdjointMoments r = adjoint_moments(Measure::lebesgue01(), u, 4);
  CHECK(r.values[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(r.values[3] == doctest::Approx(0.25).epsilon(1e-13));

  GridFunction bad{{0.0, 0.0}, {1.0, 1.0}, GridDomain::mu_interval};
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  GridFunction outside{{0.0, 2.0}, {1.0, 1.0}, GridDomain::mu_interval};
  CHECK_THROWS_AS(outside.validate(), ArgumentError);
}

TEST_CASE("property: adjoint duality") {
  std::mt19937_64 rng(5);
  const Expr u = Expr::parse("cos(2*x) + x^3");
  for (const Measure& m : test_measures()) {
    for (int trial = 0; trial < 10; ++trial) {
      const CoeffVector g = random_coeffs(rng, 1 + rng() % 24);
      const AdjointMoments um = adjoint_moments(m, u, g.size());
      double rhs = 0.0;
      for (std::size_t n = 0; n < g.size(); ++n) rhs += g.g[n] * um.values[n];
      const double lhs = m.integrate([&](double x) { return eval_power_series(g, x) * u(x); }, {});
      CHECK(std::abs(lhs - rhs) <= 1e-11 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("laplace examples") {
  LaplaceOptions compact;
  compact.support_end = 1.0;
  CHECK(laplace(Expr::parse("1"), 1.0, compact) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-13));
  CHECK(laplace(Expr::parse("1"), 0.0, compact) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(laplace(Expr::parse("exp(-t/2)"), 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(laplace(Expr::parse("(1 - t)*exp(-t/2)"), 1.5) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(laplace(Expr::parse("exp(-t/2)"), 0.0), DivergenceError);
  CHECK_THROWS_AS(laplace(Expr::parse("exp(-t/2)"), -1.0), DivergenceError);

  GridFunction box{{0.0, 1.0}, {1.0, 1.0}, GridDomain::t_halfline};
  CHECK(laplace(box, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-13));
}

TEST_CASE("laplace with a Laguerre envelope matches the closed form") {
  for (int n = 0; n <= 20; ++n) {
    CoeffVector g;
    g.g.assign(n + 1, 0.0);
    g.g[n] = 1.0;
    LaplaceOptions opts;
    opts.envelope = laguerre_envelope(g);
    for (double lambda : {0.1, 0.5, 1.0, 2.0, 10.0}) {
      const double numeric = laplace(laguerre_expand_U(g), lambda, opts);
      CHECK(std::abs(numeric - laguerre_laplace_closed(n, lambda)) <= 1e-9);
    }
  }
}

TEST_CASE("laplace_adjoint examples") {
  const Expr one = Expr::constant(1.0);
  CHECK(laplace_adjoint(Measure::point_mass(1.0), one, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(laplace_adjoint(unit_density(0.0, 1.0), one, 1.0) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-13));
  const Measure sigma = transport_to_sigma(Measure::point_mass(0.0));
  CHECK(laplace_adjoint(sigma, one, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(laplace_adjoint(Measure::point_mass(1.0), one, 0.0), ArgumentError);
}

TEST_CASE("mobius_V examples") {
  const Expr v = mobius_V(Expr::constant(1.0));
  for (double lambda : {0.0, 0.5, 1.0, 7.0}) CHECK(v(lambda) == doctest::Approx(1.0 / (lambda + 0.5)).epsilon(1e-15));
  // lambda = 1/2 evaluates u at mu = 0.
  CHECK(mobius_V(Expr::parse("x + 3"))(0.5) == doctest::Approx(3.0).epsilon(1e-15));

  const NormPair np = unitarity_norms(unit_density(-0.5, 0.5), Expr::variable());
  CHECK(std::abs(np.mu_side - 1.0 / 12.0) <= 1e-10);
  CHECK(std::abs(np.lambda_side - 1.0 / 12.0) <= 1e-10);
}

TEST_CASE("property: V is unitary under transport") {
  const std::vector<Expr> us = {Expr::constant(1.0), Expr::parse("x^2 - x"), Expr::parse("exp(x)"),
                                Expr::parse("sin(3*x)")};
  const std::vector<Measure> ms = {unit_density(-0.5, 0.5), Measure({}, {{0.0, 0.9, Expr::parse("1 - x")}}), Measure::point_mass(0.25),
                                   Measure({{-0.3, 1.0}}, {{-0.9, 0.9, Expr::parse("1 + x^2")}})};
  for (const Measure& m : ms) {
    for (const Expr& u : us) {
      const NormPair np = unitarity_norms(m, u);
      CHECK(std::abs(np.mu_side - np.lambda_side) <= 1e-9 * (1.0 + np.mu_side));
    }
  }
}

TEST_CASE("laguerre_expand_U examples") {
  const Expr u0 = laguerre_expand_U({{1.0}});
  CHECK(u0(2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(laguerre_norm_squared({{1.0}}) == doctest::Approx(1.0).epsilon(1e-12));

  const Expr u1 = laguerre_expand_U({{0.0, 1.0}});
  CHECK(u1(3.0) == doctest::Approx(-2.0 * std::exp(-1.5)).epsilon(1e-15));
  CHECK(laguerre_norm_squared({{0.0, 1.0}}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(laguerre_norm_squared({{1.0, 1.0}}) == doctest::Approx(2.0).epsilon(1e-12));

  // Cross term int L_0 L_1 e^{-t} dt vanishes.
  const double cross = integrate([](double t) { return (1.0 - t) * std::exp(-t); }, 0.0,
                                 std::numeric_limits<double>::infinity(), {});
  CHECK(std::abs(cross) <= 1e-12);
}

TEST_CASE("property: Parseval for U") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const CoeffVector g = random_coeffs(rng, 1 + rng() % 64);
    double sum = 0.0;
    for (double x : g.g) sum += x * x;
    CHECK(std::abs(sum - laguerre_norm_squared(g)) <= 1e-9);
  }
}

TEST_CASE("property: envelope bounds Ug") {
  std::mt19937_64 rng(13);
  const CoeffVector g = random_coeffs(rng, 40);
  const Expr ug = laguerre_expand_U(g);
  const auto env = laguerre_envelope(g);
  for (double t = 0.0; t < 200.0; t += 0.37) CHECK(std::abs(ug(t)) <= env(t) * (1.0 + 1e-12) + 1e-300);
}

TEST_CASE("intertwining examples") {
  const auto grid = default_lambda_grid();
  REQUIRE(grid.size() == 40);
  CHECK(grid.front() == doctest::Approx(0.05));
  CHECK(grid.back() == doctest::Approx(20.0));

  CHECK(verify_intertwining({{1.0}}, grid).max_abs_deviation <= 1e-10);

  const std::vector<double> one{1.0};
  const IntertwiningReport r = verify_intertwining({{0.0, 1.0}}, one);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].lhs == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
  CHECK(r.rows[0].rhs == doctest::Approx(2.0 / 9.0).epsilon(1e-10));

  std::mt19937_64 rng(17);
  std::vector<double> lambdas;
  for (int i = 0; i <= 20; ++i) lambdas.push_back(0.1 * std::pow(100.0, i / 20.0));
  for (int trial = 0; trial < 5; ++trial) {
    CHECK(verify_intertwining(random_coeffs(rng, 16), lambdas).max_abs_deviation <= 1e-8);
    CHECK(verify_intertwining(random_coeffs(rng, 32), lambdas).max_abs_deviation <= 1e-8);
  }

  const std::vector<double> bad{0.0};
  CHECK_THROWS_AS(verify_intertwining({{1.0}}, bad), ArgumentError);
}

TEST_CASE("intertwining on the image of a measure") {
  std::mt19937_64 rng(19);
  const Measure m({{0.3, 1.0}}, {{-0.8, 0.8, Expr::constant(1.0)}});
  const IntertwiningReport r = verify_intertwining(random_coeffs(rng, 12), m);
  CHECK(r.rows.size() == 17);
  CHECK(r.max_abs_deviation <= 1e-8);
  CHECK_THROWS_AS(verify_intertwining({{1.0}}, Measure::lebesgue01()), ArgumentError);
}
