#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hankel/errors.hpp"
#include "hankel/spectral.hpp"
#include "oracles.hpp"

using namespace hankel;

namespace {

MomentSequence seq(std::vector<double> v) {
  MomentSequence q;
  q.values = std::move(v);
  return q;
}

}  // namespace

TEST_CASE("section_spectrum examples") {
  for (std::size_t n : {2, 5, 16}) {
    const auto top = section_spectrum(hankel_section(families::all_ones(2 * n), n, 0), 2);
    REQUIRE(top.size() == 2);
    CHECK(top[0] == doctest::Approx(double(n)).epsilon(1e-14));
    CHECK(std::abs(top[1]) <= 1e-12 * n);
  }

  std::vector<double> delta(9, 0.0);
  delta[0] = 1.0;
  CHECK(section_spectrum(hankel_section(seq(delta), 5, 0), 1) == std::vector<double>{1.0});

  const auto hilbert = [](int k) { return 1.0 / (k + 1.0); };
  const auto oracle_eigs = oracle::jacobi_eigenvalues(oracle::hankel_matrix(hilbert, 5));
  CHECK(oracle_eigs.back() == doctest::Approx(1.56705069109823).epsilon(1e-12));
  const auto top = section_spectrum(hankel_section(families::hilbert(9), 5, 0), 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(top[i] == doctest::Approx(oracle_eigs[4 - i]).epsilon(1e-9));
    if (i > 0) CHECK(top[i] <= top[i - 1]);
  }
}

TEST_CASE("section_spectrum rejects bad requests") {
  const HankelSection h = hankel_section(families::hilbert(9), 5, 0);
  CHECK_THROWS_AS(section_spectrum(h, 6), ArgumentError);
  const HankelSection indefinite = hankel_section(seq({1, 0, -1}), 2, 0);
  CHECK_THROWS_AS(section_spectrum(indefinite, 1), ArgumentError);
}

TEST_CASE("norm_profile of the all-ones sequence") {
  const std::vector<std::size_t> orders{8, 16, 32, 64};
  const SpectralProfile p = norm_profile(families::all_ones(127), orders, 3);
  for (std::size_t i = 0; i < orders.size(); ++i) CHECK(p.norms[i] == doctest::Approx(double(orders[i])).epsilon(1e-13));
  CHECK(p.growth_fit == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.monotone);
  CHECK(p.top_eigenvalues[0].size() == 3);
}

TEST_CASE("norm_profile of the Hilbert sequence stays below pi") {
  const std::vector<std::size_t> orders{8, 16, 32, 64, 128, 256};
  const SpectralProfile p = norm_profile(families::hilbert(511), orders);
  for (std::size_t i = 0; i < orders.size(); ++i) {
    CHECK(p.norms[i] <= std::numbers::pi);
    if (i > 0) CHECK(p.norms[i] > p.norms[i - 1]);
  }
  CHECK(p.monotone);
  // Slow logarithmic creep, far below the unit slope of unbounded growth.
  CHECK(p.growth_fit > 0.0);
  CHECK(p.growth_fit < 0.1);
}

TEST_CASE("norm_profile of the compact family converges") {
  const std::vector<std::size_t> orders{32, 64, 128, 256};
  const SpectralProfile p = norm_profile(families::compact(511), orders, 10);
  double prev_change = INFINITY;
  for (std::size_t i = 1; i < orders.size(); ++i) {
    const double change = (p.norms[i] - p.norms[i - 1]) / p.norms[i];
    CHECK(change >= 0.0);
    CHECK(change < prev_change);
    prev_change = change;
  }
  CHECK(prev_change < 1e-5);
  const auto& top = p.top_eigenvalues.back();
  CHECK(top[9] < 1e-3 * top[0]);
}

TEST_CASE("norm_profile of the slow family grows") {
  const std::vector<std::size_t> orders{16, 64, 256};
  const SpectralProfile p = norm_profile(families::slow(511), orders);
  CHECK(p.growth_fit > 0.3);
}

TEST_CASE("property: bounded measures have flat profiles") {
  // Each of these has M((1-eps, 1)) = O(eps) at both ends. Densities that
  // vanish at the endpoints flatten early; for the others the norm creeps
  // towards its limit like 1/log^2 N, so the slope only drops under 0.05
  // once the top orders reach the hundreds.
  const std::vector<std::size_t> small{16, 32, 64, 128};
  for (const Measure& m : {Measure::compact(), Measure::inverse_square(),
                           Measure({}, {{-1.0, 1.0, Expr::parse("1 - x^2")}})}) {
    const SpectralProfile p = norm_profile(moments(m, 255), small);
    CHECK(p.monotone);
    CHECK(p.growth_fit <= 0.05);
  }
  const std::vector<std::size_t> large{256, 512, 1024};
  for (const Measure& m : {Measure::lebesgue01(), Measure({}, {{-1.0, 1.0, Expr::parse("1 + x/2")}})}) {
    const SpectralProfile p = norm_profile(moments(m, 2047), large);
    CHECK(p.monotone);
    CHECK(p.growth_fit <= 0.05);
  }
}

TEST_CASE("property: norms are non-decreasing for measure sequences") {
  const std::vector<std::size_t> orders{4, 8, 12, 16, 24, 32};
  for (const Measure& m : {Measure::point_mass(-0.5), Measure::point_mass(1.0), Measure::slow(),
                           Measure({{0.2, 1.0}}, {{-0.5, 0.9, Expr::parse("exp(x)")}})}) {
    const SpectralProfile p = norm_profile(moments(m, 63), orders);
    for (std::size_t i = 1; i < orders.size(); ++i) CHECK(p.norms[i - 1] <= p.norms[i] + 1e-10);
  }
}

TEST_CASE("norm_profile validation") {
  const std::vector<std::size_t> unsorted{16, 8};
  CHECK_THROWS_AS(norm_profile(families::hilbert(64), unsorted), ArgumentError);
  const std::vector<std::size_t> too_big{64};
  CHECK_THROWS_AS(norm_profile(families::hilbert(64), too_big), ArgumentError);
}

TEST_CASE("fit_slope") {
  const std::vector<double> xs{1, 2, 3, 4};
  const std::vector<double> ys{3, 5, 7, 9};
  CHECK(fit_slope(xs, ys) == doctest::Approx(2.0));
}
