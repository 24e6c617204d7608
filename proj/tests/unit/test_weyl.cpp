#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "weyl_lab/errors.hpp"
#include "weyl_lab/lattice.hpp"
#include "weyl_lab/weyl.hpp"

using namespace weyl_lab;
using namespace weyl_lab::weyl;

TEST_CASE("grids") {
  const auto g = geometric_grid(10.0, 1000.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 10.0);
  CHECK(g.back() == doctest::Approx(1000.0));
  CHECK(g[2] == doctest::Approx(100.0));
  const auto l = geometric_ladder(16.0, 512.0, 2.0);
  CHECK(l == std::vector<double>{16, 32, 64, 128, 256, 512});
}

TEST_CASE("free remainder series") {
  const auto s = build_series(2, geometric_grid(10.0, 1000.0, 300));
  bool pos = false, neg = false;
  for (std::size_t i = 0; i < s.lambda.size(); ++i) {
    CHECK(s.remainder[i] == static_cast<double>(s.counts[i]) - s.main[i]);
    CHECK(std::isfinite(s.remainder[i]));
    pos |= s.remainder[i] > 0;
    neg |= s.remainder[i] < 0;
    if (i) CHECK(s.lambda[i] > s.lambda[i - 1]);
  }
  CHECK(pos);
  CHECK(neg);

  const auto one = build_series(1, geometric_grid(1.0, 5000.0, 500));
  for (double r : one.remainder) CHECK(std::abs(r) <= 2.0);
  CHECK(build_series(3, {60.0}).counts[0] == oracle::free_count(3, 60.0));
}

TEST_CASE("galerkin series respects the reliable band") {
  const auto F = galerkin::free_spectrum(2, 8);
  const auto s = build_series(F, {10.0, 20.0});
  CHECK(s.counts[0] == lattice::count_free(2, 10.0));
  CHECK(s.source == CountSource::galerkin);
  CHECK_THROWS_AS(build_series(F, {F.reliable_band + 1}), PreconditionError);
}

TEST_CASE("exponent fits") {
  std::vector<double> lam, r;
  for (double l = 10; l <= 1000; l *= 1.02) {
    lam.push_back(l);
    r.push_back(std::pow(l, 0.63));
  }
  CHECK(fit_exponent(lam, r, 10, 1000).slope == doctest::Approx(0.63).epsilon(0.02 / 0.63));

  gen::Gen g(71);
  for (int trial = 0; trial < 10; ++trial) {
    const double e = g.uniform(0.2, 2.0);
    std::vector<double> rr;
    for (double l : lam) rr.push_back((g.coin() ? 1 : -1) * std::pow(l, e));
    CHECK(std::abs(fit_exponent(lam, rr, 10, 1000).slope - e) <= 0.02);
  }

  const auto s = build_series(2, geometric_grid(10.0, 2000.0, 4000));
  const auto fit = fit_exponent(s, 10.0, 2000.0);
  CHECK(fit.slope <= 1.0);
  CHECK(fit.bin_max.size() >= 7);

  CHECK_THROWS_AS(fit_exponent({10, 20, 30}, {1, 1, 1}, 10, 30), InsufficientData);
  std::vector<double> zeros(lam.size(), 0.0);
  CHECK_THROWS_AS(fit_exponent(lam, zeros, 10, 1000), InsufficientData);
}

TEST_CASE("band experiments") {
  const auto ladder = geometric_ladder(16.0, 512.0, std::pow(2.0, 0.25));
  const auto power = band_experiment(2, ladder, WidthRule::power, 1.0 / 3);
  CHECK(std::isfinite(power.max_normalized));
  CHECK(power.max_normalized > 0);
  for (const auto& row : power.rows) {
    CHECK(row.width == doctest::Approx(std::pow(row.lambda, -1.0 / 3)));
    CHECK(row.count == lattice::band_count_free(2, row.lambda, row.width));
    CHECK(row.normalized == row.per_power);
  }

  const auto fixed = band_experiment(2, ladder, WidthRule::fixed, 0.5);
  CHECK(fixed.onset >= 16.0);
  CHECK(fixed.onset <= 512.0);

  const auto F = galerkin::free_spectrum(2, 12);
  const auto unit = band_experiment(F, {5.0, 10.0, 20.0}, WidthRule::unit, 0.0);
  for (const auto& row : unit.rows) CHECK(row.count == galerkin::band_trace(F, row.lambda).count);

  CHECK(band_width(WidthRule::inverse_log, 0.0, std::exp(2.0)) == doctest::Approx(0.5));
  for (auto r : {WidthRule::fixed, WidthRule::power, WidthRule::inverse_log, WidthRule::unit})
    CHECK(width_rule_from_name(width_rule_name(r)) == r);
}

TEST_CASE("torus bootstrap") {
  const auto s3 = bootstrap_torus(3);
  REQUIRE(s3.iterates.size() >= 3);
  CHECK(s3.iterates[0] == -1.0);
  CHECK(s3.iterates[1] == 0.25);
  CHECK(s3.iterates[2] == 0.5);
  CHECK(s3.converged);
  CHECK(s3.fixed_point == 0.5);
  CHECK(bootstrap_torus(2).fixed_point == doctest::Approx(1.0 / 3).epsilon(1e-15));

  for (int n = 2; n <= 8; ++n) {
    const auto s = bootstrap_torus(n);
    const double a = static_cast<double>(n - 1) / (n + 1);
    CHECK(s.converged);
    CHECK(std::abs(s.fixed_point - a) <= 1e-14);
    // The monotone phase lasts at most iteration_bound steps; one more lands on a.
    std::size_t first = 0;
    while (s.iterates[first] != s.fixed_point) ++first;
    CHECK(static_cast<int>(first) <= s.iteration_bound + 1);
    for (std::size_t m = 1; m < s.iterates.size(); ++m) {
      CHECK(s.iterates[m] >= s.iterates[m - 1]);
      CHECK(s.iterates[m] <= a + 1e-15);
      if (s.iterates[m - 1] <= static_cast<double>(n - 5) / (n + 1))
        CHECK(s.iterates[m] - s.iterates[m - 1] >= 4.0 / (n + 1) - 1e-15);
    }
  }
}

TEST_CASE("n5 bootstrap closed form") {
  const auto s = bootstrap_n5(-1.0, {1e-14, 200, 60});
  REQUIRE(s.iterates.size() >= 61);
  CHECK(s.iterates[1] == 0.0);
  CHECK(s.iterates[2] == 0.5);
  CHECK(s.iterates[3] == 0.75);
  for (int m = 0; m <= 60; ++m) {
    CHECK(s.iterates[static_cast<std::size_t>(m)] == 1.0 - std::ldexp(1.0, 1 - m));
    CHECK(s.iterates[static_cast<std::size_t>(m)] <= 1.0);
  }
  CHECK(s.a == 1.0);
}

TEST_CASE("lp bootstrap") {
  const auto s = bootstrap_lp(3, 2.0);
  CHECK(s.converged);
  CHECK(s.fixed_point == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(lp_k(3, 0.0, 2.0) == doctest::Approx(1.25));
  CHECK(lp_k(3, 0.5, 2.0) == doctest::Approx(1.0));
  CHECK(s.mu > 0.0);
  CHECK_THROWS_AS(bootstrap_lp(3, 6.0 / 5), PreconditionError);
  CHECK_THROWS_AS(bootstrap_lp(3, 1.1), PreconditionError);
  CHECK(lp_k(3, 0.0, 1e6) < lp_k(3, 0.0, 2.0));
  for (int n = 3; n <= 8; ++n)
    for (double p : {2.0, 3.0, 10.0}) CHECK(bootstrap_lp(n, p).fixed_point == doctest::Approx(bootstrap_torus(n).fixed_point).epsilon(1e-14));
  const auto two = bootstrap_lp(2, 2.0);
  CHECK(two.iterates[0] == 0.0);
  CHECK(two.fixed_point == doctest::Approx(1.0 / 3).epsilon(1e-14));
  for (auto v : {BootstrapVariant::torus, BootstrapVariant::n5, BootstrapVariant::lp}) CHECK(variant_from_name(variant_name(v)) == v);
}

TEST_CASE("reference remainders") {
  const auto r5 = reference_remainders(5);
  CHECK(r5.exponent() == 3.0);
  CHECK(r5.log_power() == 0.0);
  const auto r2 = reference_remainders(2);
  CHECK(r2.exponent_num == 131);
  CHECK(r2.exponent_den == 208);
  CHECK(r2.log_num == 18627);
  CHECK(r2.log_den == 8320);
  const auto r3 = reference_remainders(3);
  CHECK(r3.exponent_num == 21);
  CHECK(r3.exponent_den == 16);
  CHECK(r3.epsilon);
  const auto r4 = reference_remainders(4);
  CHECK(r4.exponent() == 2.0);
  CHECK(r4.log_power() == doctest::Approx(2.0 / 3));
  CHECK(reference_remainders(8).exponent() == 6.0);
  CHECK_THROWS(reference_remainders(9));
}

TEST_CASE("constant potential counting on free-exact counts") {
  gen::Gen g(72);
  for (int i = 0; i < 200; ++i) {
    const double c = g.uniform(0.0, 50.0), l = g.uniform(std::sqrt(c + 1), 300.0);
    // N_{V = c}(l) counts 4 pi^2 |k|^2 + 1 + c <= l^2.
    long M = 0;
    while (4 * M_PI * M_PI * (M + 1) + 1 + c <= l * l) ++M;
    const auto want = 4 * M_PI * M_PI * M + 1 + c <= l * l ? oracle::ball_count(2, M) : 0;
    CHECK(lattice::count_free(2, std::sqrt(l * l - c)) == want);
  }
}
