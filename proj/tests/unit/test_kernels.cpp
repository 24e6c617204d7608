#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "weyl_lab/errors.hpp"
#include "weyl_lab/kernels.hpp"

using namespace weyl_lab;
using namespace weyl_lab::kernels;
namespace pot = weyl_lab::potentials;

namespace {

Eigen::VectorXd pt(double a, double b) {
  Eigen::VectorXd x(2);
  x << a, b;
  return x;
}

} // namespace

TEST_CASE("heat trace") {
  const auto F = galerkin::free_spectrum(2, 4);
  CHECK(heat_trace(F, 0.0) == doctest::Approx(static_cast<double>(F.size())));
  // Large t: the ground state dominates.
  CHECK(heat_trace(F, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

  const Eigen::VectorXd f = galerkin::free_frequencies(2, 40);
  const double t = 0.02;
  const double scaled = t * std::exp(t) * heat_trace(f, t);
  CHECK(std::abs(scaled * 4 * M_PI - 1) <= 0.05);
  // Theta-function oracle: the free trace factorizes per axis.
  CHECK(heat_trace(galerkin::free_frequencies(1, 60), t) == doctest::Approx(std::exp(-t) * oracle::theta(t, 60)).epsilon(1e-12));

  double prev = heat_trace(F, 0.0);
  for (double s = 0.01; s < 2; s *= 1.3) {
    const double v = heat_trace(F, s);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("heat kernel diagonal") {
  const auto F = galerkin::free_spectrum(2, 5);
  gen::Gen g(61);
  for (int i = 0; i < 10; ++i)
    CHECK(heat_kernel_diag(F, 0.05, g.point(2)) == doctest::Approx(heat_trace(F, 0.05)).epsilon(1e-12));

  const auto S = galerkin::diagonalize(galerkin::assemble(pot::indicator_well(2, -30.0, 0.0, 0.2), 5, 32));
  CHECK(heat_kernel_diag(S, 0.2, pt(0.0, 0.0)) > heat_kernel_diag(S, 0.2, pt(0.5, 0.5)));
  for (int i = 0; i < 30; ++i) CHECK(heat_kernel_diag(S, g.uniform(0.01, 3), g.point(2)) > -1e-8);

  std::vector<KernelSample> samples;
  for (double t : {0.05, 0.1, 0.2}) samples.push_back({KernelKind::heat, t, pt(0, 0), pt(0, 0), heat_kernel_diag(S, t, pt(0, 0)), heat_bound(2, t)});
  const double C = fit_constant(samples);
  for (const auto& s : samples) CHECK(s.value / s.bound_value >= C / 3);

  // Large-time decay against exp(-t/2).
  std::vector<KernelSample> late;
  for (double t : {1.5, 3.0, 6.0}) late.push_back({KernelKind::heat, t, pt(0, 0), pt(0, 0), heat_kernel_diag(S, t, pt(0, 0)), std::exp(-t / 2)});
  CHECK(fit_constant(late) == doctest::Approx(late[0].value / late[0].bound_value));
}

TEST_CASE("inverse power identity") {
  const auto S = galerkin::diagonalize(galerkin::assemble(pot::radial_power(2, -1.0, 1.0, 0.1), 4, 32));
  gen::Gen g(62);
  for (int i = 0; i < 5; ++i) {
    const int j = g.integer(1, 3);
    const auto r = inverse_power_kernel(S, j, g.point(2), g.point(2));
    CHECK(std::abs(r.difference) <= 1e-6);
    CHECK(r.tail_bound < 1e-14);
    CHECK(r.difference == std::abs(r.direct - r.integral));
  }
  CHECK_THROWS_AS(inverse_power_kernel(S, 0, pt(0, 0), pt(0, 0)), PreconditionError);
}

TEST_CASE("inverse power diagonal growth versus convergence") {
  Eigen::VectorXd o = Eigen::VectorXd::Zero(3);
  std::vector<double> j1, j2;
  for (int K : {2, 4, 6}) {
    const auto F = galerkin::free_spectrum(3, K);
    j1.push_back(inverse_power_kernel(F, 1, o, o).direct);
    j2.push_back(inverse_power_kernel(F, 2, o, o).direct);
  }
  CHECK(j1[2] - j1[1] > 0.5 * (j1[1] - j1[0]));
  CHECK(j2[2] - j2[1] < 0.5 * (j2[1] - j2[0]));
}

TEST_CASE("free inverse power sums") {
  Eigen::VectorXd d(1);
  d << 0.3;
  // 1-D closed form: sum_k cos(2 pi k d)/(4 pi^2 k^2 + 1) = cosh(1/2 - d)/(2 sinh(1/2)).
  CHECK(free_inverse_power_sum(1, 1, d) == doctest::Approx(std::cosh(0.5 - 0.3) / (2 * std::sinh(0.5))).epsilon(1e-10));
}

TEST_CASE("resolvent cutoff and kernel") {
  CHECK(resolvent_cutoff(2.0) == 0.0);
  CHECK(resolvent_cutoff(4.0) == 1.0);
  CHECK(resolvent_cutoff(3.0) == doctest::Approx(0.5));
  CHECK_THROWS(resolvent_kernel(2, 8, 1.0, pt(0, 0), pt(0.5, 0)));

  const auto F = galerkin::free_spectrum(2, 12);
  const double a = resolvent_kernel(F, 8.0, pt(0.1, 0.2), pt(0.6, 0.2));
  const double b = resolvent_kernel(2, 12, 8.0, pt(0.1, 0.2), pt(0.6, 0.2));
  CHECK(a == doctest::Approx(b).epsilon(1e-10));
  CHECK(a == doctest::Approx(2.573292e-3).epsilon(1e-4));
  // Translation invariance of the free kernel.
  CHECK(resolvent_kernel(2, 12, 8.0, pt(0.3, 0.7), pt(0.8, 0.7)) == doctest::Approx(a).epsilon(1e-10));
  CHECK(std::isfinite(resolvent_kernel(2, 12, 8.0, pt(0.1, 0.1), pt(0.1, 0.1))));
}

TEST_CASE("resolvent bound fit over separations") {
  std::vector<double> constants;
  for (double tau : {8.0, 16.0, 32.0}) {
    const int K = static_cast<int>(std::ceil(4 * tau / (2 * M_PI))) + 2;
    const auto modes = lattice::enumerate_modes(2, K);
    std::vector<KernelSample> samples;
    for (double r = 0.05; r <= 0.5 + 1e-12; r += 0.05) {
      const double v = resolvent_kernel(modes, 2, K, tau, pt(0, 0), pt(r, 0));
      samples.push_back({KernelKind::resolvent, tau, pt(0, 0), pt(r, 0), v, resolvent_bound(2, tau, r, 4)});
    }
    constants.push_back(fit_constant(samples));
  }
  const double hi = *std::max_element(constants.begin(), constants.end());
  const double lo = *std::min_element(constants.begin(), constants.end());
  CHECK(hi <= 3 * lo);
}

TEST_CASE("dyadic projector") {
  const auto F = galerkin::free_spectrum(2, 10);
  const auto r = dyadic_projector_sup(F, 8.0, 8);
  CHECK(r.sup == doctest::Approx(static_cast<double>(galerkin::count_in(F.frequencies, 8.0, 16.0))).epsilon(1e-10));
  CHECK(r.ratio == doctest::Approx(r.sup / 64.0));
  CHECK(dyadic_projector_sup(F, 0.4, 8).sup == 0.0);
  CHECK_FALSE(dyadic_projector_sup(F, 40.0, 4).reliable);

  const auto S = galerkin::diagonalize(galerkin::assemble(pot::radial_power(2, -1.0, 1.0, 0.05), 8, 64));
  double worst = 0.0;
  for (double l = 2.0; 2 * l <= S.reliable_band; l *= 2) worst = std::max(worst, dyadic_projector_sup(S, l, 12).ratio);
  CHECK(std::isfinite(worst));
  CHECK(worst < 10.0);
}

TEST_CASE("kind names") {
  CHECK(std::string(kind_name(KernelKind::heat)) == "heat");
  CHECK(std::string(kind_name(KernelKind::resolvent)) == "resolvent");
}
