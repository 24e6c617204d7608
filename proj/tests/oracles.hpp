// Independent reference computations for the unit and acceptance tests.
// Nothing here calls into the library; each routine is the slow, obvious
// version of a quantity the library computes another way.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// #{k in Z^n : |k|^2 <= M} by looping over the cube, n <= 3.
inline std::int64_t ball_count(int n, long M) {
  const int R = static_cast<int>(std::floor(std::sqrt(static_cast<double>(M)))) + 1;
  std::int64_t count = 0;
  const int lo2 = n >= 2 ? -R : 0, hi2 = n >= 2 ? R : 0;
  const int lo3 = n >= 3 ? -R : 0, hi3 = n >= 3 ? R : 0;
  for (int a = -R; a <= R; ++a)
    for (int b = lo2; b <= hi2; ++b)
      for (int c = lo3; c <= hi3; ++c)
        if (static_cast<long>(a) * a + static_cast<long>(b) * b + static_cast<long>(c) * c <= M) ++count;
  return count;
}

/// #{k in Z^n : |k|^2 = m}, n <= 3.
inline std::int64_t shell_count(int n, long m) { return ball_count(n, m) - (m > 0 ? ball_count(n, m - 1) : 0); }

/// #{k : 4 pi^2 |k|^2 + 1 <= lambda^2}, n <= 3.
inline std::int64_t free_count(int n, double lambda) {
  if (lambda < 1.0) return 0;
  const int R = static_cast<int>(lambda / (2 * pi)) + 1;
  std::int64_t count = 0;
  const int lo2 = n >= 2 ? -R : 0, hi2 = n >= 2 ? R : 0;
  const int lo3 = n >= 3 ? -R : 0, hi3 = n >= 3 ? R : 0;
  for (int a = -R; a <= R; ++a)
    for (int b = lo2; b <= hi2; ++b)
      for (int c = lo3; c <= hi3; ++c) {
        const double m = static_cast<double>(a * a + b * b + c * c);
        if (4 * pi * pi * m + 1 <= lambda * lambda) ++count;
      }
  return count;
}

/// 1-D count 2 floor(sqrt(lambda^2 - 1) / (2 pi)) + 1.
inline std::int64_t free_count_1d(double lambda) {
  if (lambda < 1.0) return 0;
  return 2 * static_cast<std::int64_t>(std::floor(std::sqrt(lambda * lambda - 1) / (2 * pi))) + 1;
}

/// exp(-1/x) smooth step and the bump built from it.
inline double step(double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const double g = std::exp(-1 / x), h = std::exp(-1 / (1 - x));
  return g / (g + h);
}
inline double rho(double t) {
  const double a = std::abs(t);
  return a <= 0.5 ? 1.0 : (a >= 1.0 ? 0.0 : step(2 * (1 - a)));
}

/// Composite Simpson on [a, b] with 2m panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, long m) {
  const double h = (b - a) / (2 * m);
  double s = f(a) + f(b);
  for (long i = 1; i < 2 * m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3;
}

/// (2/pi) int_0^T rho(t/T) sin(lambda t)/t cos(tau t) dt by fine Simpson.
inline double mollified_indicator(double lambda, double T, double tau, long m = 200000) {
  const auto f = [&](double t) {
    const double s = t == 0.0 ? lambda : std::sin(lambda * t) / t;
    return rho(t / T) * s * std::cos(tau * t);
  };
  return 2 / pi * simpson(f, 0.0, T, m);
}

/// Direct DFT V^(m) = G^-n sum_i V_i exp(-2 pi i m.x_i) for n = 1, 2 grids (axis 0 slowest).
inline std::complex<double> dft(const std::vector<double>& samples, int n, int G, const std::vector<int>& m,
                                double offset) {
  std::complex<double> sum = 0.0;
  const long total = static_cast<long>(samples.size());
  for (long flat = 0; flat < total; ++flat) {
    long rest = flat;
    double phase = 0.0;
    for (int axis = n - 1; axis >= 0; --axis) {
      const double x = (static_cast<double>(rest % G) + offset) / G;
      rest /= G;
      phase += m[static_cast<std::size_t>(axis)] * x;
    }
    sum += samples[static_cast<std::size_t>(flat)] * std::polar(1.0, -2 * pi * phase);
  }
  return sum / std::pow(static_cast<double>(G), n);
}

/// Integral of 1/|y| over the unit cube [-1/2, 1/2]^3: 3 log(2 + sqrt 3) - pi/2.
inline double cube_coulomb() { return 3 * std::log(2 + std::sqrt(3.0)) - pi / 2; }

/// Integral of log(2 + 1/|y|) over [-h/2, h/2]^2 in polar form, Simpson in both variables.
inline double square_log_kernel(double h) {
  const auto inner = [&](double theta) {
    const double R = h / (2 * std::cos(theta));
    const auto f = [&](double r) { return r == 0.0 ? 0.0 : r * std::log(2 + 1 / r); };
    return simpson(f, 0.0, R, 4000);
  };
  return 8 * simpson(inner, 0.0, pi / 4, 400);
}

/// 1-D theta sum sum_k exp(-4 pi^2 k^2 t) over |k| <= K.
inline double theta(double t, int K) {
  double s = 1.0;
  for (int k = 1; k <= K; ++k) s += 2 * std::exp(-4 * pi * pi * k * k * t);
  return s;
}

} // namespace oracle
