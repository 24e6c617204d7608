#include "weyl_lab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "weyl_lab/errors.hpp"
#include "weyl_lab/numerics.hpp"
#include "weyl_lab/potentials.hpp"

namespace weyl_lab::kernels {

using std::numbers::pi;

const char* kind_name(KernelKind kind) {
  switch (kind) {
  case KernelKind::heat: return "heat";
  case KernelKind::inverse_power: return "inverse_power";
  case KernelKind::resolvent: return "resolvent";
  case KernelKind::dyadic_projector: return "dyadic_projector";
  }
  return "unknown";
}

double fit_constant(const std::vector<KernelSample>& samples) {
  double c = 0.0;
  for (const auto& s : samples) c = std::max(c, std::abs(s.value) / s.bound_value);
  return c;
}

double heat_trace(const Eigen::VectorXd& frequencies, double t) {
  if (t < 0.0) throw PreconditionError("heat trace needs t >= 0");
  CompensatedSum sum;
  for (Eigen::Index k = 0; k < frequencies.size(); ++k) sum += std::exp(-t * frequencies(k) * frequencies(k));
  return sum.value();
}

double heat_trace(const galerkin::SpectralData& S, double t) { return heat_trace(S.frequencies, t); }

namespace {

// Re e_k(x) conj(e_k(y)) for every k.
Eigen::VectorXd pair_weights(const galerkin::SpectralData& S, const Eigen::Ref<const Eigen::VectorXd>& x,
                             const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::VectorXcd ex = galerkin::eigenfunction_values(S, x);
  const Eigen::VectorXcd ey = x == y ? ex : galerkin::eigenfunction_values(S, y);
  return (ex.array() * ey.array().conjugate()).real();
}

double weighted_heat(const Eigen::VectorXd& w, const Eigen::VectorXd& tau_sq, double t) {
  CompensatedSum sum;
  for (Eigen::Index k = 0; k < w.size(); ++k) sum += w(k) * std::exp(-t * tau_sq(k));
  return sum.value();
}

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

// theta(t, d) = sum_k exp(-4 pi^2 k^2 t) cos(2 pi k d) = sum_m (4 pi t)^{-1/2} exp(-(d - m)^2 / (4t)).
double theta(double t, double d) {
  if (t < 0.1) {
    d -= std::round(d);
    double sum = 0.0;
    for (int m = -6; m <= 6; ++m) sum += std::exp(-(d - m) * (d - m) / (4.0 * t));
    return sum / std::sqrt(4.0 * pi * t);
  }
  double sum = 1.0;
  for (int k = 1; k <= 8; ++k) sum += 2.0 * std::exp(-4.0 * pi * pi * k * k * t) * std::cos(2.0 * pi * k * d);
  return sum;
}

} // namespace

double heat_kernel(const galerkin::SpectralData& S, double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (t < 0.0) throw PreconditionError("heat kernel needs t >= 0");
  return weighted_heat(pair_weights(S, x, y), S.eigenvalues_sq, t);
}

double heat_kernel_diag(const galerkin::SpectralData& S, double t, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (t < 0.0) throw PreconditionError("heat kernel needs t >= 0");
  const Eigen::VectorXd w = galerkin::eigenfunction_values(S, x).cwiseAbs2();
  return weighted_heat(w, S.eigenvalues_sq, t);
}

InversePowerResult inverse_power_kernel(const galerkin::SpectralData& S, int j, const Eigen::Ref<const Eigen::VectorXd>& x,
                                        const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (j < 1) throw PreconditionError("inverse power needs j >= 1");
  const Eigen::VectorXd w = pair_weights(S, x, y);
  const Eigen::VectorXd& tau_sq = S.eigenvalues_sq;

  InversePowerResult r;
  CompensatedSum direct;
  for (Eigen::Index k = 0; k < w.size(); ++k) direct += w(k) * std::pow(tau_sq(k), -j);
  r.direct = direct.value();

  const double norm = 1.0 / factorial(j - 1);
  const auto f = [&](double t) { return norm * std::pow(t, j - 1) * weighted_heat(w, tau_sq, t); };
  QuadratureOptions opt;
  opt.abs_tol = 1e-11;

  // Geometric panels toward 0 resolve the fast modes; the last piece [0, t_min]
  // is tiny because the integrand is bounded there.
  const double t_min = 1e-3 / tau_sq.maxCoeff();
  CompensatedSum integral;
  double hi = 1.0;
  while (hi > t_min) {
    const double lo = 0.5 * hi;
    integral += integrate(f, lo, hi, opt).value;
    hi = lo;
  }
  integral += integrate(f, 0.0, hi, opt).value;

  // [1, t_end] with the tail bounded by exp(-tau_1^2 (t - 1)).
  const double w_abs = w.cwiseAbs().sum();
  const double tau1_sq = tau_sq.minCoeff();
  double t_end = 2.0;
  // For t >= j and tau1^2 >= 1: int_t^inf s^{j-1} e^{-a s} ds <= j t^{j-1} e^{-a t} / a.
  const auto tail = [&](double t) {
    return w_abs * std::exp(-tau1_sq * t) * std::pow(t, j - 1) * norm * j / tau1_sq;
  };
  while (tail(t_end) > 1e-14 || t_end < j) t_end *= 1.5;
  double lo = 1.0;
  while (lo < t_end) {
    const double next = std::min(t_end, lo + 4.0);
    integral += integrate(f, lo, next, opt).value;
    lo = next;
  }
  r.integral = integral.value();
  r.tail_bound = tail(t_end);
  r.difference = std::abs(r.direct - r.integral);
  return r;
}

double resolvent_cutoff(double s) { return smooth_step(0.5 * (s - 2.0)); }

double free_inverse_power_sum(int n, int p, const Eigen::Ref<const Eigen::VectorXd>& d) {
  if (p < 1) throw PreconditionError("inverse power needs p >= 1");
  double dist = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double di = std::abs(d(i) - std::round(d(i)));
    dist += di * di;
  }
  if (dist == 0.0 && 2 * p <= n) throw PreconditionError("lattice sum diverges on the diagonal for p <= n/2");
  const double norm = 1.0 / factorial(p - 1);
  const auto f = [&](double t) {
    double prod = std::pow(t, p - 1) * norm * std::exp(-t);
    for (int i = 0; i < n; ++i) prod *= theta(t, d(i));
    return prod;
  };
  QuadratureOptions opt;
  opt.abs_tol = 1e-13;
  CompensatedSum sum;
  // Dyadic pieces near 0, where theta switches to the image sum.
  double hi = 1.0;
  while (hi > 1e-6) {
    sum += integrate(f, 0.5 * hi, hi, opt).value;
    hi *= 0.5;
  }
  sum += integrate(f, 0.0, hi, opt).value;
  for (double lo = 1.0; lo < 60.0; lo += 4.0) sum += integrate(f, lo, lo + 4.0, opt).value;
  return sum.value();
}

double resolvent_kernel(const galerkin::SpectralData& S_0, double tau, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (S_0.shift != 0.0 || S_0.potential_sup != 0.0) throw PreconditionError("resolvent kernel takes the free spectrum");
  return resolvent_kernel(S_0.modes, S_0.n, S_0.K, tau, x, y);
}

double resolvent_kernel(int n, int K, double tau, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y) {
  return resolvent_kernel(lattice::enumerate_modes(n, K), n, K, tau, x, y);
}

double resolvent_kernel(const std::vector<lattice::LatticeMode>& modes, int n, int K, double tau,
                        const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (tau < 2.0) throw PreconditionError("resolvent kernel needs tau >= 2");
  if (!(lattice::free_frequency(static_cast<long>(K) * K) > 4.0 * tau))
    throw PreconditionError("truncation too small: need sqrt(4 pi^2 K^2 + 1) > 4 tau");
  const Eigen::VectorXd d = x - y;
  const double tau_sq = tau * tau;

  CompensatedSum sum;
  Eigen::Vector3d partial = Eigen::Vector3d::Zero();
  for (const auto& mode : modes) {
    const double c = std::cos(2.0 * pi * mode.k.cast<double>().dot(d));
    const double l2 = mode.eigenvalue_sq;
    const double eta = resolvent_cutoff(mode.frequency / tau);
    if (eta != 0.0) sum += eta / (l2 - tau_sq) * c;
    double inv = 1.0;
    for (int p = 0; p < 3; ++p) {
      inv /= l2;
      partial(p) += inv * c;
    }
  }
  if (potentials::periodic_distance(x, y) == 0.0) return sum.value();
  double weight = 1.0;
  for (int p = 1; p <= 3; ++p) {
    sum += weight * (free_inverse_power_sum(n, p, d) - partial(p - 1));
    weight *= tau_sq;
  }
  return sum.value();
}

DyadicResult dyadic_projector_sup(const galerkin::SpectralData& S, double lambda, int grid) {
  if (grid < 1) throw PreconditionError("grid must be positive");
  DyadicResult r;
  r.reliable = 2.0 * lambda <= S.reliable_band;
  const std::int64_t first = galerkin::count_at_most(S.frequencies, std::nextafter(lambda, 0.0));
  const std::int64_t last = galerkin::count_at_most(S.frequencies, std::nextafter(2.0 * lambda, 0.0));
  if (last > first) {
    const int n = S.n;
    long points = 1;
    for (int i = 0; i < n; ++i) points *= grid;
    Eigen::VectorXd x(n);
    for (long p = 0; p < points; ++p) {
      long rest = p;
      for (int i = n - 1; i >= 0; --i) {
        x(i) = static_cast<double>(rest % grid) / grid;
        rest /= grid;
      }
      const Eigen::VectorXcd e = galerkin::eigenfunction_values(S, x);
      r.sup = std::max(r.sup, e.segment(first, last - first).squaredNorm());
    }
  }
  r.ratio = r.sup / std::pow(lambda, S.n);
  return r;
}

double resolvent_bound(int n, double tau, double distance, int N) {
  return std::pow(tau, n - 2) * std::pow(1.0 + tau * distance, -N) * potentials::kato_kernel(n, tau * distance);
}

double heat_bound(int n, double t) { return std::pow(t, -0.5 * n); }

} // namespace weyl_lab::kernels
