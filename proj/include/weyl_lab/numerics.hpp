#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "weyl_lab/errors.hpp"

namespace weyl_lab {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
  CompensatedSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    return *this;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// C-infinity transition: 0 for x <= 0, 1 for x >= 1, built from exp(-1/x).
double smooth_step(double x);

struct GaussLegendreRule {
  Eigen::VectorXd nodes;   // on [-1, 1], ascending
  Eigen::VectorXd weights;
};

/// Golub–Welsch: eigen-decomposition of the Jacobi matrix.
GaussLegendreRule gauss_legendre(int order);

/// Composite Gauss–Legendre rule on [a, b] with `panels` equal panels.
struct CompositeRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
CompositeRule composite_gauss_legendre(double a, double b, int panels, int order = 16);

struct QuadratureOptions {
  double abs_tol = 1e-10;
  /// Upper bound on the initial panel width (oscillation-aware layouts set this).
  double max_panel_width = std::numeric_limits<double>::infinity();
  int max_depth = 40;
  long max_panels = 4'000'000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  long panels = 0;
};

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Gk15 {
  double value;
  double error;
  bool at_roundoff; // error is the rounding floor; bisecting cannot improve it
};

/// One Gauss–Kronrod 7/15 panel with the QUADPACK error scaling.
template <class F>
Gk15 gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const double sum = fv1[j] + fv2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  resk *= half;
  resg *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs(resk - resg);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
  bool at_roundoff = false;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon())) {
    at_roundoff = err <= roundoff;
    err = std::max(roundoff, err);
  }
  return {resk, err, at_roundoff};
}

} // namespace detail

/// Adaptive Gauss–Kronrod quadrature of f over [a, b].
///
/// The interval is first cut into equal panels no wider than
/// `max_panel_width`; each panel is bisected until its error estimate falls
/// under its share of `abs_tol` or hits the rounding floor. Throws QuadratureError when the depth or
/// panel budget runs out.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  QuadratureResult out;
  if (a == b) return out;
  const double length = std::abs(b - a);
  const long initial =
      std::max<long>(1, static_cast<long>(std::ceil(length / std::min(opt.max_panel_width, length))));
  struct Panel {
    double lo, hi;
    int depth;
  };
  std::vector<Panel> stack;
  CompensatedSum value, error;
  const double step = (b - a) / static_cast<double>(initial);
  for (long i = initial - 1; i >= 0; --i) {
    const double lo = a + step * static_cast<double>(i);
    const double hi = (i == initial - 1) ? b : a + step * static_cast<double>(i + 1);
    stack.push_back({lo, hi, 0});
  }
  bool exhausted = false;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const detail::Gk15 r = detail::gk15(f, p.lo, p.hi);
    ++out.panels;
    const double share = opt.abs_tol * std::abs(p.hi - p.lo) / length;
    if (r.error <= share || r.at_roundoff || p.depth >= opt.max_depth || out.panels >= opt.max_panels) {
      if (r.error > share && !r.at_roundoff) exhausted = true;
      value += r.value;
      error += r.error;
      continue;
    }
    const double mid = 0.5 * (p.lo + p.hi);
    stack.push_back({mid, p.hi, p.depth + 1});
    stack.push_back({p.lo, mid, p.depth + 1});
  }
  out.value = value.value();
  out.error = error.value();
  if (exhausted && out.error > opt.abs_tol)
    throw QuadratureError("adaptive quadrature did not converge", out.error);
  return out;
}

/// In-place n-dimensional DFT over a G^n periodic grid (axis 0 slowest).
/// Forward: X(m) = sum_i x(i) exp(-2 pi i m.i / G). Inverse includes the 1/G^n factor.
void fft_nd(std::vector<std::complex<double>>& data, int n, int G, bool inverse);

} // namespace weyl_lab
