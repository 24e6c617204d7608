#include "weyl_lab/mollify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "weyl_lab/errors.hpp"
#include "weyl_lab/numerics.hpp"

namespace weyl_lab::mollify {

using std::numbers::pi;

double BumpRho::operator()(double t) const {
  const double a = std::abs(t);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  return smooth_step(2.0 * (1.0 - a));
}

BumpRho build_rho() { return {}; }

namespace {

// Fixed composite rule on [1/2, 1]; rho is identically 1 on [0, 1/2].
struct TransitionRule {
  Eigen::VectorXd u;
  Eigen::VectorXd w_rho;   // w * rho(u)
  Eigen::VectorXd w_urho;  // w * u * rho(u)
};

const TransitionRule& transition_rule() {
  static const TransitionRule rule = [] {
    const CompositeRule c = composite_gauss_legendre(0.5, 1.0, 48, 16);
    TransitionRule r;
    r.u = c.nodes;
    r.w_rho.resize(c.nodes.size());
    r.w_urho.resize(c.nodes.size());
    const BumpRho rho;
    for (Eigen::Index i = 0; i < c.nodes.size(); ++i) {
      r.w_rho(i) = c.weights(i) * rho(c.nodes(i));
      r.w_urho(i) = r.w_rho(i) * c.nodes(i);
    }
    return r;
  }();
  return rule;
}

constexpr double kTableEnd = 1000.0; // phi_1 ~ 1e-16 beyond here
constexpr double kStep = 0.125;

// Phi, Phi' = phi_1 and Phi'' = phi_1' at the nodes s_i = i * kStep, for
// quintic Hermite interpolation of Phi in between.
struct CumulativeTable {
  std::vector<double> value, slope, curvature;
};

const CumulativeTable& cumulative_table() {
  static const CumulativeTable table = [] {
    const auto nodes = static_cast<std::size_t>(kTableEnd / kStep) + 1;
    const GaussLegendreRule rule = gauss_legendre(8);
    CumulativeTable t;
    t.value.resize(nodes);
    t.slope.resize(nodes);
    t.curvature.resize(nodes);
    CompensatedSum sum;
    for (std::size_t i = 0; i < nodes; ++i) {
      const double s = static_cast<double>(i) * kStep;
      if (i > 0) {
        const double c = s - 0.5 * kStep, h = 0.5 * kStep;
        for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) sum += h * rule.weights(q) * rho_transform(c + h * rule.nodes(q));
      }
      t.value[i] = sum.value();
      t.slope[i] = rho_transform(s);
      t.curvature[i] = rho_transform_derivative(s);
    }
    return t;
  }();
  return table;
}

double sinc_lambda(double lambda, double t) {
  const double x = lambda * t;
  if (std::abs(x) < 1e-4) return lambda * (1.0 - x * x / 6.0);
  return std::sin(x) / t;
}

QuadratureOptions time_options(double lambda, double tau, double abs_tol) {
  QuadratureOptions opt;
  opt.abs_tol = abs_tol;
  opt.max_panel_width = pi / (4.0 * (lambda + std::abs(tau)));
  return opt;
}

void check(const MollifiedIndicator& mi) {
  if (!(mi.lambda >= 1.0)) throw PreconditionError("mollified indicator needs lambda >= 1");
  if (!(mi.T >= 1.0)) throw PreconditionError("mollified indicator needs T >= 1");
}

} // namespace

double rho_transform(double s) {
  // Beyond the table range the true value is below 1e-16, under the rule's resolution.
  if (std::abs(s) >= kTableEnd) return 0.0;
  const TransitionRule& r = transition_rule();
  const double flat = std::abs(s) < 1e-8 ? 0.5 : std::sin(0.5 * s) / s;
  CompensatedSum sum;
  sum += flat;
  for (Eigen::Index i = 0; i < r.u.size(); ++i) sum += r.w_rho(i) * std::cos(s * r.u(i));
  return sum.value() / pi;
}

double rho_transform_derivative(double s) {
  if (std::abs(s) >= kTableEnd) return 0.0;
  const TransitionRule& r = transition_rule();
  // -(1/pi) int_0^{1/2} u sin(su) du in closed form, then the transition part.
  double flat;
  if (std::abs(s) < 1e-4) {
    flat = -s / 24.0;
  } else {
    const double h = 0.5 * s;
    flat = -(std::sin(h) - h * std::cos(h)) / (s * s);
  }
  CompensatedSum sum;
  sum += flat;
  for (Eigen::Index i = 0; i < r.u.size(); ++i) sum += -r.w_urho(i) * std::sin(s * r.u(i));
  return sum.value() / pi;
}

double rho_transform_cumulative(double x) {
  if (x < 0.0) return -rho_transform_cumulative(-x);
  const CumulativeTable& t = cumulative_table();
  if (x >= kTableEnd) return t.value.back();
  const auto i = static_cast<std::size_t>(x / kStep);
  const double h = kStep;
  const double u = (x - static_cast<double>(i) * h) / h;
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
  // Quintic Hermite basis on [0, 1].
  const double h00 = 1 - 10 * u3 + 15 * u4 - 6 * u5;
  const double h10 = u - 6 * u3 + 8 * u4 - 3 * u5;
  const double h20 = 0.5 * (u2 - 3 * u3 + 3 * u4 - u5);
  const double h01 = 10 * u3 - 15 * u4 + 6 * u5;
  const double h11 = -4 * u3 + 7 * u4 - 3 * u5;
  const double h21 = 0.5 * (u3 - 2 * u4 + u5);
  return h00 * t.value[i] + h10 * h * t.slope[i] + h20 * h * h * t.curvature[i] + h01 * t.value[i + 1] +
         h11 * h * t.slope[i + 1] + h21 * h * h * t.curvature[i + 1];
}

SchwartzChi::SchwartzChi() {
  const double phi1 = rho_transform(0.25) / 4.0;
  amplitude_ = 2.0 / (phi1 * phi1);
}

double SchwartzChi::operator()(double tau) const {
  // phi(tau) = (1/2pi) int rho(4t) e^{i t tau} dt = rho_transform(tau / 4) / 4.
  const double phi = rho_transform(0.25 * tau) / 4.0;
  return amplitude_ * phi * phi;
}

double SchwartzChi::transform(double t, double cutoff) const {
  QuadratureOptions opt;
  opt.abs_tol = 1e-10;
  opt.max_panel_width = std::min(2.0, pi / (2.0 * (std::abs(t) + 0.5)));
  const auto f = [&](double tau) { return (*this)(tau)*std::cos(t * tau); };
  return 2.0 * integrate(f, 0.0, cutoff, opt).value;
}

SchwartzChi build_chi() { return SchwartzChi(); }

double smoothed_indicator(const MollifiedIndicator& mi, double tau, double abs_tol) {
  check(mi);
  const auto f = [&](double t) { return mi.rho(t / mi.T) * sinc_lambda(mi.lambda, t) * std::cos(tau * t); };
  return (2.0 / pi) * integrate(f, 0.0, mi.T, time_options(mi.lambda, tau, abs_tol)).value;
}

double smoothed_indicator_derivative(const MollifiedIndicator& mi, double tau, int order, double abs_tol) {
  check(mi);
  if (order == 0) return smoothed_indicator(mi, tau, abs_tol);
  if (order != 1 && order != 2) throw PreconditionError("derivative order must be 1 or 2");
  const auto f = [&](double t) {
    const double r = mi.rho(t / mi.T) * std::sin(mi.lambda * t);
    return order == 1 ? -r * std::sin(tau * t) : -r * t * std::cos(tau * t);
  };
  return (2.0 / pi) * integrate(f, 0.0, mi.T, time_options(mi.lambda, tau, abs_tol)).value;
}

double smoothed_indicator_convolution(const MollifiedIndicator& mi, double tau) {
  check(mi);
  return rho_transform_cumulative(mi.T * (tau + mi.lambda)) - rho_transform_cumulative(mi.T * (tau - mi.lambda));
}

double smoothed_indicator_derivative_convolution(const MollifiedIndicator& mi, double tau, int order) {
  check(mi);
  const double T = mi.T;
  switch (order) {
  case 0: return smoothed_indicator_convolution(mi, tau);
  case 1: return T * (rho_transform(T * (tau + mi.lambda)) - rho_transform(T * (tau - mi.lambda)));
  case 2:
    return T * T * (rho_transform_derivative(T * (tau + mi.lambda)) - rho_transform_derivative(T * (tau - mi.lambda)));
  default: throw PreconditionError("derivative order must be 0, 1 or 2");
  }
}

double chi_window(const SchwartzChi& chi, double lambda, double T, double tau) {
  if (!(T >= 1.0)) throw PreconditionError("chi window needs T >= 1");
  return chi(T * (lambda - tau)) + chi(T * (lambda + tau));
}

DecayFit decay_fit(int order, double lambda, double T, int N) {
  if (N < 0 || N > 6) throw PreconditionError("decay order N must be in 0..6");
  if (order < 0 || order > 2) throw PreconditionError("derivative order must be 0, 1 or 2");
  const MollifiedIndicator mi{lambda, T, {}};
  std::vector<double> grid;
  const int uniform = 2001;
  for (int i = 0; i < uniform; ++i) grid.push_back(1.0 + (4.0 * lambda - 1.0) * i / (uniform - 1));
  // Resolve the edge at the natural scale 1/T.
  const double reach = std::min(3.0 * lambda * T, 400.0);
  for (double u = 0.0; u <= reach; u += 0.25) {
    grid.push_back(lambda + u / T);
    if (u > 0.0) grid.push_back(lambda - u / T);
  }
  DecayFit fit;
  for (double tau : grid) {
    if (tau < 1.0 || tau > 4.0 * lambda) continue;
    double target = smoothed_indicator_derivative_convolution(mi, tau, order);
    if (order == 0) target = (tau <= lambda ? 1.0 : 0.0) - target;
    const double v = std::abs(target) * std::pow(1.0 + T * std::abs(lambda - tau), N);
    ++fit.points;
    if (v > fit.constant) {
      fit.constant = v;
      fit.argmax_tau = tau;
    }
  }
  return fit;
}

double smoothed_trace(const Eigen::VectorXd& frequencies, const MollifiedIndicator& mi) {
  CompensatedSum sum;
  for (Eigen::Index k = 0; k < frequencies.size(); ++k) {
    // Beyond the table the tail is below 1e-16.
    if (mi.T * (frequencies(k) - mi.lambda) >= kTableEnd) break;
    sum += smoothed_indicator_convolution(mi, frequencies(k));
  }
  return sum.value();
}

TraceResult smoothed_trace(const galerkin::SpectralData& S, const MollifiedIndicator& mi) {
  const double reach = mi.lambda + 3.0 / mi.T;
  return {smoothed_trace(S.frequencies, mi), reach <= S.reliable_band};
}

} // namespace weyl_lab::mollify
