#pragma once

#include <Eigen/Dense>

#include "weyl_lab/galerkin.hpp"

namespace weyl_lab::mollify {

/// Even bump: 1 on [-1/2, 1/2], 0 outside (-1, 1), rho(t) = s(2(1 - |t|)) between.
struct BumpRho {
  double operator()(double t) const;
};

BumpRho build_rho();

/// phi_1(s) = (1/pi) int_0^1 rho(u) cos(su) du, the inverse transform of rho.
double rho_transform(double s);
/// d/ds of rho_transform.
double rho_transform_derivative(double s);
/// int_0^x rho_transform(s) ds; odd, tends to 1/2.
double rho_transform_cumulative(double x);

/// chi = A phi^2 with phi the inverse transform of rho(4t); chi^ lives in [-1/2, 1/2].
class SchwartzChi {
public:
  SchwartzChi();

  double operator()(double tau) const;
  double amplitude() const { return amplitude_; }
  double transform_support() const { return 0.5; }
  /// int chi(tau) exp(-i t tau) d tau by quadrature over |tau| <= cutoff (real since chi is even).
  double transform(double t, double cutoff = 1200.0) const;

private:
  double amplitude_;
};

SchwartzChi build_chi();

/// 1~_lambda(tau) = (1/pi) int rho(t/T) sin(lambda t)/t cos(tau t) dt.
struct MollifiedIndicator {
  double lambda = 1.0;
  double T = 1.0;
  BumpRho rho;
};

/// Time-domain adaptive quadrature.
double smoothed_indicator(const MollifiedIndicator& mi, double tau, double abs_tol = 1e-10);
double smoothed_indicator_derivative(const MollifiedIndicator& mi, double tau, int order, double abs_tol = 1e-10);

/// Convolution form: Phi(T(tau + lambda)) - Phi(T(tau - lambda)) with Phi the cumulative transform.
double smoothed_indicator_convolution(const MollifiedIndicator& mi, double tau);
double smoothed_indicator_derivative_convolution(const MollifiedIndicator& mi, double tau, int order);

double chi_window(const SchwartzChi& chi, double lambda, double T, double tau);

struct DecayFit {
  double constant = 0.0; // max |target| (1 + T|lambda - tau|)^N over the grid
  double argmax_tau = 0.0;
  long points = 0;
};

/// order 0 fits 1_lambda - 1~_lambda; orders 1, 2 fit the derivatives.
DecayFit decay_fit(int order, double lambda, double T, int N);

struct TraceResult {
  double value = 0.0;
  bool reliable = true;
};

/// sum_k 1~_lambda(tau_k), convolution form.
TraceResult smoothed_trace(const galerkin::SpectralData& S, const MollifiedIndicator& mi);
double smoothed_trace(const Eigen::VectorXd& frequencies, const MollifiedIndicator& mi);

} // namespace weyl_lab::mollify
