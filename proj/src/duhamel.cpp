#include "weyl_lab/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "weyl_lab/errors.hpp"

namespace weyl_lab::duhamel {

using std::numbers::pi;

SpectralFunction indicator_function(const mollify::MollifiedIndicator& mi) {
  return {[mi](double tau) { return mollify::smoothed_indicator_convolution(mi, tau); },
          [mi](double tau) { return mollify::smoothed_indicator_derivative_convolution(mi, tau, 1); }};
}

double divided_difference(const DividedDifference& dd, double nu, double mu) {
  if (std::abs(nu - mu) <= dd.rel_tol * std::max(nu, mu)) {
    const double mid = 0.5 * (nu + mu);
    return dd.f.derivative(mid) / (nu + mu);
  }
  return (dd.f.value(nu) - dd.f.value(mu)) / ((nu - mu) * (nu + mu));
}

double trace_difference(const Eigen::VectorXd& nu, const Eigen::VectorXd& mu, const SpectralFunction& f) {
  CompensatedSum sum;
  for (Eigen::Index k = 0; k < mu.size(); ++k) sum += f.value(mu(k));
  for (Eigen::Index j = 0; j < nu.size(); ++j) sum += -f.value(nu(j));
  return sum.value();
}

namespace {

void check_pair(const galerkin::SpectralData& S_V, const galerkin::SpectralData& S_0) {
  if (S_V.n != S_0.n || S_V.K != S_0.K || S_V.size() != S_0.size())
    throw PreconditionError("spectra come from different truncations");
}

} // namespace

double trace_difference_direct(const galerkin::SpectralData& S_V, const galerkin::SpectralData& S_0,
                               const mollify::MollifiedIndicator& mi) {
  check_pair(S_V, S_0);
  return trace_difference(S_0.frequencies, S_V.frequencies, indicator_function(mi));
}

double trace_difference_duhamel(const galerkin::SpectralData& S_V, const galerkin::SpectralData& S_0,
                                const galerkin::DiscreteHamiltonian& H_V, const mollify::MollifiedIndicator& mi) {
  check_pair(S_V, S_0);
  if (H_V.size() != S_V.size()) throw PreconditionError("Hamiltonian does not match the perturbed spectrum");
  Eigen::MatrixXcd B = galerkin::potential_matrix(H_V);
  B.diagonal().array() += S_V.shift - S_0.shift;
  return duhamel_sum(S_0.frequencies, S_0.vectors, S_V.frequencies, S_V.vectors, B, {indicator_function(mi)});
}

bool identity_passes(double lhs, double rhs) { return std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(lhs)); }

ComparisonReport verify_identity(const galerkin::SpectralData& S_V, const galerkin::SpectralData& S_0,
                                 const galerkin::DiscreteHamiltonian& H_V, const mollify::MollifiedIndicator& mi) {
  ComparisonReport r;
  r.lambda = mi.lambda;
  r.T = mi.T;
  r.lhs = trace_difference_direct(S_V, S_0, mi);
  r.rhs = trace_difference_duhamel(S_V, S_0, H_V, mi);
  r.residual = std::abs(r.lhs - r.rhs);
  r.rows = S_0.size();
  r.cols = S_V.size();
  r.pass = identity_passes(r.lhs, r.rhs);
  return r;
}

TrigResiduals trig_identity_residuals(double t, double mu, double tau) {
  if (!(mu > 0.0) || !(tau > 0.0)) throw PreconditionError("trig identities need mu, tau > 0");
  TrigResiduals r;
  if (t == 0.0) return r;
  QuadratureOptions opt;
  opt.abs_tol = 1e-13;
  opt.max_panel_width = pi / (4.0 * (mu + tau));
  if (mu != tau) {
    const auto f = [&](double s) { return std::sin((t - s) * mu) / mu * std::cos(s * tau); };
    const double target = (std::cos(t * tau) - std::cos(t * mu)) / ((mu - tau) * (mu + tau));
    r.r1 = std::abs(integrate(f, 0.0, t, opt).value - target);
  }
  const auto g = [&](double s) { return std::sin((t - s) * tau) / tau * std::cos(s * tau); };
  r.r2 = std::abs(integrate(g, 0.0, t, opt).value - t * std::sin(t * tau) / (2.0 * tau));
  return r;
}

DeltaLemmaInstance random_delta_instance(std::mt19937_64& rng, int grid, int modes, double delta) {
  if (modes > grid) throw PreconditionError("more modes than grid points");
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  DeltaLemmaInstance inst;
  inst.grid = grid;
  inst.delta = delta;
  inst.a.resize(modes);
  inst.shifts.resize(modes);
  for (int k = 0; k < modes; ++k) {
    inst.a(k) = {normal(rng), normal(rng)};
    inst.shifts(k) = delta * uniform(rng);
  }
  Eigen::MatrixXcd raw(grid, modes);
  for (int i = 0; i < grid; ++i)
    for (int k = 0; k < modes; ++k) raw(i, k) = {normal(rng), normal(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(raw);
  inst.e = (qr.householderQ() * Eigen::MatrixXcd::Identity(grid, modes)) * std::sqrt(static_cast<double>(grid));

  // m(s, x) = c0 + c1 cos(2 pi x + p1) + s (c2 + c3 sin(2 pi x + p2)) + s^2 c4 cos(4 pi x)
  double c[5];
  for (double& ci : c) ci = normal(rng);
  const double p1 = 2 * pi * uniform(rng), p2 = 2 * pi * uniform(rng);
  inst.m = [=](double s, double x) {
    return c[0] + c[1] * std::cos(2 * pi * x + p1) + s * (c[2] + c[3] * std::sin(2 * pi * x + p2)) +
           s * s * c[4] * std::cos(4 * pi * x);
  };
  inst.dm_ds = [=](double s, double x) {
    return c[2] + c[3] * std::sin(2 * pi * x + p2) + 2.0 * s * c[4] * std::cos(4 * pi * x);
  };
  return inst;
}

DeltaLemmaResult delta_lemma_check(const DeltaLemmaInstance& inst) {
  const int G = inst.grid;
  const Eigen::Index modes = inst.a.size();
  const auto l2 = [&](const std::function<double(double, double)>& fn, double s) {
    double sum = 0.0;
    for (int i = 0; i < G; ++i) {
      const double v = fn(s, static_cast<double>(i) / G);
      sum += v * v;
    }
    return std::sqrt(sum / G);
  };

  CompensatedSum lhs;
  for (int i = 0; i < G; ++i) {
    const double x = static_cast<double>(i) / G;
    std::complex<double> v = 0.0;
    for (Eigen::Index k = 0; k < modes; ++k) v += inst.m(inst.shifts(k), x) * inst.a(k) * inst.e(i, k);
    lhs += std::abs(v) / G;
  }

  double path = 0.0;
  if (inst.delta > 0.0) {
    const CompositeRule rule = composite_gauss_legendre(0.0, inst.delta, 4, 16);
    for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) path += rule.weights(q) * l2(inst.dm_ds, rule.nodes(q));
  }
  DeltaLemmaResult r;
  r.lhs = lhs.value();
  r.rhs = (l2(inst.m, 0.0) + path) * inst.a.norm();
  r.ok = r.lhs <= r.rhs * (1.0 + 1e-8);
  return r;
}

} // namespace weyl_lab::duhamel
