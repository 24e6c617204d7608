#pragma once

#include <Eigen/Dense>

#include <vector>

#include "weyl_lab/galerkin.hpp"

namespace weyl_lab::kernels {

enum class KernelKind { heat, inverse_power, resolvent, dyadic_projector };

const char* kind_name(KernelKind kind);

/// One kernel evaluation next to the majorant it is compared with.
struct KernelSample {
  KernelKind kind = KernelKind::heat;
  double parameter = 0.0; // t, j, tau or lambda
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double value = 0.0;
  double bound_value = 1.0;
};

/// max |value| / bound_value over the samples.
double fit_constant(const std::vector<KernelSample>& samples);

/// sum_k exp(-t tau_k^2), t >= 0.
double heat_trace(const Eigen::VectorXd& frequencies, double t);
double heat_trace(const galerkin::SpectralData& S, double t);

/// Re sum_k exp(-t tau_k^2) e_k(x) conj(e_k(y)).
double heat_kernel(const galerkin::SpectralData& S, double t, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);
double heat_kernel_diag(const galerkin::SpectralData& S, double t, const Eigen::Ref<const Eigen::VectorXd>& x);

struct InversePowerResult {
  double direct = 0.0;    // sum_k tau_k^{-2j} e_k(x) conj(e_k(y))
  double integral = 0.0;  // int_0^inf t^{j-1}/(j-1)! heat(t, x, y) dt
  double difference = 0.0; // absolute
  double tail_bound = 0.0; // bound on the truncated part of the time integral
};

InversePowerResult inverse_power_kernel(const galerkin::SpectralData& S, int j, const Eigen::Ref<const Eigen::VectorXd>& x,
                                        const Eigen::Ref<const Eigen::VectorXd>& y);

/// eta(s): 0 for s <= 2, 1 for s >= 4.
double resolvent_cutoff(double s);

/// sum_k eta(lambda_k / tau) (lambda_k^2 - tau^2)^{-1} e_k(x) conj(e_k(y)) on the free torus.
///
/// Off the diagonal the modes beyond the truncation are added back through
/// the expansion 1/(l^2 - tau^2) = sum_p tau^{2p-2} l^{-2p}, p = 1..3, with
/// the full lattice sums of l^{-2p} computed from theta-function heat integrals.
/// Requires sqrt(4 pi^2 K^2 + 1) > 4 tau and tau >= 2.
double resolvent_kernel(const galerkin::SpectralData& S_0, double tau, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y);
/// Same kernel from the modes |k| <= K directly, without eigenvectors.
double resolvent_kernel(int n, int K, double tau, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y);
double resolvent_kernel(const std::vector<lattice::LatticeMode>& modes, int n, int K, double tau,
                        const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y);

/// sum_{k in Z^n} (4 pi^2 |k|^2 + 1)^{-p} cos(2 pi k.d), d != 0 for p <= n/2.
double free_inverse_power_sum(int n, int p, const Eigen::Ref<const Eigen::VectorXd>& d);

struct DyadicResult {
  double sup = 0.0;
  double ratio = 0.0; // sup / lambda^n
  bool reliable = true;
};

/// max over a grid^n node set of sum_{tau_k in [lambda, 2 lambda)} |e_k(x)|^2.
DyadicResult dyadic_projector_sup(const galerkin::SpectralData& S, double lambda, int grid = 16);

/// Majorants; h_n is potentials::kato_kernel.
double resolvent_bound(int n, double tau, double distance, int N);
double heat_bound(int n, double t);

} // namespace weyl_lab::kernels
