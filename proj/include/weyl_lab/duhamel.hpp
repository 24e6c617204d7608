#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <random>
#include <type_traits>

#include "weyl_lab/galerkin.hpp"
#include "weyl_lab/mollify.hpp"
#include "weyl_lab/numerics.hpp"

namespace weyl_lab::duhamel {

/// A scalar function of the frequency together with its derivative.
struct SpectralFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

/// 1~_lambda and its first derivative, convolution form.
SpectralFunction indicator_function(const mollify::MollifiedIndicator& mi);

/// m(nu, mu) = (f(nu) - f(mu)) / (nu^2 - mu^2), with f'((nu+mu)/2) / (nu+mu) once
/// |nu - mu| <= rel_tol * max(nu, mu).
struct DividedDifference {
  SpectralFunction f;
  double rel_tol = 1e-6;
};

double divided_difference(const DividedDifference& dd, double nu, double mu);

/// sum_{j,k} m(nu_j, mu_k) Re(conj(O_jk) W_jk) with O = U^* V and W = U^* B V.
///
/// U, nu: eigenpairs of A; V, mu: eigenpairs of A + B (frequencies, i.e. square roots).
template <class DU, class DV, class DB>
double duhamel_sum(const Eigen::VectorXd& nu, const Eigen::MatrixBase<DU>& U, const Eigen::VectorXd& mu,
                   const Eigen::MatrixBase<DV>& V, const Eigen::MatrixBase<DB>& B, const DividedDifference& dd) {
  using Scalar = typename DU::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Matrix O = U.adjoint() * V;
  const Matrix W = U.adjoint() * B * V;
  CompensatedSum sum;
  for (Eigen::Index j = 0; j < O.rows(); ++j) {
    for (Eigen::Index k = 0; k < O.cols(); ++k) {
      double product;
      if constexpr (std::is_same_v<Scalar, double>)
        product = O(j, k) * W(j, k);
      else
        product = std::real(std::conj(O(j, k)) * W(j, k));
      if (product != 0.0) sum += divided_difference(dd, nu(j), mu(k)) * product;
    }
  }
  return sum.value();
}

/// sum_k f(mu_k) - sum_j f(nu_j).
double trace_difference(const Eigen::VectorXd& nu, const Eigen::VectorXd& mu, const SpectralFunction& f);

double trace_difference_direct(const galerkin::SpectralData& S_V, const galerkin::SpectralData& S_0,
                               const mollify::MollifiedIndicator& mi);

/// Double sum with the perturbation [V^(k_a - k_b)] + (c_V - c_0) I taken from H_V.
double trace_difference_duhamel(const galerkin::SpectralData& S_V, const galerkin::SpectralData& S_0,
                                const galerkin::DiscreteHamiltonian& H_V, const mollify::MollifiedIndicator& mi);

struct ComparisonReport {
  double lambda = 0.0;
  double T = 1.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  bool pass = false;
};

/// PASS iff |lhs - rhs| <= 1e-9 (1 + |lhs|).
ComparisonReport verify_identity(const galerkin::SpectralData& S_V, const galerkin::SpectralData& S_0,
                                 const galerkin::DiscreteHamiltonian& H_V, const mollify::MollifiedIndicator& mi);

bool identity_passes(double lhs, double rhs);

struct TrigResiduals {
  double r1 = 0.0; // off-diagonal form at (mu, tau); 0 when mu == tau
  double r2 = 0.0; // diagonal form at (tau, tau)
};

/// Quadrature residuals of
///   int_0^t sin((t-s) mu)/mu cos(s tau) ds = (cos t tau - cos t mu) / (mu^2 - tau^2)
///   int_0^t sin((t-s) tau)/tau cos(s tau) ds = t sin(t tau) / (2 tau)
TrigResiduals trig_identity_residuals(double t, double mu, double tau);

/// Random data for the weighted-superposition inequality on a 1-D grid.
struct DeltaLemmaInstance {
  int grid = 64;
  double delta = 1.0;
  Eigen::VectorXcd a;      // coefficients a_k
  Eigen::VectorXd shifts;  // delta_k in [0, delta]
  Eigen::MatrixXcd e;      // grid x modes, orthonormal for the mean over grid nodes
  std::function<double(double, double)> m;     // m(s, x)
  std::function<double(double, double)> dm_ds; // partial_s m(s, x)
};

DeltaLemmaInstance random_delta_instance(std::mt19937_64& rng, int grid, int modes, double delta);

struct DeltaLemmaResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

/// lhs = mean_x |sum_k m(delta_k, x) a_k e_k(x)|,
/// rhs = (||m(0, .)||_2 + int_0^delta ||partial_s m(s, .)||_2 ds) ||a||_2.
DeltaLemmaResult delta_lemma_check(const DeltaLemmaInstance& instance);

} // namespace weyl_lab::duhamel
