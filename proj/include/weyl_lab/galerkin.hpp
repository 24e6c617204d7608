#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

#include "weyl_lab/lattice.hpp"
#include "weyl_lab/potentials.hpp"

namespace weyl_lab::galerkin {

inline constexpr Eigen::Index kDefaultMaxDimension = 4000;

struct Provenance {
  int K = 0;
  int G = 0; // 0 for the free operator
  std::uint64_t spec_hash = 0;
};

/// H[a, b] = (4 pi^2 |k_a|^2 + 1) delta_ab + V^(k_a - k_b) on the modes |k| <= K.
struct DiscreteHamiltonian {
  int n = 0;
  int K = 0;
  std::vector<lattice::LatticeMode> modes;
  Eigen::MatrixXcd matrix;
  double shift = 0.0;         // preset additive constant, folded in at diagonalization
  double potential_sup = 0.0; // sup |V| over the sample grid
  Provenance provenance;

  Eigen::Index size() const { return matrix.rows(); }
};

/// Requires data.fourier with cutoff >= 2K.
DiscreteHamiltonian assemble(int n, int K, const potentials::PotentialData& data,
                             Eigen::Index max_dimension = kDefaultMaxDimension);
DiscreteHamiltonian assemble_free(int n, int K, Eigen::Index max_dimension = kDefaultMaxDimension);

/// Convenience: sample on G^n, take Fourier coefficients to 2K, assemble.
DiscreteHamiltonian assemble(const potentials::PotentialSpec& spec, int K, int G,
                             Eigen::Index max_dimension = kDefaultMaxDimension);

/// [V^(k_a - k_b)] without the kinetic diagonal or any shift.
Eigen::MatrixXcd potential_matrix(const DiscreteHamiltonian& H);

struct SpectralData {
  int n = 0;
  int K = 0;
  std::vector<lattice::LatticeMode> modes;
  Eigen::VectorXd eigenvalues_sq; // tau_k^2 = eig_k + shift, ascending
  Eigen::VectorXd frequencies;    // tau_k
  Eigen::MatrixXcd vectors;       // columns in the Fourier basis
  double shift = 0.0;
  double potential_sup = 0.0;
  double reliable_band = 0.0;
  Provenance provenance;

  Eigen::Index size() const { return frequencies.size(); }
};

/// Dense Hermitian eigendecomposition; shifts so that tau_1 >= 1.
SpectralData diagonalize(const DiscreteHamiltonian& H);

/// Exact free spectrum with identity eigenvectors.
SpectralData free_spectrum(int n, int K, Eigen::Index max_dimension = kDefaultMaxDimension);

/// Free frequencies for |k| <= K, ascending, without eigenvectors (cheap for large K).
Eigen::VectorXd free_frequencies(int n, int K);

/// sqrt(4 pi^2 K^2 + 1) - 2 (sup|V| + shift).
double reliable_band(int K, double potential_sup, double shift);

struct CountResult {
  std::int64_t count = 0;
  bool reliable = true;
};

/// #{k : tau_k <= lambda}.
CountResult counting_function(const SpectralData& S, double lambda);
/// #{k : tau_k in [lambda, lambda + 1)}.
CountResult band_trace(const SpectralData& S, double lambda);

std::int64_t count_at_most(const Eigen::VectorXd& sorted_frequencies, double lambda);
std::int64_t count_in(const Eigen::VectorXd& sorted_frequencies, double lo, double hi);

/// e_k(x) for every eigenvector, synthesized from its Fourier coefficients.
Eigen::VectorXcd eigenfunction_values(const SpectralData& S, const Eigen::Ref<const Eigen::VectorXd>& x);

/// E_lambda(x, x) = sum_{tau_k <= lambda} |e_k(x)|^2.
double spectral_function_diag(const SpectralData& S, const Eigen::Ref<const Eigen::VectorXd>& x, double lambda);

double wave_trace(const SpectralData& S, double t);
double wave_trace(const Eigen::VectorXd& frequencies, double t);

} // namespace weyl_lab::galerkin
