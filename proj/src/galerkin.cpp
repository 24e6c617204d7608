#include "weyl_lab/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "weyl_lab/errors.hpp"
#include "weyl_lab/numerics.hpp"

namespace weyl_lab::galerkin {

using std::numbers::pi;

namespace {

DiscreteHamiltonian free_block(int n, int K, Eigen::Index max_dimension) {
  if (K < 0) throw PreconditionError("truncation radius K must be >= 0");
  DiscreteHamiltonian H;
  H.n = n;
  H.K = K;
  H.modes = lattice::enumerate_modes(n, K);
  const auto D = static_cast<Eigen::Index>(H.modes.size());
  if (D > max_dimension)
    throw ResourceError("Galerkin dimension " + std::to_string(D) + " exceeds limit " + std::to_string(max_dimension));
  H.matrix = Eigen::MatrixXcd::Zero(D, D);
  for (Eigen::Index a = 0; a < D; ++a) H.matrix(a, a) = H.modes[static_cast<std::size_t>(a)].eigenvalue_sq;
  H.provenance.K = K;
  return H;
}

} // namespace

DiscreteHamiltonian assemble_free(int n, int K, Eigen::Index max_dimension) { return free_block(n, K, max_dimension); }

DiscreteHamiltonian assemble(int n, int K, const potentials::PotentialData& data, Eigen::Index max_dimension) {
  if (data.dimension() != n) throw PreconditionError("potential dimension does not match n");
  if (!data.fourier || data.fourier->cutoff() < 2 * K)
    throw AliasingError("potential Fourier cutoff must be at least 2K = " + std::to_string(2 * K));
  DiscreteHamiltonian H = free_block(n, K, max_dimension);
  const auto& table = *data.fourier;
  const Eigen::Index D = H.size();
  Eigen::VectorXi diff(n);
  for (Eigen::Index b = 0; b < D; ++b) {
    const auto& kb = H.modes[static_cast<std::size_t>(b)].k;
    for (Eigen::Index a = b; a < D; ++a) {
      diff = H.modes[static_cast<std::size_t>(a)].k - kb;
      const std::complex<double> v = table(diff);
      if (a == b) {
        H.matrix(a, a) += v.real();
      } else {
        H.matrix(a, b) = v;
        H.matrix(b, a) = std::conj(v);
      }
    }
  }
  H.shift = data.shift;
  H.potential_sup = data.sup_norm();
  H.provenance = {K, data.grid, potentials::spec_hash(data.spec)};
  return H;
}

DiscreteHamiltonian assemble(const potentials::PotentialSpec& spec, int K, int G, Eigen::Index max_dimension) {
  potentials::PotentialData data = potentials::sample(spec, G);
  data.fourier = potentials::fourier_coefficients(data, 2 * K);
  return assemble(spec.n, K, data, max_dimension);
}

Eigen::MatrixXcd potential_matrix(const DiscreteHamiltonian& H) {
  Eigen::MatrixXcd B = H.matrix;
  for (Eigen::Index a = 0; a < H.size(); ++a) B(a, a) -= H.modes[static_cast<std::size_t>(a)].eigenvalue_sq;
  return B;
}

double reliable_band(int K, double potential_sup, double shift) {
  return lattice::free_frequency(static_cast<long>(K) * K) - 2.0 * (potential_sup + shift);
}

SpectralData diagonalize(const DiscreteHamiltonian& H) {
  const Eigen::Index D = H.size();
  if (D == 0) throw PreconditionError("empty Hamiltonian");
  const double scale = std::max(1.0, H.matrix.cwiseAbs().maxCoeff());
  if ((H.matrix - H.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw PreconditionError("matrix is not Hermitian to 1e-12");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H.matrix);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
  const Eigen::VectorXd& eig = solver.eigenvalues();

  SpectralData S;
  S.n = H.n;
  S.K = H.K;
  S.modes = H.modes;
  S.vectors = solver.eigenvectors();
  for (Eigen::Index j = 0; j < D; ++j) {
    // First coordinate within rounding of the largest, so ties resolve by mode order.
    const double top = S.vectors.col(j).cwiseAbs2().maxCoeff();
    Eigen::Index arg = 0;
    while (std::norm(S.vectors(arg, j)) < top * (1 - 1e-10)) ++arg;
    const std::complex<double> c = S.vectors(arg, j);
    S.vectors.col(j) *= std::conj(c) / std::abs(c);
    S.vectors(arg, j) = std::abs(S.vectors(arg, j));
  }

  const double e_min = eig(0) + H.shift;
  const double floor_shift = potentials::shift_to_floor(e_min);
  S.shift = H.shift + floor_shift;
  S.eigenvalues_sq.resize(D);
  for (Eigen::Index j = 0; j < D; ++j) {
    // Anchor at the bottom when the floor binds so that tau_1 = 1 exactly.
    S.eigenvalues_sq(j) = floor_shift > 0.0 ? 1.0 + (eig(j) - eig(0)) : eig(j) + H.shift;
  }
  S.frequencies = S.eigenvalues_sq.cwiseSqrt();
  S.potential_sup = H.potential_sup;
  S.provenance = H.provenance;
  S.reliable_band = reliable_band(H.K, H.potential_sup, S.shift);
  return S;
}

SpectralData free_spectrum(int n, int K, Eigen::Index max_dimension) {
  if (K < 0) throw PreconditionError("truncation radius K must be >= 0");
  SpectralData S;
  S.n = n;
  S.K = K;
  S.modes = lattice::enumerate_modes(n, K);
  const auto D = static_cast<Eigen::Index>(S.modes.size());
  if (D > max_dimension)
    throw ResourceError("Galerkin dimension " + std::to_string(D) + " exceeds limit " + std::to_string(max_dimension));
  S.eigenvalues_sq.resize(D);
  S.frequencies.resize(D);
  for (Eigen::Index a = 0; a < D; ++a) {
    S.eigenvalues_sq(a) = S.modes[static_cast<std::size_t>(a)].eigenvalue_sq;
    S.frequencies(a) = S.modes[static_cast<std::size_t>(a)].frequency;
  }
  S.vectors = Eigen::MatrixXcd::Identity(D, D);
  S.provenance.K = K;
  S.reliable_band = reliable_band(K, 0.0, 0.0);
  return S;
}

Eigen::VectorXd free_frequencies(int n, int K) {
  if (K < 0) throw PreconditionError("truncation radius K must be >= 0");
  const auto modes = lattice::enumerate_modes(n, K);
  Eigen::VectorXd f(static_cast<Eigen::Index>(modes.size()));
  for (std::size_t a = 0; a < modes.size(); ++a) f(static_cast<Eigen::Index>(a)) = modes[a].frequency;
  return f;
}

std::int64_t count_at_most(const Eigen::VectorXd& f, double lambda) {
  return std::upper_bound(f.data(), f.data() + f.size(), lambda) - f.data();
}

std::int64_t count_in(const Eigen::VectorXd& f, double lo, double hi) {
  if (!(hi > lo)) return 0;
  const auto* first = std::lower_bound(f.data(), f.data() + f.size(), lo);
  const auto* last = std::lower_bound(f.data(), f.data() + f.size(), hi);
  return last - first;
}

CountResult counting_function(const SpectralData& S, double lambda) {
  return {count_at_most(S.frequencies, lambda), lambda <= S.reliable_band};
}

CountResult band_trace(const SpectralData& S, double lambda) {
  return {count_in(S.frequencies, lambda, lambda + 1.0), lambda + 1.0 <= S.reliable_band};
}

Eigen::VectorXcd eigenfunction_values(const SpectralData& S, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::Index D = S.size();
  Eigen::VectorXcd plane(D);
  for (Eigen::Index a = 0; a < D; ++a)
    plane(a) = std::polar(1.0, 2 * pi * S.modes[static_cast<std::size_t>(a)].k.cast<double>().dot(x));
  return S.vectors.transpose() * plane;
}

double spectral_function_diag(const SpectralData& S, const Eigen::Ref<const Eigen::VectorXd>& x, double lambda) {
  const std::int64_t m = count_at_most(S.frequencies, lambda);
  if (m == 0) return 0.0;
  const Eigen::VectorXcd values = eigenfunction_values(S, x);
  return values.head(m).squaredNorm();
}

double wave_trace(const Eigen::VectorXd& frequencies, double t) {
  CompensatedSum sum;
  for (Eigen::Index k = 0; k < frequencies.size(); ++k) sum += std::cos(t * frequencies(k));
  return sum.value();
}

double wave_trace(const SpectralData& S, double t) { return wave_trace(S.frequencies, t); }

} // namespace weyl_lab::galerkin
