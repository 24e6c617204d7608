#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace weyl_lab::potentials {

enum class PotentialKind { constant, cosine_sum, radial_power, indicator_well, custom_grid };

/// One term c * cos(2 pi k.x) of a cosine-sum potential.
struct CosineTerm {
  Eigen::VectorXi k;
  double coefficient = 0.0;
};

/// A real potential on T^n = R^n / Z^n.
///
/// Field use per kind:
///   constant        amplitude
///   cosine_sum      terms
///   radial_power    amplitude * (d^2 + epsilon^2)^(-alpha/2), d = periodic distance to center
///   indicator_well  amplitude inside the ball of `radius` about center, background outside
///   custom_grid     grid_values on a G^n node grid (G = custom_grid_size)
struct PotentialSpec {
  int n = 1;
  PotentialKind kind = PotentialKind::constant;
  double amplitude = 0.0;
  double alpha = 1.0;
  double epsilon = 0.0;
  double radius = 0.25;
  double background = 0.0;
  Eigen::VectorXd center; // empty means the origin
  std::vector<CosineTerm> terms;
  int custom_grid_size = 0;
  bool custom_grid_offset = false;
  Eigen::VectorXd grid_values;
};

PotentialSpec constant(int n, double value);
PotentialSpec cosine_sum(int n, std::vector<CosineTerm> terms);
PotentialSpec radial_power(int n, double amplitude, double alpha, double epsilon);
PotentialSpec indicator_well(int n, double inside, double outside, double radius);

const char* kind_name(PotentialKind kind);
PotentialKind kind_from_name(const std::string& name);

/// Stable 64-bit digest of every field that affects samples.
std::uint64_t spec_hash(const PotentialSpec& spec);

/// Periodized Euclidean distance on the unit torus.
double periodic_distance(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y);

/// Pointwise value; not available for custom_grid.
double evaluate(const PotentialSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Fourier coefficients on the cube [-cutoff, cutoff]^n (which covers the ball |m| <= cutoff).
class FourierTable {
public:
  FourierTable() = default;
  FourierTable(int n, int cutoff);

  int dimension() const { return n_; }
  int cutoff() const { return cutoff_; }
  bool contains(const Eigen::Ref<const Eigen::VectorXi>& m) const;
  std::complex<double>& at(const Eigen::Ref<const Eigen::VectorXi>& m);
  const std::complex<double>& at(const Eigen::Ref<const Eigen::VectorXi>& m) const;
  std::complex<double> operator()(const Eigen::Ref<const Eigen::VectorXi>& m) const { return at(m); }
  /// Flat storage, axis 0 slowest, offsets shifted by +cutoff.
  const std::vector<std::complex<double>>& data() const { return coeffs_; }
  std::vector<std::complex<double>>& data() { return coeffs_; }

private:
  std::size_t index(const Eigen::Ref<const Eigen::VectorXi>& m) const;

  int n_ = 0;
  int cutoff_ = -1;
  std::vector<std::complex<double>> coeffs_;
};

/// Grid samples of a potential plus derived data.
///
/// Nodes are x_i = (i + offset/2) / G per axis, flattened with axis 0 slowest.
struct PotentialData {
  PotentialSpec spec;
  int grid = 0;
  bool offset = false;
  Eigen::VectorXd samples;
  Eigen::VectorXd negative_part;
  std::optional<FourierTable> fourier;
  double shift = 0.0;

  int dimension() const { return spec.n; }
  Eigen::VectorXd node(Eigen::Index flat) const;
  double sup_norm() const { return samples.size() ? samples.cwiseAbs().maxCoeff() : 0.0; }
};

/// Samples on a G^n grid; radial singularities get a half-cell offset.
PotentialData sample(const PotentialSpec& spec, int G);

/// V^(m) = G^-n sum_i V(x_i) exp(-2 pi i m.x_i), Hermitian symmetry enforced.
FourierTable fourier_coefficients(const PotentialData& data, int cutoff);

/// Sum_m V^(m) exp(2 pi i m.x), real part.
double evaluate_fourier(const FourierTable& table, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Kato kernel h_n(r): r^(2-n) for n >= 3, log(2 + 1/r) for n = 2, 1 for n = 1.
double kato_kernel(int n, double r);

/// Integral of h_n(|y|) over the cube [-h/2, h/2]^n.
double kato_cell_integral(int n, double h);

/// sup_x of the grid Riemann sum of int_{B(x, delta)} |V(y)| h_n(dist(x, y)) dy.
double kato_norm(const PotentialData& data, double delta);

struct SignedParts {
  Eigen::VectorXd positive;
  Eigen::VectorXd negative;
};
SignedParts split_parts(const PotentialData& data);

/// c = max(0, 1 - lowest_eigenvalue).
double shift_to_floor(double lowest_eigenvalue);

} // namespace weyl_lab::potentials
