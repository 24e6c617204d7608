#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace weyl_lab::lattice {

/// Dense mode enumeration is capped here (D grows like K^n).
inline constexpr int kMaxModeDimension = 4;
/// Shell tables are cheap; they serve the reference dimensions up to 8.
inline constexpr int kMaxShellDimension = 8;

/// One Fourier mode exp(2 pi i k.x) of -Delta + 1 on R^n / Z^n.
struct LatticeMode {
  Eigen::VectorXi k;
  long norm_sq = 0;           // |k|^2
  double eigenvalue_sq = 1.0; // 4 pi^2 |k|^2 + 1
  double frequency = 1.0;     // sqrt(eigenvalue_sq)
};

double free_eigenvalue_sq(long norm_sq);
double free_frequency(long norm_sq);

/// All k with |k| <= K, ordered by |k|^2 then lexicographically.
std::vector<LatticeMode> enumerate_modes(int n, int K);

/// Representation numbers r_n(m) = #{k in Z^n : |k|^2 = m}, 0 <= m <= M.
struct ShellTable {
  int n = 0;
  long max_norm_sq = 0;
  std::vector<std::int64_t> counts;

  std::int64_t operator[](long m) const { return counts[static_cast<std::size_t>(m)]; }
  /// #{k : |k|^2 <= m}
  std::int64_t cumulative(long m) const;
};

ShellTable representation_numbers(int n, long max_norm_sq);

/// Largest m with free_frequency(m) <= lambda (or < lambda when strict); -1 if none.
long max_shell_below(double lambda, bool strict = false);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);
/// (2 pi)^{-n} omega_n lambda^n on the unit-volume torus.
double weyl_main_term(int n, double lambda);

/// N^0(lambda) = #{k : 4 pi^2 |k|^2 + 1 <= lambda^2}.
std::int64_t count_free(int n, double lambda);
/// N^0(lambda) - (2 pi)^{-n} omega_n lambda^n.
double free_remainder(int n, double lambda);
/// N^0(lambda + eps) - N^0(lambda).
std::int64_t band_count_free(int n, double lambda, double eps);

/// Free counting function backed by one shell table, for sweeps over many lambda.
class FreeCounter {
public:
  FreeCounter(int n, double lambda_max);

  int dimension() const { return table_.n; }
  double lambda_max() const { return lambda_max_; }
  /// #{k : frequency <= lambda}
  std::int64_t count(double lambda) const;
  /// #{k : frequency < lambda}
  std::int64_t count_below(double lambda) const;

private:
  std::int64_t prefix(long m) const;

  ShellTable table_;
  std::vector<std::int64_t> prefix_;
  double lambda_max_;
};

} // namespace weyl_lab::lattice
