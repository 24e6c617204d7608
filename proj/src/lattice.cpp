#include "weyl_lab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "weyl_lab/errors.hpp"

namespace weyl_lab::lattice {

using std::numbers::pi;

double free_eigenvalue_sq(long norm_sq) { return 4 * pi * pi * static_cast<double>(norm_sq) + 1; }

double free_frequency(long norm_sq) { return std::sqrt(free_eigenvalue_sq(norm_sq)); }

namespace {

void check_shell_dimension(int n) {
  if (n < 1 || n > kMaxShellDimension) throw UnsupportedDimension(n);
}

void collect(int n, int K, long budget, Eigen::VectorXi& k, int axis, long used,
             std::vector<LatticeMode>& out) {
  if (axis == n) {
    LatticeMode mode;
    mode.k = k;
    mode.norm_sq = used;
    mode.eigenvalue_sq = free_eigenvalue_sq(used);
    mode.frequency = std::sqrt(mode.eigenvalue_sq);
    out.push_back(std::move(mode));
    return;
  }
  for (int j = -K; j <= K; ++j) {
    const long next = used + static_cast<long>(j) * j;
    if (next > budget) continue;
    k(axis) = j;
    collect(n, K, budget, k, axis + 1, next, out);
  }
}

} // namespace

std::vector<LatticeMode> enumerate_modes(int n, int K) {
  if (n < 1 || n > kMaxModeDimension) throw UnsupportedDimension(n);
  if (K < 0) throw PreconditionError("truncation radius K must be nonnegative");
  std::vector<LatticeMode> modes;
  Eigen::VectorXi k = Eigen::VectorXi::Zero(n);
  collect(n, K, static_cast<long>(K) * K, k, 0, 0, modes);
  std::stable_sort(modes.begin(), modes.end(), [](const LatticeMode& a, const LatticeMode& b) {
    if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
    return std::lexicographical_compare(a.k.data(), a.k.data() + a.k.size(), b.k.data(),
                                        b.k.data() + b.k.size());
  });
  return modes;
}

std::int64_t ShellTable::cumulative(long m) const {
  std::int64_t total = 0;
  const long top = std::min(m, max_norm_sq);
  for (long i = 0; i <= top; ++i) total += counts[static_cast<std::size_t>(i)];
  return total;
}

ShellTable representation_numbers(int n, long max_norm_sq) {
  check_shell_dimension(n);
  if (max_norm_sq < 0) throw PreconditionError("max_norm_sq must be nonnegative");
  const auto size = static_cast<std::size_t>(max_norm_sq) + 1;
  // One coordinate: r_1(0) = 1, r_1(j^2) = 2.
  std::vector<std::int64_t> current(size, 0);
  for (long j = 0; j * j <= max_norm_sq; ++j) current[static_cast<std::size_t>(j * j)] = j == 0 ? 1 : 2;
  // Add one coordinate at a time: r_d(m) = sum_j r_{d-1}(m - j^2). Each m is
  // independent, so stripes of m can be processed separately.
  for (int d = 2; d <= n; ++d) {
    std::vector<std::int64_t> next(size, 0);
    for (long m = 0; m <= max_norm_sq; ++m) {
      std::int64_t acc = current[static_cast<std::size_t>(m)];
      for (long j = 1; j * j <= m; ++j) acc += 2 * current[static_cast<std::size_t>(m - j * j)];
      next[static_cast<std::size_t>(m)] = acc;
    }
    current.swap(next);
  }
  return ShellTable{n, max_norm_sq, std::move(current)};
}

long max_shell_below(double lambda, bool strict) {
  const auto admitted = [&](long m) {
    const double f = free_frequency(m);
    return strict ? f < lambda : f <= lambda;
  };
  if (!(lambda >= 1.0) || !admitted(0)) return -1;
  long m = static_cast<long>(std::floor((lambda * lambda - 1.0) / (4 * pi * pi)));
  m = std::max(m, 0L);
  while (m > 0 && !admitted(m)) --m;
  while (admitted(m + 1)) ++m;
  return m;
}

double unit_ball_volume(int n) {
  return std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double weyl_main_term(int n, double lambda) {
  return std::pow(2 * pi, -n) * unit_ball_volume(n) * std::pow(lambda, n);
}

std::int64_t count_free(int n, double lambda) {
  check_shell_dimension(n);
  const long m = max_shell_below(lambda);
  if (m < 0) return 0;
  return representation_numbers(n, m).cumulative(m);
}

double free_remainder(int n, double lambda) {
  return static_cast<double>(count_free(n, lambda)) - weyl_main_term(n, lambda);
}

std::int64_t band_count_free(int n, double lambda, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("band width must be positive");
  FreeCounter counter(n, lambda + eps);
  return counter.count(lambda + eps) - counter.count(lambda);
}

FreeCounter::FreeCounter(int n, double lambda_max) : lambda_max_(lambda_max) {
  check_shell_dimension(n);
  const long m = std::max(0L, max_shell_below(lambda_max));
  table_ = representation_numbers(n, m);
  prefix_.resize(table_.counts.size());
  std::int64_t total = 0;
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    total += table_.counts[i];
    prefix_[i] = total;
  }
}

std::int64_t FreeCounter::prefix(long m) const {
  if (m < 0) return 0;
  if (m > table_.max_norm_sq)
    throw PreconditionError("FreeCounter queried above its lambda_max");
  return prefix_[static_cast<std::size_t>(m)];
}

std::int64_t FreeCounter::count(double lambda) const { return prefix(max_shell_below(lambda)); }

std::int64_t FreeCounter::count_below(double lambda) const {
  return prefix(max_shell_below(lambda, true));
}

} // namespace weyl_lab::lattice
