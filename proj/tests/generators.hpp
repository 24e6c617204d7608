// Small hand-rolled generators for property tests.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace gen {

class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  double normal() { return std::normal_distribution<double>()(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  Eigen::VectorXd point(int n) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = uniform(0.0, 1.0);
    return x;
  }

  /// Random Hermitian matrix with entries of unit scale.
  Eigen::MatrixXcd hermitian(Eigen::Index D) {
    Eigen::MatrixXcd M(D, D);
    for (Eigen::Index i = 0; i < D; ++i)
      for (Eigen::Index j = 0; j < D; ++j) M(i, j) = {normal(), normal()};
    return 0.5 * (M + M.adjoint());
  }

  std::mt19937_64& engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

} // namespace gen
