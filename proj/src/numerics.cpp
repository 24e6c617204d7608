#include "weyl_lab/numerics.hpp"

#include <Eigen/Eigenvalues>

namespace weyl_lab {

namespace {
double exp_transition(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
} // namespace

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double g = exp_transition(x);
  return g / (g + exp_transition(1.0 - x));
}

GaussLegendreRule gauss_legendre(int order) {
  if (order < 1) throw PreconditionError("Gauss-Legendre order must be positive");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const double beta = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = beta;
    jacobi(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussLegendreRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = 2.0 * solver.eigenvectors().row(0).transpose().array().square();
  // Symmetrize so that even integrands see exactly mirrored nodes.
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double x = 0.5 * (rule.nodes(j) - rule.nodes(i));
    const double w = 0.5 * (rule.weights(i) + rule.weights(j));
    rule.nodes(i) = -x;
    rule.nodes(j) = x;
    rule.weights(i) = rule.weights(j) = w;
  }
  if (order % 2 == 1) rule.nodes(order / 2) = 0.0;
  return rule;
}

CompositeRule composite_gauss_legendre(double a, double b, int panels, int order) {
  const GaussLegendreRule base = gauss_legendre(order);
  CompositeRule out;
  out.nodes.resize(static_cast<Eigen::Index>(panels) * order);
  out.weights.resize(out.nodes.size());
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + width * p;
    for (int i = 0; i < order; ++i) {
      const Eigen::Index k = static_cast<Eigen::Index>(p) * order + i;
      out.nodes(k) = lo + 0.5 * width * (base.nodes(i) + 1.0);
      out.weights(k) = 0.5 * width * base.weights(i);
    }
  }
  return out;
}

} // namespace weyl_lab

#include <unsupported/Eigen/FFT>

namespace weyl_lab {

void fft_nd(std::vector<std::complex<double>>& data, int n, int G, bool inverse) {
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> line(static_cast<std::size_t>(G)), out(static_cast<std::size_t>(G));
  const std::size_t total = data.size();
  std::size_t stride = total;
  for (int axis = 0; axis < n; ++axis) {
    stride /= static_cast<std::size_t>(G);
    const std::size_t block = stride * static_cast<std::size_t>(G);
    for (std::size_t base = 0; base < total; base += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        for (int i = 0; i < G; ++i) line[static_cast<std::size_t>(i)] = data[base + inner + stride * static_cast<std::size_t>(i)];
        if (inverse)
          fft.inv(out, line);
        else
          fft.fwd(out, line);
        for (int i = 0; i < G; ++i) data[base + inner + stride * static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)];
      }
    }
  }
}

} // namespace weyl_lab
