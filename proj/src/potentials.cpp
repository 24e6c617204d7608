#include "weyl_lab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "weyl_lab/errors.hpp"
#include "weyl_lab/numerics.hpp"

namespace weyl_lab::potentials {

using std::numbers::pi;
using cplx = std::complex<double>;

PotentialSpec constant(int n, double value) {
  PotentialSpec s;
  s.n = n;
  s.kind = PotentialKind::constant;
  s.amplitude = value;
  return s;
}

PotentialSpec cosine_sum(int n, std::vector<CosineTerm> terms) {
  PotentialSpec s;
  s.n = n;
  s.kind = PotentialKind::cosine_sum;
  s.terms = std::move(terms);
  return s;
}

PotentialSpec radial_power(int n, double amplitude, double alpha, double epsilon) {
  PotentialSpec s;
  s.n = n;
  s.kind = PotentialKind::radial_power;
  s.amplitude = amplitude;
  s.alpha = alpha;
  s.epsilon = epsilon;
  return s;
}

PotentialSpec indicator_well(int n, double inside, double outside, double radius) {
  PotentialSpec s;
  s.n = n;
  s.kind = PotentialKind::indicator_well;
  s.amplitude = inside;
  s.background = outside;
  s.radius = radius;
  return s;
}

const char* kind_name(PotentialKind kind) {
  switch (kind) {
  case PotentialKind::constant: return "constant";
  case PotentialKind::cosine_sum: return "cosine-sum";
  case PotentialKind::radial_power: return "radial-power";
  case PotentialKind::indicator_well: return "indicator-well";
  case PotentialKind::custom_grid: return "custom-grid";
  }
  return "unknown";
}

PotentialKind kind_from_name(const std::string& name) {
  for (auto k : {PotentialKind::constant, PotentialKind::cosine_sum, PotentialKind::radial_power,
                 PotentialKind::indicator_well, PotentialKind::custom_grid})
    if (name == kind_name(k)) return k;
  throw PreconditionError("unknown potential kind '" + name + "'");
}

namespace {

class Fnv1a {
public:
  void bytes(const void* p, std::size_t len) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h_ ^= c[i];
      h_ *= 1099511628211ULL;
    }
  }
  void f64(double x) { bytes(&x, sizeof x); }
  void i64(std::int64_t x) { bytes(&x, sizeof x); }
  std::uint64_t value() const { return h_; }

private:
  std::uint64_t h_ = 1469598103934665603ULL;
};

Eigen::VectorXd center_of(const PotentialSpec& spec) {
  return spec.center.size() ? spec.center : Eigen::VectorXd::Zero(spec.n);
}

} // namespace

std::uint64_t spec_hash(const PotentialSpec& spec) {
  Fnv1a h;
  h.i64(spec.n);
  h.i64(static_cast<std::int64_t>(spec.kind));
  switch (spec.kind) {
  case PotentialKind::constant: h.f64(spec.amplitude); break;
  case PotentialKind::cosine_sum:
    for (const auto& t : spec.terms) {
      for (int i = 0; i < t.k.size(); ++i) h.i64(t.k(i));
      h.f64(t.coefficient);
    }
    break;
  case PotentialKind::radial_power:
    h.f64(spec.amplitude);
    h.f64(spec.alpha);
    h.f64(spec.epsilon);
    for (int i = 0; i < spec.n; ++i) h.f64(center_of(spec)(i));
    break;
  case PotentialKind::indicator_well:
    h.f64(spec.amplitude);
    h.f64(spec.background);
    h.f64(spec.radius);
    for (int i = 0; i < spec.n; ++i) h.f64(center_of(spec)(i));
    break;
  case PotentialKind::custom_grid:
    h.i64(spec.custom_grid_size);
    h.i64(spec.custom_grid_offset);
    for (int i = 0; i < spec.grid_values.size(); ++i) h.f64(spec.grid_values(i));
    break;
  }
  return h.value();
}

double periodic_distance(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double d = std::abs(x(i) - y(i));
    d -= std::floor(d);
    d = std::min(d, 1.0 - d);
    sum += d * d;
  }
  return std::sqrt(sum);
}

double evaluate(const PotentialSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x) {
  switch (spec.kind) {
  case PotentialKind::constant: return spec.amplitude;
  case PotentialKind::cosine_sum: {
    double v = 0.0;
    for (const auto& t : spec.terms) v += t.coefficient * std::cos(2 * pi * t.k.cast<double>().dot(x));
    return v;
  }
  case PotentialKind::radial_power: {
    const double d = periodic_distance(x, center_of(spec));
    return spec.amplitude * std::pow(d * d + spec.epsilon * spec.epsilon, -0.5 * spec.alpha);
  }
  case PotentialKind::indicator_well:
    return periodic_distance(x, center_of(spec)) <= spec.radius ? spec.amplitude : spec.background;
  case PotentialKind::custom_grid:
    throw PreconditionError("custom-grid potentials have no pointwise evaluator");
  }
  return 0.0;
}

Eigen::VectorXd PotentialData::node(Eigen::Index flat) const {
  Eigen::VectorXd x(spec.n);
  const double o = offset ? 0.5 : 0.0;
  for (int axis = spec.n - 1; axis >= 0; --axis) {
    x(axis) = (static_cast<double>(flat % grid) + o) / grid;
    flat /= grid;
  }
  return x;
}

PotentialData sample(const PotentialSpec& spec, int G) {
  if (spec.n < 1 || spec.n > 4) throw UnsupportedDimension(spec.n);
  if (G < 4 || G % 2 != 0) throw PreconditionError("grid size G must be even and >= 4");
  if (spec.epsilon < 0.0) throw PreconditionError("mollification scale epsilon must be >= 0");
  if (spec.kind == PotentialKind::radial_power && spec.epsilon == 0.0 && spec.alpha >= spec.n)
    throw PreconditionError("radial power with alpha >= n is not integrable");

  PotentialData data;
  data.spec = spec;
  data.grid = G;
  Eigen::Index total = 1;
  for (int i = 0; i < spec.n; ++i) total *= G;

  if (spec.kind == PotentialKind::custom_grid) {
    if (spec.custom_grid_size != G || spec.grid_values.size() != total)
      throw PreconditionError("custom grid size does not match requested G");
    data.offset = spec.custom_grid_offset;
    data.samples = spec.grid_values;
  } else {
    data.offset = spec.kind == PotentialKind::radial_power && spec.epsilon == 0.0 && spec.alpha > 0.0;
    data.samples.resize(total);
    for (Eigen::Index i = 0; i < total; ++i) {
      const double v = evaluate(spec, data.node(i));
      if (!std::isfinite(v)) throw PreconditionError("grid node hits the potential's singularity");
      data.samples(i) = v;
    }
  }
  data.negative_part = (-data.samples).cwiseMax(0.0);
  return data;
}

FourierTable::FourierTable(int n, int cutoff) : n_(n), cutoff_(cutoff) {
  std::size_t size = 1;
  for (int i = 0; i < n; ++i) size *= static_cast<std::size_t>(2 * cutoff + 1);
  coeffs_.assign(size, cplx(0.0, 0.0));
}

bool FourierTable::contains(const Eigen::Ref<const Eigen::VectorXi>& m) const {
  if (m.size() != n_) return false;
  for (int i = 0; i < n_; ++i)
    if (std::abs(m(i)) > cutoff_) return false;
  return true;
}

std::size_t FourierTable::index(const Eigen::Ref<const Eigen::VectorXi>& m) const {
  if (!contains(m)) throw AliasingError("Fourier index outside the coefficient table");
  std::size_t idx = 0;
  for (int i = 0; i < n_; ++i) idx = idx * static_cast<std::size_t>(2 * cutoff_ + 1) + static_cast<std::size_t>(m(i) + cutoff_);
  return idx;
}

cplx& FourierTable::at(const Eigen::Ref<const Eigen::VectorXi>& m) { return coeffs_[index(m)]; }
const cplx& FourierTable::at(const Eigen::Ref<const Eigen::VectorXi>& m) const { return coeffs_[index(m)]; }

FourierTable fourier_coefficients(const PotentialData& data, int cutoff) {
  const int n = data.dimension();
  const int G = data.grid;
  if (cutoff < 0) throw PreconditionError("Fourier cutoff must be nonnegative");
  if (cutoff > G / 2 - 1)
    throw AliasingError("Fourier cutoff " + std::to_string(cutoff) + " exceeds G/2 - 1 = " + std::to_string(G / 2 - 1));

  std::vector<cplx> spectrum(static_cast<std::size_t>(data.samples.size()));
  for (Eigen::Index i = 0; i < data.samples.size(); ++i) spectrum[static_cast<std::size_t>(i)] = data.samples(i);
  fft_nd(spectrum, n, G, false);

  FourierTable table(n, cutoff);
  const double norm = std::pow(static_cast<double>(G), -n);
  const double o = data.offset ? 0.5 : 0.0;
  Eigen::VectorXi m(n);
  const int side = 2 * cutoff + 1;
  const std::size_t count = table.data().size();
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::size_t rest = flat;
    std::size_t grid_index = 0;
    long msum = 0;
    for (int axis = n - 1; axis >= 0; --axis) {
      m(axis) = static_cast<int>(rest % static_cast<std::size_t>(side)) - cutoff;
      rest /= static_cast<std::size_t>(side);
    }
    for (int axis = 0; axis < n; ++axis) {
      grid_index = grid_index * static_cast<std::size_t>(G) + static_cast<std::size_t>((m(axis) % G + G) % G);
      msum += m(axis);
    }
    cplx value = spectrum[grid_index] * norm;
    if (o != 0.0) value *= std::polar(1.0, -2 * pi * o * static_cast<double>(msum) / G);
    table.at(m) = value;
  }
  // Hermitian symmetry: V^(-m) = conj V^(m).
  for (std::size_t flat = 0; flat < count; ++flat) {
    const std::size_t mirror = count - 1 - flat;
    if (mirror < flat) break;
    auto& a = table.data()[flat];
    auto& b = table.data()[mirror];
    const cplx sym = 0.5 * (a + std::conj(b));
    a = sym;
    b = std::conj(sym);
  }
  return table;
}

double evaluate_fourier(const FourierTable& table, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const int n = table.dimension();
  const int c = table.cutoff();
  const int side = 2 * c + 1;
  Eigen::VectorXi m(n);
  CompensatedSum sum;
  for (std::size_t flat = 0; flat < table.data().size(); ++flat) {
    std::size_t rest = flat;
    for (int axis = n - 1; axis >= 0; --axis) {
      m(axis) = static_cast<int>(rest % static_cast<std::size_t>(side)) - c;
      rest /= static_cast<std::size_t>(side);
    }
    const double phase = 2 * pi * m.cast<double>().dot(x);
    sum += (table.data()[flat] * std::polar(1.0, phase)).real();
  }
  return sum.value();
}

double kato_kernel(int n, double r) {
  if (n == 1) return 1.0;
  if (n == 2) return std::log(2.0 + 1.0 / r);
  return std::pow(r, 2.0 - n);
}

double kato_cell_integral(int n, double h) {
  if (n == 1) return h;
  // Split the cube into 2n pyramids with apex at the center. For the pyramid
  // over the face y_n = h/2, y = s * (u, h/2) with u on the face and s in [0, 1]:
  //   dy = s^(n-1) (h/2) ds du.
  const auto radial = [n](double rho) {
    switch (n) {
    case 2: {
      // int_0^1 s log(2 + 1/(s rho)) ds in closed form.
      const double b = 2.0 * rho;
      return (b * b - 1.0) * std::log1p(b) / (2.0 * b * b) + 1.0 / (2.0 * b) - 0.5 * std::log(rho);
    }
    case 3: return 1.0 / (2.0 * rho);
    default: return std::pow(rho, 2.0 - n) / 2.0;
    }
  };
  const GaussLegendreRule rule = gauss_legendre(24);
  const int face_dim = n - 1;
  const int order = static_cast<int>(rule.nodes.size());
  long points = 1;
  for (int i = 0; i < face_dim; ++i) points *= order;
  CompensatedSum face;
  std::vector<int> idx(static_cast<std::size_t>(face_dim), 0);
  for (long p = 0; p < points; ++p) {
    long rest = p;
    double u2 = 0.0, w = 1.0;
    for (int a = 0; a < face_dim; ++a) {
      const int i = static_cast<int>(rest % order);
      rest /= order;
      const double u = 0.5 * h * rule.nodes(i);
      u2 += u * u;
      w *= 0.5 * h * rule.weights(i);
    }
    face += w * radial(std::sqrt(u2 + 0.25 * h * h));
  }
  return 2.0 * n * 0.5 * h * face.value();
}

double kato_norm(const PotentialData& data, double delta) {
  if (!(delta > 0.0)) throw PreconditionError("Kato radius delta must be positive");
  if (delta > 0.5) throw PreconditionError("Kato radius delta must be <= 1/2");
  const int n = data.dimension();
  const int G = data.grid;
  const std::size_t total = static_cast<std::size_t>(data.samples.size());
  const double h = 1.0 / G;
  const double cell = std::pow(h, n);

  // Translation-invariant stencil w(d) = h_n(|d| h) h^n on the ball, zero at d = 0.
  std::vector<std::complex<double>> stencil(total), field(total);
  bool any = false;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    double d2 = 0.0;
    for (int axis = 0; axis < n; ++axis) {
      int i = static_cast<int>(rest % static_cast<std::size_t>(G));
      rest /= static_cast<std::size_t>(G);
      if (i > G / 2) i -= G;
      d2 += static_cast<double>(i) * i;
    }
    const double r = std::sqrt(d2) * h;
    stencil[flat] = (flat != 0 && r <= delta) ? kato_kernel(n, r) * cell : 0.0;
    field[flat] = std::abs(data.samples(static_cast<Eigen::Index>(flat)));
    any = any || field[flat] != 0.0;
  }
  if (!any) return 0.0;
  fft_nd(stencil, n, G, false);
  fft_nd(field, n, G, false);
  for (std::size_t i = 0; i < total; ++i) field[i] *= stencil[i];
  fft_nd(field, n, G, true);

  const double self = kato_cell_integral(n, h);
  double sup = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const double v = std::max(0.0, field[i].real()) + std::abs(data.samples(static_cast<Eigen::Index>(i))) * self;
    sup = std::max(sup, v);
  }
  return sup;
}

SignedParts split_parts(const PotentialData& data) {
  if (data.samples.size() == 0) throw PreconditionError("potential has no samples");
  return {data.samples.cwiseMax(0.0), (-data.samples).cwiseMax(0.0)};
}

double shift_to_floor(double lowest_eigenvalue) { return std::max(0.0, 1.0 - lowest_eigenvalue); }

} // namespace weyl_lab::potentials
