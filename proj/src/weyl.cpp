#include "weyl_lab/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "weyl_lab/errors.hpp"
#include "weyl_lab/lattice.hpp"

namespace weyl_lab::weyl {

const char* source_name(CountSource source) {
  return source == CountSource::free_exact ? "free-exact" : "galerkin";
}

std::vector<double> geometric_grid(double start, double stop, int points) {
  if (!(start > 0.0) || !(stop > start) || points < 2) throw PreconditionError("bad geometric grid");
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double ratio = std::log(stop / start);
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = start * std::exp(ratio * i / (points - 1));
  grid.back() = stop;
  return grid;
}

std::vector<double> geometric_ladder(double start, double stop, double factor) {
  if (!(start > 0.0) || !(factor > 1.0)) throw PreconditionError("bad geometric ladder");
  std::vector<double> ladder;
  for (double x = start; x <= stop * (1.0 + 1e-12); x *= factor) ladder.push_back(x);
  return ladder;
}

namespace {

void check_grid(const std::vector<double>& lambdas) {
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1])) throw PreconditionError("lambda grid must be strictly increasing");
}

void fill_main(RemainderSeries& s) {
  s.main.resize(s.lambda.size());
  s.remainder.resize(s.lambda.size());
  for (std::size_t i = 0; i < s.lambda.size(); ++i) {
    s.main[i] = lattice::weyl_main_term(s.n, s.lambda[i]);
    s.remainder[i] = static_cast<double>(s.counts[i]) - s.main[i];
  }
}

} // namespace

RemainderSeries build_series(int n, const std::vector<double>& lambdas) {
  check_grid(lambdas);
  RemainderSeries s;
  s.n = n;
  s.source = CountSource::free_exact;
  s.lambda = lambdas;
  if (!lambdas.empty()) {
    const lattice::FreeCounter counter(n, lambdas.back());
    for (double l : lambdas) s.counts.push_back(counter.count(l));
  }
  fill_main(s);
  return s;
}

RemainderSeries build_series(const galerkin::SpectralData& S, const std::vector<double>& lambdas) {
  check_grid(lambdas);
  if (!lambdas.empty() && lambdas.back() > S.reliable_band)
    throw PreconditionError("lambda grid extends past the reliable band " + std::to_string(S.reliable_band));
  RemainderSeries s;
  s.n = S.n;
  s.source = CountSource::galerkin;
  s.lambda = lambdas;
  s.provenance = S.provenance;
  for (double l : lambdas) s.counts.push_back(galerkin::count_at_most(S.frequencies, l));
  fill_main(s);
  return s;
}

ExponentFit fit_exponent(const std::vector<double>& lambda, const std::vector<double>& remainder, double lo, double hi) {
  if (lambda.size() != remainder.size()) throw PreconditionError("series length mismatch");
  long nonzero = 0;
  for (std::size_t i = 0; i < lambda.size(); ++i)
    if (lambda[i] >= lo && lambda[i] <= hi && remainder[i] != 0.0) ++nonzero;
  if (nonzero < 8) throw InsufficientData("exponent fit needs at least 8 nonzero remainders in the window");

  ExponentFit fit;
  double block_lo = lo;
  while (block_lo <= hi) {
    const double block_hi = 2.0 * block_lo;
    double best = 0.0, at = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      if (lambda[i] < block_lo || lambda[i] >= block_hi || lambda[i] > hi) continue;
      if (std::abs(remainder[i]) > best) {
        best = std::abs(remainder[i]);
        at = lambda[i];
      }
    }
    if (best > 0.0) {
      fit.bin_lambda.push_back(at);
      fit.bin_max.push_back(best);
    }
    block_lo = block_hi;
  }
  const auto m = static_cast<Eigen::Index>(fit.bin_max.size());
  if (m < 2) throw InsufficientData("exponent fit needs at least 2 nonempty dyadic blocks");
  Eigen::VectorXd x(m), y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    x(i) = std::log(fit.bin_lambda[static_cast<std::size_t>(i)]);
    y(i) = std::log(fit.bin_max[static_cast<std::size_t>(i)]);
  }
  const double mx = x.mean(), my = y.mean();
  const double sxx = (x.array() - mx).square().sum();
  const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_tot = (y.array() - my).square().sum();
  const double ss_res = (y.array() - fit.intercept - fit.slope * x.array()).square().sum();
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

ExponentFit fit_exponent(const RemainderSeries& series, double lo, double hi) {
  return fit_exponent(series.lambda, series.remainder, lo, hi);
}

const char* width_rule_name(WidthRule rule) {
  switch (rule) {
  case WidthRule::fixed: return "fixed";
  case WidthRule::power: return "power";
  case WidthRule::inverse_log: return "inverse-log";
  case WidthRule::unit: return "unit";
  }
  return "unknown";
}

WidthRule width_rule_from_name(const std::string& name) {
  for (auto r : {WidthRule::fixed, WidthRule::power, WidthRule::inverse_log, WidthRule::unit})
    if (name == width_rule_name(r)) return r;
  throw PreconditionError("unknown width rule '" + name + "'");
}

double band_width(WidthRule rule, double parameter, double lambda) {
  switch (rule) {
  case WidthRule::fixed: return parameter;
  case WidthRule::power: return std::pow(lambda, -parameter);
  case WidthRule::inverse_log: return 1.0 / std::log(lambda);
  case WidthRule::unit: return 1.0;
  }
  return 1.0;
}

namespace {

template <class CountBelow>
BandTable run_bands(int n, const std::vector<double>& lambdas, WidthRule rule, double parameter, CountBelow count_below,
                    double reliable_band) {
  check_grid(lambdas);
  if (rule == WidthRule::inverse_log)
    for (double l : lambdas)
      if (!(l > 1.0)) throw PreconditionError("inverse-log widths need lambda > 1");
  BandTable table;
  table.n = n;
  table.rule = rule;
  table.parameter = parameter;
  const double a = static_cast<double>(n - 1) / (n + 1);
  for (double l : lambdas) {
    BandRow row;
    row.lambda = l;
    row.width = band_width(rule, parameter, l);
    if (!(row.width > 0.0)) throw PreconditionError("band width must be positive");
    row.count = count_below(l + row.width) - count_below(l);
    row.per_width = static_cast<double>(row.count) / (row.width * std::pow(l, n - 1));
    row.per_power = static_cast<double>(row.count) / std::pow(l, n - 1 - a);
    row.normalized = rule == WidthRule::power ? row.per_power : row.per_width;
    row.reliable = l + row.width <= reliable_band;
    table.max_normalized = std::max(table.max_normalized, row.normalized);
    table.rows.push_back(row);
  }
  if (!table.rows.empty()) {
    std::vector<double> upper;
    for (std::size_t i = table.rows.size() / 2; i < table.rows.size(); ++i) upper.push_back(table.rows[i].normalized);
    std::nth_element(upper.begin(), upper.begin() + static_cast<long>(upper.size() / 2), upper.end());
    const double cap = 2.0 * upper[upper.size() / 2];
    std::size_t start = table.rows.size();
    while (start > 0 && table.rows[start - 1].normalized <= cap) --start;
    table.onset = start < table.rows.size() ? table.rows[start].lambda : std::numeric_limits<double>::infinity();
  }
  return table;
}

} // namespace

BandTable band_experiment(int n, const std::vector<double>& lambdas, WidthRule rule, double parameter) {
  double top = 1.0;
  for (double l : lambdas) top = std::max(top, l + band_width(rule, parameter, l));
  const lattice::FreeCounter counter(n, top);
  return run_bands(
      n, lambdas, rule, parameter, [&](double x) { return counter.count_below(x); },
      std::numeric_limits<double>::infinity());
}

BandTable band_experiment(const galerkin::SpectralData& S, const std::vector<double>& lambdas, WidthRule rule,
                          double parameter) {
  const auto below = [&](double x) { return galerkin::count_at_most(S.frequencies, std::nextafter(x, 0.0)); };
  return run_bands(S.n, lambdas, rule, parameter, below, S.reliable_band);
}

const char* variant_name(BootstrapVariant variant) {
  switch (variant) {
  case BootstrapVariant::torus: return "torus";
  case BootstrapVariant::n5: return "n5";
  case BootstrapVariant::lp: return "lp";
  }
  return "unknown";
}

BootstrapVariant variant_from_name(const std::string& name) {
  for (auto v : {BootstrapVariant::torus, BootstrapVariant::n5, BootstrapVariant::lp})
    if (name == variant_name(v)) return v;
  throw PreconditionError("unknown bootstrap variant '" + name + "'");
}

namespace {

template <class Step>
void iterate(BootstrapState& s, double b0, const BootstrapOptions& opt, Step step) {
  s.iterates = {b0};
  double b = b0;
  for (int m = 0; m < opt.max_iterations; ++m) {
    const double next = step(b);
    s.iterates.push_back(next);
    ++s.steps;
    const bool settled = std::abs(next - b) <= opt.tol;
    b = next;
    if (settled && s.steps >= opt.min_iterations) {
      s.converged = true;
      break;
    }
  }
  s.fixed_point = b;
}

} // namespace

BootstrapState bootstrap_torus(int n, double b0, const BootstrapOptions& opt) {
  if (n < 2) throw PreconditionError("torus bootstrap needs n >= 2");
  BootstrapState s;
  s.variant = BootstrapVariant::torus;
  s.n = n;
  s.a = static_cast<double>(n - 1) / (n + 1);
  const double nn = n;
  s.iteration_bound = static_cast<int>(std::floor(((nn - 5) / (nn + 1) + 1) / (4 / (nn + 1)))) + 1;
  iterate(s, b0, opt, [&](double b) {
    return (nn - 1) - std::max(nn - 2 + (nn - 1) / (2 * (nn + 1)) - b / 2, nn - 1 - s.a);
  });
  return s;
}

BootstrapState bootstrap_n5(double b0, const BootstrapOptions& opt) {
  BootstrapState s;
  s.variant = BootstrapVariant::n5;
  s.n = 5;
  s.a = 1.0;
  iterate(s, b0, opt, [](double b) { return (1.0 + b) / 2.0; });
  return s;
}

double lp_k(int n, double b, double p) {
  const double nn = n;
  const double a = (nn - 1) / (nn + 1);
  return (nn - 1 + a) / 2 - 1 + ((nn - 1 - b) / 2) * (2 - 2 / p) + (nn / 2) * (2 / p - 1);
}

double lp_mu(int n, double p) {
  const double nn = n;
  return (nn + 3) / (2 * (nn + 1)) - 1 / p + 0.5 - (2 * nn - (nn + 2) * p) / ((nn + 1) * (p - 1) * p) -
         (nn - 1) / ((nn + 1) * p);
}

BootstrapState bootstrap_lp(int n, double p, double b0, const BootstrapOptions& opt) {
  BootstrapState s;
  s.variant = BootstrapVariant::lp;
  s.n = n;
  s.p = p;
  if (n == 2) {
    s.a = 1.0 / 3.0;
    iterate(s, 0.0, opt, [](double b) { return 1.0 - std::max(1.0 / 6.0 - b / 2, 2.0 / 3.0); });
    return s;
  }
  if (n < 2) throw PreconditionError("lp bootstrap needs n >= 2");
  const double threshold = 2.0 * n / (n + 2.0);
  if (!(p > threshold))
    throw PreconditionError("lp bootstrap needs p > 2n/(n+2) = " + std::to_string(threshold));
  const double nn = n;
  s.a = (nn - 1) / (nn + 1);
  s.mu = lp_mu(n, p);
  iterate(s, b0, opt, [&](double b) { return (nn - 1) - std::max(lp_k(n, b, p), nn - 1 - s.a); });
  return s;
}

ReferenceRemainder reference_remainders(int n) {
  if (n < 2 || n > 8) throw UnsupportedDimension(n);
  ReferenceRemainder r;
  r.n = n;
  switch (n) {
  case 2:
    r.exponent_num = 131;
    r.exponent_den = 208;
    r.log_num = 18627;
    r.log_den = 8320;
    break;
  case 3:
    r.exponent_num = 21;
    r.exponent_den = 16;
    r.epsilon = true;
    break;
  case 4:
    r.exponent_num = 2;
    r.log_num = 2;
    r.log_den = 3;
    break;
  default: r.exponent_num = n - 2; break;
  }
  return r;
}

} // namespace weyl_lab::weyl
