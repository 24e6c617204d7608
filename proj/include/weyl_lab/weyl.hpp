#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "weyl_lab/galerkin.hpp"

namespace weyl_lab::weyl {

enum class CountSource { free_exact, galerkin };

const char* source_name(CountSource source);

/// Samples of R(lambda) = N(lambda) - (2 pi)^{-n} omega_n lambda^n.
struct RemainderSeries {
  int n = 0;
  CountSource source = CountSource::free_exact;
  std::vector<double> lambda;
  std::vector<std::int64_t> counts;
  std::vector<double> main;
  std::vector<double> remainder;
  galerkin::Provenance provenance;
};

/// `points` values from start to stop, equally spaced in log lambda.
std::vector<double> geometric_grid(double start, double stop, int points);
/// start, start * factor, ... while <= stop.
std::vector<double> geometric_ladder(double start, double stop, double factor);

RemainderSeries build_series(int n, const std::vector<double>& lambdas);
/// Galerkin counts; every lambda must lie in the reliable band.
RemainderSeries build_series(const galerkin::SpectralData& S, const std::vector<double>& lambdas);

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<double> bin_lambda; // argmax lambda in each dyadic block
  std::vector<double> bin_max;    // max |R| in each dyadic block
};

/// Dyadic max-binning of |R| over [lo, hi], then least squares of log max|R| on log lambda.
/// Throws InsufficientData with fewer than 8 nonzero samples or 2 bins.
ExponentFit fit_exponent(const std::vector<double>& lambda, const std::vector<double>& remainder, double lo, double hi);
ExponentFit fit_exponent(const RemainderSeries& series, double lo, double hi);

enum class WidthRule { fixed, power, inverse_log, unit };

const char* width_rule_name(WidthRule rule);
WidthRule width_rule_from_name(const std::string& name);

/// fixed: parameter; power: lambda^{-parameter}; inverse_log: 1/log(lambda); unit: 1.
double band_width(WidthRule rule, double parameter, double lambda);

struct BandRow {
  double lambda = 0.0;
  double width = 0.0;
  std::int64_t count = 0;      // #{tau in [lambda, lambda + width)}
  double per_width = 0.0;      // count / (width lambda^{n-1})
  double per_power = 0.0;      // count / lambda^{n-1-a}, a = (n-1)/(n+1)
  double normalized = 0.0;     // per_power for the power rule, per_width otherwise
  bool reliable = true;
};

struct BandTable {
  int n = 0;
  WidthRule rule = WidthRule::unit;
  double parameter = 0.0;
  std::vector<BandRow> rows;
  double max_normalized = 0.0;
  /// Smallest ladder lambda past which every normalized ratio stays within
  /// twice the median of the upper half of the ladder.
  double onset = 0.0;
};

BandTable band_experiment(int n, const std::vector<double>& lambdas, WidthRule rule, double parameter);
BandTable band_experiment(const galerkin::SpectralData& S, const std::vector<double>& lambdas, WidthRule rule,
                          double parameter);

enum class BootstrapVariant { torus, n5, lp };

const char* variant_name(BootstrapVariant variant);
BootstrapVariant variant_from_name(const std::string& name);

struct BootstrapOptions {
  double tol = 1e-14;
  int max_iterations = 200;
  int min_iterations = 0;
};

struct BootstrapState {
  BootstrapVariant variant = BootstrapVariant::torus;
  int n = 0;
  double p = 0.0; // lp only
  double a = 0.0;
  std::vector<double> iterates;
  bool converged = false;
  double fixed_point = 0.0;
  int steps = 0;
  int iteration_bound = 0; // torus: floor(((n-5)/(n+1) + 1) / (4/(n+1))) + 1
  double mu = 0.0;         // lp: mu(p)
};

/// n - 1 - b' = max{n - 2 + (n-1)/(2(n+1)) - b/2, n - 1 - a}.
BootstrapState bootstrap_torus(int n, double b0 = -1.0, const BootstrapOptions& opt = {});
/// b' = (1 + b)/2.
BootstrapState bootstrap_n5(double b0 = -1.0, const BootstrapOptions& opt = {});
/// n - 1 - b' = max{k(b, p), n - 1 - a}; n = 2 uses 1 - b' = max{1/6 - b/2, 2/3} from b0 = 0.
BootstrapState bootstrap_lp(int n, double p, double b0 = -1.0, const BootstrapOptions& opt = {});

double lp_k(int n, double b, double p);
double lp_mu(int n, double p);

/// Known free-torus remainder orders lambda^e (log lambda)^l.
struct ReferenceRemainder {
  int n = 0;
  long exponent_num = 0;
  long exponent_den = 1;
  bool epsilon = false;
  long log_num = 0;
  long log_den = 1;

  double exponent() const { return static_cast<double>(exponent_num) / static_cast<double>(exponent_den); }
  double log_power() const { return static_cast<double>(log_num) / static_cast<double>(log_den); }
};

ReferenceRemainder reference_remainders(int n);

} // namespace weyl_lab::weyl
