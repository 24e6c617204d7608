#include "weyl_lab/cli/run.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "weyl_lab/cli/cache.hpp"
#include "weyl_lab/cli/output.hpp"
#include "weyl_lab/duhamel.hpp"
#include "weyl_lab/errors.hpp"
#include "weyl_lab/kernels.hpp"
#include "weyl_lab/lattice.hpp"
#include "weyl_lab/mollify.hpp"
#include "weyl_lab/potentials.hpp"
#include "weyl_lab/weyl.hpp"

namespace weyl_lab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Context {
  const ExperimentConfig& config;
  std::string out_dir;
  std::uint64_t hash;
  std::ostream& log;
  std::vector<std::string> files;

  std::string path(const std::string& name) {
    const std::string p = (fs::path(out_dir) / name).string();
    files.push_back(p);
    return p;
  }
};

potentials::PotentialData configured_potential(const ExperimentConfig& c) {
  potentials::PotentialData data = potentials::sample(c.potential, c.G);
  data.fourier = potentials::fourier_coefficients(data, 2 * c.K);
  return data;
}

std::string coords(const Eigen::VectorXd& x) {
  std::string s;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += (i ? " " : "") + format_number(x(i));
  return s;
}

Eigen::VectorXd random_point(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = u(rng);
  return x;
}

void write_series(Context& ctx, const std::string& name, const weyl::RemainderSeries& s, double reliable_band) {
  CsvWriter csv(ctx.path(name), {"lambda", "count", "main", "remainder", "normalized", "reliable"}, ctx.hash);
  for (std::size_t i = 0; i < s.lambda.size(); ++i) {
    csv.cell(s.lambda[i]).cell(s.counts[i]).cell(s.main[i]).cell(s.remainder[i]);
    csv.cell(s.remainder[i] / std::pow(s.lambda[i], s.n - 1));
    csv.cell(std::string(s.lambda[i] <= reliable_band ? "true" : "false"));
    csv.end_row();
  }
}

std::vector<double> ladder(const ExperimentConfig& c) {
  return weyl::geometric_ladder(c.ladder.start, c.ladder.stop, c.ladder.factor);
}

std::vector<double> within(const std::vector<double>& lambdas, double band, std::ostream& log) {
  std::vector<double> out;
  for (double l : lambdas)
    if (l <= band) out.push_back(l);
  if (out.size() < lambdas.size())
    log << "note: dropped " << lambdas.size() - out.size() << " ladder values above the reliable band "
        << format_number(band) << "\n";
  return out;
}

void run_count(Context& ctx) {
  const auto& c = ctx.config;
  if (c.source == "free-exact") {
    write_series(ctx, "count.csv", weyl::build_series(c.n, ladder(c)), std::numeric_limits<double>::infinity());
    return;
  }
  const galerkin::SpectralData S = configured_spectrum(c, ctx.out_dir, ctx.log);
  weyl::RemainderSeries s;
  s.n = c.n;
  s.source = weyl::CountSource::galerkin;
  for (double l : ladder(c)) {
    s.lambda.push_back(l);
    s.counts.push_back(galerkin::counting_function(S, l).count);
    s.main.push_back(lattice::weyl_main_term(c.n, l));
    s.remainder.push_back(static_cast<double>(s.counts.back()) - s.main.back());
  }
  write_series(ctx, "count.csv", s, S.reliable_band);
}

void run_spectrum(Context& ctx) {
  const galerkin::SpectralData S = configured_spectrum(ctx.config, ctx.out_dir, ctx.log);
  CsvWriter csv(ctx.path("spectrum.csv"), {"index", "frequency", "eigenvalue_sq"}, ctx.hash);
  for (Eigen::Index k = 0; k < S.size(); ++k) {
    csv.cell(static_cast<std::int64_t>(k + 1)).cell(S.frequencies(k)).cell(S.eigenvalues_sq(k));
    csv.end_row();
  }
  write_json(ctx.path("spectrum.json"), ctx.config.experiment, ctx.hash,
             {{"n", S.n},
              {"K", S.K},
              {"G", S.provenance.G},
              {"spec_hash", hex64(S.provenance.spec_hash)},
              {"dimension", S.size()},
              {"shift", S.shift},
              {"potential_sup", S.potential_sup},
              {"reliable_band", S.reliable_band}});
}

void run_kato(Context& ctx) {
  const auto& c = ctx.config;
  const potentials::PotentialData data = potentials::sample(c.potential, c.G);
  CsvWriter csv(ctx.path("kato.csv"), {"delta", "kato_norm"}, ctx.hash);
  for (double d : c.deltas) {
    csv.cell(d).cell(potentials::kato_norm(data, d));
    csv.end_row();
  }
}

void run_duhamel(Context& ctx) {
  const auto& c = ctx.config;
  const potentials::PotentialData data = configured_potential(c);
  const galerkin::DiscreteHamiltonian H = galerkin::assemble(c.n, c.K, data);
  const galerkin::SpectralData S_V = configured_spectrum(c, ctx.out_dir, ctx.log);
  const galerkin::SpectralData S_0 = galerkin::free_spectrum(c.n, c.K);
  const mollify::MollifiedIndicator mi{c.lambda, c.mollifier.width(c.lambda), {}};
  const duhamel::ComparisonReport r = duhamel::verify_identity(S_V, S_0, H, mi);
  write_json(ctx.path("duhamel.json"), c.experiment, ctx.hash,
             {{"lambda", r.lambda},
              {"T", r.T},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"residual", r.residual},
              {"rows", r.rows},
              {"cols", r.cols},
              {"status", r.pass ? "PASS" : "FAIL"}});
  ctx.log << "duhamel-check: " << (r.pass ? "PASS" : "FAIL") << " residual=" << format_number(r.residual) << "\n";
}

void run_weyl_fit(Context& ctx) {
  const auto& c = ctx.config;
  weyl::RemainderSeries s;
  double band = std::numeric_limits<double>::infinity();
  if (c.source == "free-exact") {
    s = weyl::build_series(c.n, ladder(c));
  } else {
    const galerkin::SpectralData S = configured_spectrum(c, ctx.out_dir, ctx.log);
    band = S.reliable_band;
    s = weyl::build_series(S, within(ladder(c), band, ctx.log));
  }
  write_series(ctx, "weyl_fit.csv", s, band);
  json fit = nullptr;
  if (!s.lambda.empty()) {
    try {
      const weyl::ExponentFit f = weyl::fit_exponent(s, s.lambda.front(), s.lambda.back());
      fit = {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"bins", f.bin_max.size()}};
    } catch (const InsufficientData& e) {
      ctx.log << "weyl-fit: " << e.what() << "\n";
    }
  }
  json reference = nullptr;
  if (c.n >= 2) {
    const weyl::ReferenceRemainder r = weyl::reference_remainders(c.n);
    reference = {{"exponent", r.exponent()}, {"log_power", r.log_power()}, {"epsilon", r.epsilon}};
  }
  write_json(ctx.path("weyl_fit.json"), c.experiment, ctx.hash,
             {{"n", c.n},
              {"source", c.source},
              {"points", s.lambda.size()},
              {"fit", fit},
              {"hlawka_exponent", (c.n - 1) - static_cast<double>(c.n - 1) / (c.n + 1)},
              {"reference", reference}});
}

void run_band(Context& ctx) {
  const auto& c = ctx.config;
  const weyl::WidthRule rule = weyl::width_rule_from_name(c.width_rule);
  double parameter = c.width_parameter;
  if (parameter < 0.0) parameter = rule == weyl::WidthRule::power ? static_cast<double>(c.n - 1) / (c.n + 1) : 0.5;
  weyl::BandTable table;
  if (c.source == "free-exact") {
    table = weyl::band_experiment(c.n, ladder(c), rule, parameter);
  } else {
    const galerkin::SpectralData S = configured_spectrum(c, ctx.out_dir, ctx.log);
    table = weyl::band_experiment(S, ladder(c), rule, parameter);
  }
  CsvWriter csv(ctx.path("band.csv"), {"lambda", "width", "count", "per_width", "per_power", "normalized", "reliable"},
                ctx.hash);
  for (const auto& row : table.rows) {
    csv.cell(row.lambda).cell(row.width).cell(row.count).cell(row.per_width).cell(row.per_power).cell(row.normalized);
    csv.cell(std::string(row.reliable ? "true" : "false"));
    csv.end_row();
  }
  write_json(ctx.path("band.json"), c.experiment, ctx.hash,
             {{"n", c.n},
              {"rule", weyl::width_rule_name(rule)},
              {"parameter", parameter},
              {"max_normalized", table.max_normalized},
              {"onset", std::isfinite(table.onset) ? json(table.onset) : json(nullptr)}});
}

double inverse_power_bound(int n, int j, double d) {
  if (2 * j < n) return std::pow(d, 2.0 * j - n);
  if (2 * j == n) return std::log(2.0 + 1.0 / d);
  return 1.0;
}

void run_kernels(Context& ctx) {
  const auto& c = ctx.config;
  const galerkin::SpectralData S = configured_spectrum(c, ctx.out_dir, ctx.log);
  std::mt19937_64 rng(c.seed);
  std::vector<kernels::KernelSample> samples;
  const auto add = [&](kernels::KernelKind kind, double param, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       double value, double bound) { samples.push_back({kind, param, x, y, value, bound}); };

  for (double t : {0.05, 0.1, 0.2}) {
    for (int i = 0; i < c.samples; ++i) {
      const Eigen::VectorXd x = random_point(rng, c.n);
      add(kernels::KernelKind::heat, t, x, x, kernels::heat_kernel_diag(S, t, x), kernels::heat_bound(c.n, t));
    }
  }
  json cross_check = json::array();
  for (int j = 1; j <= 2; ++j) {
    for (int i = 0; i < c.samples; ++i) {
      const Eigen::VectorXd x = random_point(rng, c.n), y = random_point(rng, c.n);
      const kernels::InversePowerResult r = kernels::inverse_power_kernel(S, j, x, y);
      const double d = std::max(potentials::periodic_distance(x, y), 1e-12);
      add(kernels::KernelKind::inverse_power, j, x, y, r.direct, inverse_power_bound(c.n, j, d));
      cross_check.push_back(r.difference);
    }
  }
  const double tau = c.lambda;
  int K_res = 1;
  while (!(lattice::free_frequency(static_cast<long>(K_res) * K_res) > 4.0 * tau)) ++K_res;
  K_res = std::max(K_res + 8, 2 * K_res);
  const auto modes = lattice::enumerate_modes(c.n, K_res);
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(c.n);
  for (int i = 1; i <= 10; ++i) {
    Eigen::VectorXd x = origin;
    x(0) = 0.05 * i;
    add(kernels::KernelKind::resolvent, tau, x, origin, kernels::resolvent_kernel(modes, c.n, K_res, tau, x, origin),
        kernels::resolvent_bound(c.n, tau, 0.05 * i, 4));
  }
  for (double l : ladder(c)) {
    if (2.0 * l > S.reliable_band) break;
    const kernels::DyadicResult r = kernels::dyadic_projector_sup(S, l);
    add(kernels::KernelKind::dyadic_projector, l, origin, origin, r.sup, std::pow(l, c.n));
  }

  CsvWriter csv(ctx.path("kernels.csv"), {"kind", "parameter", "x", "y", "value", "bound_value"}, ctx.hash);
  for (const auto& s : samples) {
    csv.cell(std::string(kernels::kind_name(s.kind))).cell(s.parameter).cell(coords(s.x)).cell(coords(s.y));
    csv.cell(s.value).cell(s.bound_value);
    csv.end_row();
  }
  json fits;
  for (auto kind : {kernels::KernelKind::heat, kernels::KernelKind::inverse_power, kernels::KernelKind::resolvent,
                    kernels::KernelKind::dyadic_projector}) {
    std::vector<kernels::KernelSample> subset;
    for (const auto& s : samples)
      if (s.kind == kind) subset.push_back(s);
    fits[kernels::kind_name(kind)] = subset.empty() ? json(nullptr) : json(kernels::fit_constant(subset));
  }
  write_json(ctx.path("kernels.json"), c.experiment, ctx.hash,
             {{"fitted_constants", fits}, {"inverse_power_cross_check", cross_check}, {"resolvent_truncation", K_res}});
}

void run_bootstrap(Context& ctx) {
  const auto& c = ctx.config;
  weyl::BootstrapState s;
  switch (weyl::variant_from_name(c.variant)) {
  case weyl::BootstrapVariant::torus: s = weyl::bootstrap_torus(c.n, c.b0); break;
  case weyl::BootstrapVariant::n5: s = weyl::bootstrap_n5(c.b0); break;
  case weyl::BootstrapVariant::lp: s = weyl::bootstrap_lp(c.n, c.p, c.b0); break;
  }
  json body = {{"variant", weyl::variant_name(s.variant)},
               {"n", s.n},
               {"p", s.variant == weyl::BootstrapVariant::lp ? json(s.p) : json(nullptr)},
               {"a", s.a},
               {"iterates", s.iterates},
               {"fixed_point", s.fixed_point},
               {"steps", s.steps},
               {"converged", s.converged}};
  if (s.variant == weyl::BootstrapVariant::torus) body["iteration_bound"] = s.iteration_bound;
  if (s.variant == weyl::BootstrapVariant::lp && s.n >= 3) body["mu"] = s.mu;
  write_json(ctx.path("bootstrap.json"), c.experiment, ctx.hash, body);
}

} // namespace

galerkin::SpectralData configured_spectrum(const ExperimentConfig& c, const std::string& out_dir, std::ostream& log) {
  const potentials::PotentialData data = configured_potential(c);
  const CacheKey key{c.n, c.K, c.G, potentials::spec_hash(c.potential)};
  const SpectrumCache cache(SpectrumCache::default_directory(out_dir));
  if (c.cache) {
    std::string warning;
    if (auto hit = cache.lookup(key, &warning)) return *hit;
    if (!warning.empty()) log << "warning: " << warning << "\n";
  }
  galerkin::SpectralData S = galerkin::diagonalize(galerkin::assemble(c.n, c.K, data));
  if (c.cache) cache.store(key, S);
  return S;
}

RunOutcome run(const ExperimentConfig& config, const std::string& out_dir, std::ostream& log, std::ostream& err) {
  RunOutcome outcome;
  try {
    validate(config);
  } catch (const std::exception& e) {
    err << "invalid config: " << e.what() << "\n";
    outcome.status = 2;
    return outcome;
  }
  Context ctx{config, out_dir.empty() ? config.output_dir : out_dir, config_hash(config), log, {}};
  try {
    fs::create_directories(ctx.out_dir);
    const std::string& e = config.experiment;
    if (e == "count") run_count(ctx);
    else if (e == "spectrum") run_spectrum(ctx);
    else if (e == "kato") run_kato(ctx);
    else if (e == "duhamel-check") run_duhamel(ctx);
    else if (e == "weyl-fit") run_weyl_fit(ctx);
    else if (e == "band") run_band(ctx);
    else if (e == "kernels") run_kernels(ctx);
    else if (e == "bootstrap") run_bootstrap(ctx);
  } catch (const std::invalid_argument& e) {
    err << "precondition violated: " << e.what() << "\n";
    outcome.status = 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    outcome.status = 1;
  }
  outcome.files = ctx.files;
  return outcome;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Spectral counting experiments on flat tori"};
  app.set_version_flag("--version", std::string(library_version()));
  app.require_subcommand(1);
  std::string config_path, out_dir;
  for (const auto& name : experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
  }
  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  ExperimentConfig config;
  try {
    config = load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return 2;
  }
  if (config.experiment.empty()) config.experiment = name;
  if (config.experiment != name) {
    std::cerr << "invalid config: experiment '" << config.experiment << "' does not match subcommand '" << name
              << "'\n";
    return 2;
  }
  const RunOutcome outcome = run(config, out_dir, std::cerr, std::cerr);
  for (const auto& f : outcome.files) std::cout << f << "\n";
  return outcome.status;
}

} // namespace weyl_lab::cli
