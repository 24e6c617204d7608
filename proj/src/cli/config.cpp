#include "weyl_lab/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "weyl_lab/errors.hpp"

namespace weyl_lab::cli {

using nlohmann::json;

double MollifierRule::width(double lambda) const {
  switch (rule) {
  case TRule::constant: return std::max(1.0, T);
  case TRule::power: return std::max(1.0, std::pow(lambda, exponent));
  case TRule::log: return std::max(1.0, std::log(lambda));
  }
  return 1.0;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"count", "spectrum", "kato", "duhamel-check",
                                                 "weyl-fit", "band", "kernels", "bootstrap"};
  return names;
}

namespace {

const char* t_rule_name(TRule r) {
  switch (r) {
  case TRule::constant: return "constant";
  case TRule::power: return "power";
  case TRule::log: return "log";
  }
  return "constant";
}

TRule t_rule_from_name(const std::string& s) {
  for (auto r : {TRule::constant, TRule::power, TRule::log})
    if (s == t_rule_name(r)) return r;
  throw PreconditionError("mollifier.rule must be constant, power or log (got '" + s + "')");
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vector_from(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  std::set<std::string> keys(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key())) throw PreconditionError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw PreconditionError(std::string("config key '") + key + "' has the wrong type");
  }
}

bool same_spec(const potentials::PotentialSpec& a, const potentials::PotentialSpec& b) {
  if (a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i)
    if (a.terms[i].k != b.terms[i].k || a.terms[i].coefficient != b.terms[i].coefficient) return false;
  return a.n == b.n && a.kind == b.kind && a.amplitude == b.amplitude && a.alpha == b.alpha &&
         a.epsilon == b.epsilon && a.radius == b.radius && a.background == b.background &&
         a.center.size() == b.center.size() && a.center == b.center && a.custom_grid_size == b.custom_grid_size &&
         a.custom_grid_offset == b.custom_grid_offset && a.grid_values.size() == b.grid_values.size() &&
         a.grid_values == b.grid_values;
}

} // namespace

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.experiment == b.experiment && a.n == b.n && a.K == b.K && a.G == b.G && same_spec(a.potential, b.potential) &&
         a.mollifier.rule == b.mollifier.rule && a.mollifier.T == b.mollifier.T &&
         a.mollifier.exponent == b.mollifier.exponent && a.ladder.start == b.ladder.start &&
         a.ladder.stop == b.ladder.stop && a.ladder.factor == b.ladder.factor && a.output_dir == b.output_dir &&
         a.cache == b.cache && a.seed == b.seed && a.lambda == b.lambda && a.source == b.source &&
         a.width_rule == b.width_rule && a.width_parameter == b.width_parameter && a.variant == b.variant &&
         a.p == b.p && a.b0 == b.b0 && a.deltas == b.deltas && a.samples == b.samples;
}

json potential_to_json(const potentials::PotentialSpec& s) {
  using potentials::PotentialKind;
  json j;
  j["kind"] = potentials::kind_name(s.kind);
  switch (s.kind) {
  case PotentialKind::constant: j["amplitude"] = s.amplitude; break;
  case PotentialKind::cosine_sum: {
    json terms = json::array();
    for (const auto& t : s.terms) {
      json k = json::array();
      for (Eigen::Index i = 0; i < t.k.size(); ++i) k.push_back(t.k(i));
      terms.push_back({{"k", k}, {"coefficient", t.coefficient}});
    }
    j["terms"] = terms;
    break;
  }
  case PotentialKind::radial_power:
    j["amplitude"] = s.amplitude;
    j["alpha"] = s.alpha;
    j["epsilon"] = s.epsilon;
    if (s.center.size()) j["center"] = vector_json(s.center);
    break;
  case PotentialKind::indicator_well:
    j["amplitude"] = s.amplitude;
    j["background"] = s.background;
    j["radius"] = s.radius;
    if (s.center.size()) j["center"] = vector_json(s.center);
    break;
  case PotentialKind::custom_grid:
    j["grid_size"] = s.custom_grid_size;
    j["offset"] = s.custom_grid_offset;
    j["values"] = vector_json(s.grid_values);
    break;
  }
  return j;
}

potentials::PotentialSpec potential_from_json(const json& j, int n) {
  using potentials::PotentialKind;
  if (!j.is_object() || !j.contains("kind")) throw PreconditionError("potential needs a 'kind'");
  reject_unknown(j, {"kind", "amplitude", "alpha", "epsilon", "center", "background", "radius", "terms", "grid_size",
                     "offset", "values"},
                 "potential");
  potentials::PotentialSpec s;
  s.n = n;
  s.kind = potentials::kind_from_name(j.at("kind").get<std::string>());
  read(j, "amplitude", s.amplitude);
  read(j, "alpha", s.alpha);
  read(j, "epsilon", s.epsilon);
  read(j, "background", s.background);
  read(j, "radius", s.radius);
  if (j.contains("center")) s.center = vector_from(j.at("center"));
  if (s.center.size() && s.center.size() != n) throw PreconditionError("potential.center must have n entries");
  if (j.contains("terms")) {
    for (const auto& t : j.at("terms")) {
      potentials::CosineTerm term;
      const auto& k = t.at("k");
      if (static_cast<int>(k.size()) != n) throw PreconditionError("cosine term k must have n entries");
      term.k.resize(n);
      for (int i = 0; i < n; ++i) term.k(i) = k[static_cast<std::size_t>(i)].get<int>();
      term.coefficient = t.at("coefficient").get<double>();
      s.terms.push_back(term);
    }
  }
  read(j, "grid_size", s.custom_grid_size);
  read(j, "offset", s.custom_grid_offset);
  if (j.contains("values")) s.grid_values = vector_from(j.at("values"));
  return s;
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["n"] = c.n;
  j["K"] = c.K;
  j["G"] = c.G;
  j["potential"] = potential_to_json(c.potential);
  j["mollifier"] = {{"rule", t_rule_name(c.mollifier.rule)}, {"T", c.mollifier.T}, {"exponent", c.mollifier.exponent}};
  j["ladder"] = {{"start", c.ladder.start}, {"stop", c.ladder.stop}, {"factor", c.ladder.factor}};
  j["output_dir"] = c.output_dir;
  j["cache"] = c.cache;
  j["seed"] = c.seed;
  j["lambda"] = c.lambda;
  j["source"] = c.source;
  j["width_rule"] = c.width_rule;
  j["width_parameter"] = c.width_parameter;
  j["variant"] = c.variant;
  j["p"] = c.p;
  j["b0"] = c.b0;
  j["deltas"] = c.deltas;
  j["samples"] = c.samples;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw PreconditionError("config must be a JSON object");
  reject_unknown(j, {"experiment", "n", "K", "G", "potential", "mollifier", "ladder", "output_dir", "cache", "seed",
                     "lambda", "source", "width_rule", "width_parameter", "variant", "p", "b0", "deltas", "samples"},
                 "config");
  ExperimentConfig c;
  read(j, "experiment", c.experiment);
  read(j, "n", c.n);
  read(j, "K", c.K);
  read(j, "G", c.G);
  c.potential = potentials::constant(c.n, 0.0);
  if (j.contains("potential")) c.potential = potential_from_json(j.at("potential"), c.n);
  if (j.contains("mollifier")) {
    const auto& m = j.at("mollifier");
    reject_unknown(m, {"rule", "T", "exponent"}, "mollifier");
    if (m.contains("rule")) c.mollifier.rule = t_rule_from_name(m.at("rule").get<std::string>());
    read(m, "T", c.mollifier.T);
    read(m, "exponent", c.mollifier.exponent);
  }
  if (j.contains("ladder")) {
    const auto& l = j.at("ladder");
    reject_unknown(l, {"start", "stop", "factor"}, "ladder");
    read(l, "start", c.ladder.start);
    read(l, "stop", c.ladder.stop);
    read(l, "factor", c.ladder.factor);
  }
  read(j, "output_dir", c.output_dir);
  read(j, "cache", c.cache);
  read(j, "seed", c.seed);
  read(j, "lambda", c.lambda);
  read(j, "source", c.source);
  read(j, "width_rule", c.width_rule);
  read(j, "width_parameter", c.width_parameter);
  read(j, "variant", c.variant);
  read(j, "p", c.p);
  read(j, "b0", c.b0);
  read(j, "deltas", c.deltas);
  read(j, "samples", c.samples);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw PreconditionError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void validate(const ExperimentConfig& c) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), c.experiment) == names.end())
    throw PreconditionError("unknown experiment '" + c.experiment + "'");
  // Bootstrap recurrences are plain arithmetic and cover the reference dimensions.
  const int max_n = c.experiment == "bootstrap" ? 8 : 4;
  if (c.n < 1 || c.n > max_n) throw PreconditionError("n must be in 1.." + std::to_string(max_n));
  if (c.K < 0) throw PreconditionError("K must be >= 0");
  if (c.G < 4 || c.G % 2 != 0) throw PreconditionError("G must be even and >= 4");
  if (c.potential.n != c.n) throw PreconditionError("potential dimension must equal n");
  if (!(c.ladder.start > 0.0) || !(c.ladder.stop > c.ladder.start) || !(c.ladder.factor > 1.0))
    throw PreconditionError("ladder needs 0 < start < stop and factor > 1");
  if (c.mollifier.rule == TRule::constant && !(c.mollifier.T >= 1.0)) throw PreconditionError("mollifier.T must be >= 1");
  if (c.source != "free-exact" && c.source != "galerkin") throw PreconditionError("source must be free-exact or galerkin");
  for (double d : c.deltas)
    if (!(d > 0.0 && d <= 0.5)) throw PreconditionError("kato deltas must lie in (0, 1/2]");
  if (c.samples < 1) throw PreconditionError("samples must be >= 1");
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

} // namespace weyl_lab::cli
