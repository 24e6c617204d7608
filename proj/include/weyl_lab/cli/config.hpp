#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weyl_lab/potentials.hpp"

namespace weyl_lab::cli {

enum class TRule { constant, power, log };

/// Mollifier width: T constant, T = lambda^exponent, or T = log(lambda); never below 1.
struct MollifierRule {
  TRule rule = TRule::constant;
  double T = 1.0;
  double exponent = 1.0 / 3.0;

  double width(double lambda) const;
};

struct Ladder {
  double start = 10.0;
  double stop = 1000.0;
  double factor = 1.1;
};

struct ExperimentConfig {
  std::string experiment;
  int n = 2;
  int K = 8;
  int G = 32;
  potentials::PotentialSpec potential;
  MollifierRule mollifier;
  Ladder ladder;
  std::string output_dir = "out";
  bool cache = true;
  std::uint64_t seed = 1;

  // Experiment-specific knobs; defaults cover the common runs.
  double lambda = 10.0;             // duhamel-check, kernels (tau)
  std::string source = "free-exact"; // count, weyl-fit: free-exact | galerkin
  std::string width_rule = "power";  // band: fixed | power | inverse-log | unit
  double width_parameter = -1.0;     // band: <0 means a = (n-1)/(n+1) for power, 0.5 for fixed
  std::string variant = "torus";     // bootstrap: torus | n5 | lp
  double p = 2.0;                    // bootstrap lp
  double b0 = -1.0;                  // bootstrap start
  std::vector<double> deltas = {0.4, 0.2, 0.1, 0.05}; // kato
  int samples = 10;                  // kernels: points per family

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
};

const std::vector<std::string>& experiment_names();

nlohmann::json to_json(const ExperimentConfig& config);
/// Missing keys take defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Throws PreconditionError naming the violated constraint.
void validate(const ExperimentConfig& config);

nlohmann::json potential_to_json(const potentials::PotentialSpec& spec);
potentials::PotentialSpec potential_from_json(const nlohmann::json& j, int n);

/// FNV-1a over the canonical JSON dump.
std::uint64_t config_hash(const ExperimentConfig& config);
std::string hex64(std::uint64_t value);

} // namespace weyl_lab::cli
