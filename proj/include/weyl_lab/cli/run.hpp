#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "weyl_lab/cli/config.hpp"
#include "weyl_lab/galerkin.hpp"

namespace weyl_lab::cli {

struct RunOutcome {
  int status = 0;
  std::vector<std::string> files;
};

/// Runs config.experiment, writing artifacts into out_dir (config.output_dir when empty).
/// Returns status 2 for invalid configs and 1 for runtime failures, with a message on `err`.
RunOutcome run(const ExperimentConfig& config, const std::string& out_dir, std::ostream& log, std::ostream& err);

/// Spectrum of the configured potential, through the cache when enabled.
galerkin::SpectralData configured_spectrum(const ExperimentConfig& config, const std::string& out_dir,
                                           std::ostream& log);

/// Entry point for `weyl-lab <subcommand> --config <path> [--out <dir>]`.
int main_entry(int argc, char** argv);

} // namespace weyl_lab::cli
