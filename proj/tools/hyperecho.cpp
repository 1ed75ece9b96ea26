// Copyright 2026 The hyperecho Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end.
//
//   hyperecho fidelity    [--config F] [--out F] [--format csv|json]
//   hyperecho curve       --figure 2|3 [...]
//   hyperecho solve       [...]
//   hyperecho montecarlo  [--seed N] [...]
//   hyperecho crosscheck  [--seed N] [...]
//
// Exit status: 0 success, 1 a crosscheck point failed, 2 configuration or
// engine error. Malformed arguments exit with CLI11's parse-error codes.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hyperecho/experiments.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::optional<std::uint64_t> seed;
  int figure = 0;
};

void add_common(CLI::App* cmd, Options& opt, bool with_seed) {
  cmd->add_option("--config", opt.config_path, "JSON configuration file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opt.out_path, "Output file (default: config output_path or stdout)");
  cmd->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  if (with_seed) cmd->add_option("--seed", opt.seed, "Monte-Carlo seed");
}

int run(hyperecho::Mode mode, const Options& opt) {
  using namespace hyperecho;
  ExperimentConfig cfg = opt.config_path.empty() ? ExperimentConfig{}
                                                 : load_config(opt.config_path);
  cfg.mode = mode;
  if (!opt.format.empty()) cfg.format = parse_format(opt.format);
  if (opt.seed) cfg.sampling.seed = *opt.seed;
  if (opt.figure != 0) cfg.figure = opt.figure;
  if (!opt.out_path.empty()) cfg.output_path = opt.out_path;

  if (!cfg.conversion_note.empty()) std::cerr << cfg.conversion_note << '\n';
  if (cfg.memory.broadband_warning()) {
    std::cerr << "warning: bandwidth_tau < 10, the broadband-line assumption is weak\n";
  }

  const RunOutput out = run_experiment(cfg);
  if (cfg.output_path) {
    std::ofstream file(*cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!file) throw ConfigError("cannot open output_path '" + cfg.output_path->string() + "'");
    file << out.content;
    if (!file.flush()) throw ConfigError("write failed: " + cfg.output_path->string());
  } else {
    std::cout << out.content << std::flush;
  }
  return out.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-echo quantum memory simulator"};
  app.set_version_flag("--version", std::string(HYPERECHO_VERSION));
  app.require_subcommand(1);

  Options opt;
  auto* fidelity = app.add_subcommand("fidelity", "Fidelity table at the configured point");
  auto* curve = app.add_subcommand("curve", "Fidelity versus optical depth");
  auto* solve = app.add_subcommand("solve", "Maxwell-Bloch protocol run");
  auto* montecarlo = app.add_subcommand("montecarlo", "Sampled output covariance");
  auto* crosscheck = app.add_subcommand("crosscheck", "Analytic / PDE / Monte-Carlo comparison");
  add_common(fidelity, opt, false);
  add_common(curve, opt, false);
  add_common(solve, opt, false);
  add_common(montecarlo, opt, true);
  add_common(crosscheck, opt, true);
  curve->add_option("--figure", opt.figure, "Figure to reproduce")
      ->required()
      ->check(CLI::IsMember({2, 3}));

  CLI11_PARSE(app, argc, argv);

  using hyperecho::Mode;
  const Mode mode = fidelity->parsed()     ? Mode::fidelity
                    : curve->parsed()      ? Mode::curve
                    : solve->parsed()      ? Mode::solve
                    : montecarlo->parsed() ? Mode::montecarlo
                                           : Mode::crosscheck;
  try {
    return run(mode, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
