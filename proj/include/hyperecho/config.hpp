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

#ifndef HYPERECHO_CONFIG_HPP
#define HYPERECHO_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hyperecho/channel.hpp"
#include "hyperecho/mbsolver.hpp"
#include "hyperecho/montecarlo.hpp"

namespace hyperecho {

/// Configuration problems; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { fidelity, curve, solve, montecarlo, crosscheck };
enum class PulseKind { flat_top, gaussian };
enum class OutputFormat { csv, json };

std::string_view to_string(Mode mode);
std::string_view to_string(OutputFormat format);
Mode parse_mode(std::string_view text);
OutputFormat parse_format(std::string_view text);

struct ExperimentConfig {
  Mode mode = Mode::fidelity;
  MemoryParams memory = MemoryParams::dimensionless(2.5, 0.01, 0.001);
  /// Unset -> per-mode default (see squeezing_for).
  std::optional<std::vector<double>> squeezing_db;

  int figure = 2;
  std::vector<double> alpha_l_grid;  // empty -> 0, 0.1, ..., 10
  std::vector<double> chi_values{0.0, 0.01, 0.05, 0.1};
  /// Extra optical depths for crosscheck; empty -> memory.alpha_l only.
  std::vector<double> crosscheck_alpha_l;

  SolverGrid grid = SolverGrid::reference();
  ProtocolOptions protocol;
  PulseKind pulse = PulseKind::flat_top;
  SampleConfig sampling;

  std::optional<std::filesystem::path> output_path;
  OutputFormat format = OutputFormat::csv;

  /// Human-readable account of how the memory section was interpreted,
  /// including any physical-to-dimensionless conversion.
  std::string conversion_note;
};

/// Parses a JSON document with sections "memory", "grid", "protocol",
/// "sampling", "curve" and top-level keys "mode", "squeezing_db",
/// "output_path", "format". Unknown keys are errors.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Squeezing values (dB) a mode runs with: the configured list, or
/// {3, 7, 10} for fidelity and figure 3, {7} for figure 2, montecarlo and
/// crosscheck.
std::vector<double> squeezing_for(const ExperimentConfig& cfg);

/// Default optical-depth grid for the curve modes: 0 to 10 in steps of 0.1.
std::vector<double> default_alpha_l_grid();

}  // namespace hyperecho

#endif  // HYPERECHO_CONFIG_HPP
