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

#ifndef HYPERECHO_EXPERIMENTS_HPP
#define HYPERECHO_EXPERIMENTS_HPP

// Experiment drivers behind the command-line tool. Each returns the full
// text of the file it would write; output is a pure function of the
// configuration (and seed).
//
// CSV files: first line "# hyperecho <version> mode=... <parameters>",
// then a header row, numbers with 9 significant digits, '\n' line ends.
// JSON files: keys sorted, first key "//" holding the same header text.

#include <string>

#include "hyperecho/config.hpp"

namespace hyperecho {

struct RunOutput {
  std::string content;
  /// False when a requested check failed (crosscheck only).
  bool all_pass = true;
};

/// Locale-independent shortest form with 9 significant digits.
std::string format_number(double value);

/// Leading comment line (without the "# " prefix for JSON use).
std::string provenance(const ExperimentConfig& cfg);

RunOutput run_fidelity(const ExperimentConfig& cfg);
RunOutput run_figure2(const ExperimentConfig& cfg);
RunOutput run_figure3(const ExperimentConfig& cfg);
RunOutput run_solve(const ExperimentConfig& cfg);
RunOutput run_montecarlo(const ExperimentConfig& cfg);
RunOutput run_crosscheck(const ExperimentConfig& cfg);

/// Dispatches on cfg.mode (and cfg.figure for curves).
RunOutput run_experiment(const ExperimentConfig& cfg);

}  // namespace hyperecho

#endif  // HYPERECHO_EXPERIMENTS_HPP
