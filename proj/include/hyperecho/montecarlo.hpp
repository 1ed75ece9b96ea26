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

#ifndef HYPERECHO_MONTECARLO_HPP
#define HYPERECHO_MONTECARLO_HPP

// Statistical oracle for the memory channel. Each sample draws the input
// quadratures and every noise operator of the retrieved mode as Gaussian
// amplitudes with symmetric-ordered variances, then combines them with
// the channel's (spatially integrated) weights.

#include <cstdint>

#include "hyperecho/channel.hpp"
#include "hyperecho/gaussian.hpp"

namespace hyperecho {

struct SampleConfig {
  std::uint64_t n_samples = 1'000'000;
  std::uint64_t seed = 20130601;
  /// Number of contiguous sample ranges accumulated independently (and
  /// in parallel). Each sample's draws depend only on (seed, index), so
  /// the layout affects nothing but floating-point summation order.
  int stream_count = 8;

  void validate() const;
};

struct EmpiricalCovariance {
  double vxx = 0.0;
  double vpp = 0.0;
  double vxp = 0.0;
  double stderr_xx = 0.0;
  double stderr_pp = 0.0;
  double mean_x = 0.0;
  double mean_p = 0.0;
  double stderr_mean_x = 0.0;
  double stderr_mean_p = 0.0;
  std::uint64_t n = 0;

  CovarianceMatrix matrix() const { return {vxx, vpp, vxp}; }
};

enum class NoiseAssembly {
  /// Vacuum leak plus the D, F11, F12, F2 operators, each drawn separately.
  decomposed,
  /// One vacuum-like draw carrying the summed weight (1 - eta).
  aggregate,
};

/// Samples the retrieved mode for x-squeezed vacuum input.
/// Throws ParameterRegimeError if the noise weights are not all
/// non-negative, std::invalid_argument for n_samples < 2.
EmpiricalCovariance sample_output_covariance(double r, const MemoryParams& params,
                                             const SampleConfig& cfg,
                                             NoiseAssembly assembly = NoiseAssembly::decomposed);

struct FidelityEstimate {
  double fidelity = 0.0;
  double uncertainty = 0.0;  // linearized from stderr_xx and stderr_pp
  EmpiricalCovariance covariance;
};

FidelityEstimate estimate_fidelity(double r, const MemoryParams& params, const SampleConfig& cfg,
                                   NoiseAssembly assembly = NoiseAssembly::decomposed);

}  // namespace hyperecho

#endif  // HYPERECHO_MONTECARLO_HPP
