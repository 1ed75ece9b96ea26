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

#ifndef HYPERECHO_MBSOLVER_HPP
#define HYPERECHO_MBSOLVER_HPP

// Mean-field Maxwell-Bloch integration of absorption, rephasing and
// backward retrieval in an inhomogeneously broadened two-level medium.
//
// Units: time in pulse lengths tau, detuning and rates in 1/tau, position
// in medium lengths L. With s the rescaled coherence of one detuning
// class and a the slowly varying field,
//
//     d_z a = +/- i (alpha L / 2 pi) Int dDelta s(z, t, Delta)
//     d_t s = (i Delta - Gamma / 2) s + i a
//
// (+ forward, - backward). For a broad flat spectrum this reproduces the
// amplitude absorption law d_z a = -(alpha L / 2) a. Retardation is
// dropped, so every time step is a sweep in z.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hyperecho/channel.hpp"

namespace hyperecho {

using Complex = std::complex<double>;

class SolverInstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Discretization of one protocol run.
struct SolverGrid {
  int n_z = 128;
  int n_t = 512;
  int n_delta = 256;
  /// Half-width W of the simulated detuning window [-W, W], in 1/tau. The
  /// physical line (gamma) is usually far broader; only the part that
  /// overlaps the pulse spectrum is simulated.
  double delta_half_width = 100.0;
  double absorption_window = 1.25;  // tau
  double retrieval_window = 2.0;    // tau

  /// How refinement treats the detuning axis.
  enum class DetuningRefinement {
    /// Spacing kept, window widened: approaches the broadband line the
    /// closed-form results assume.
    widen_window,
    /// Window kept, spacing divided: isolates the integrator's own error.
    fixed_window,
  };

  static SolverGrid reference() { return {}; }

  /// n_z and n_t intervals multiplied by `factor`; the detuning axis gains
  /// `factor` times as many intervals according to `mode`.
  SolverGrid refined(int factor,
                     DetuningRefinement mode = DetuningRefinement::widen_window) const;

  /// Detuning half-width actually simulated: the grid window, or half the
  /// inhomogeneous width when that is narrower.
  double simulated_half_width(const MemoryParams& params) const;

  double dz() const { return 1.0 / (n_z - 1); }
  double dt_absorption() const { return absorption_window / (n_t - 1); }
  double dt_retrieval() const { return retrieval_window / (n_t - 1); }
  double delta_spacing() const { return 2.0 * delta_half_width / (n_delta - 1); }

  /// Largest per-step phase W dt of any detuning class; diagnostic only
  /// since free evolution is integrated exactly.
  double courant() const;

  /// Throws std::invalid_argument if below minimum resolution (n_z >= 16,
  /// n_t >= 64, n_delta >= 32), if the window does not reach 10/tau, or if
  /// the comb's rephasing period 2 pi / dDelta falls inside a stage.
  void validate() const;
};

/// Real input envelope on [0, tau], normalized to unit energy.
class PulseShape {
 public:
  /// Flat top with sin^2 edges; `ramp_fraction` of tau on each side.
  static PulseShape flat_top(double ramp_fraction = 0.05);
  /// Gaussian centred at tau/2 with the given rms width (in tau),
  /// truncated to [0, tau].
  static PulseShape gaussian(double rms_width = 0.12);

  double operator()(double t) const;
  PulseShape scaled(double factor) const;
  double peak_amplitude() const { return amplitude_ * peak_; }

 private:
  PulseShape(std::function<double(double)> envelope, double peak);

  std::function<double(double)> envelope_;
  double amplitude_ = 1.0;
  double peak_ = 1.0;
};

/// Atomic coherence sampled on (z, Delta) nodes.
struct CoherenceField {
  int n_z = 0;
  int n_delta = 0;
  double coupling = 0.0;  // alpha L / 2 pi
  std::vector<double> detuning;
  std::vector<double> weights;  // trapezoidal dDelta weights
  std::vector<Complex> sigma;   // row-major [z][delta]
  double input_energy = 0.0;    // energy of the pulse that wrote this field
  double input_peak = 0.0;      // peak |a| of that pulse

  CoherenceField() = default;
  CoherenceField(int n_z, int n_delta, double half_width, double alpha_l);

  Complex& at(int iz, int id) { return sigma[static_cast<std::size_t>(iz) * n_delta + id]; }
  const Complex& at(int iz, int id) const {
    return sigma[static_cast<std::size_t>(iz) * n_delta + id];
  }
  double dz() const { return 1.0 / (n_z - 1); }

  /// Energy held by the atoms, in the same units as the pulse energy.
  double excitation_energy() const;
  bool all_finite() const;
};

struct AbsorptionResult {
  std::vector<double> time;
  std::vector<Complex> input_profile;
  std::vector<Complex> transmitted_profile;  // field at z = L
  double input_energy = 0.0;
  double transmission = 0.0;
  CoherenceField coherence;  // state at the end of the absorption window
};

struct EchoResult {
  std::vector<double> time;                 // retrieval clock, 0 = rephasing instant
  std::vector<Complex> echo_profile;        // field at z = 0
  std::vector<Complex> transmitted_profile; // absorption stage, field at z = L
  double efficiency = 0.0;                  // echo-window energy / input energy
  double transmission = 0.0;
  double echo_peak_time = 0.0;
  double secondary_emission = 0.0;   // energy emitted outside the echo window
  double residual_excitation = 0.0;  // energy left in the atoms after retrieval
  std::optional<double> mode_overlap;
};

AbsorptionResult absorb(const PulseShape& pulse, const MemoryParams& params,
                        const SolverGrid& grid);

/// Free evolution without decay over `duration` (tau): sigma *= e^{i Delta duration}.
CoherenceField evolve_free(const CoherenceField& coh, double duration);

/// Instantaneous rephasing at t5: sigma_b = sigma_f e^{-i Delta T}, times
/// the excited-state decay factor e^{-excited_decay / 2} lumped over the
/// storage interval.
CoherenceField rephase(const CoherenceField& coh, double storage_time, double excited_decay);

/// Backward emission with vacuum input at z = L. When `reference` is
/// given, the echo's mode overlap with it is reported.
EchoResult retrieve(const CoherenceField& coh_b, const MemoryParams& params,
                    const SolverGrid& grid, const PulseShape* reference = nullptr,
                    double echo_half_window = 1.0);

struct ProtocolOptions {
  /// Storage time in tau. When unset, chi / gamma_tau, or 10 if gamma_tau = 0.
  std::optional<double> storage_time;
  /// Fraction of the storage time spent in |e>; the rest sits in |s>,
  /// which does not decay.
  double excited_fraction = 1.0;
  double echo_half_window = 1.0;
};

EchoResult run_protocol(const MemoryParams& params, const SolverGrid& grid,
                        const PulseShape& pulse, const ProtocolOptions& options = {});

/// |<a|b>|^2 / (<a|a><b|b>) on a common sample grid.
double mode_overlap(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace hyperecho

#endif  // HYPERECHO_MBSOLVER_HPP
