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

#ifndef HYPERECHO_CHANNEL_HPP
#define HYPERECHO_CHANNEL_HPP

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperecho/gaussian.hpp"

namespace hyperecho {

/// Raised when a parameter combination leaves the region where the
/// Langevin noise variances are all non-negative.
class ParameterRegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// How a bandwidth given in physical units is to be read.
enum class BandwidthUnit { hertz, radians_per_second };

/// Memory parameters in SI units. The optical depth is either `alpha_l`
/// or the product alpha * length; when both are present they must agree.
///
/// `decay_rate` (excited-state decay, 1/s) is always a rate, never an
/// ordinary frequency. Only `bandwidth` (inhomogeneous width) carries a
/// unit choice, and it only feeds the validity check.
struct PhysicalParams {
  std::optional<double> alpha;   // 1/m
  std::optional<double> length;  // m
  std::optional<double> alpha_l;
  double decay_rate = 0.0;      // Gamma, 1/s
  double storage_time = 0.0;    // T, s
  double pulse_duration = 0.0;  // tau, s
  double bandwidth = 0.0;       // gamma
  BandwidthUnit bandwidth_unit = BandwidthUnit::hertz;
};

/// Dimensionless memory parameters.
///
///   alpha_l    optical depth
///   chi        Gamma T, decay budget of one storage cycle
///   gamma_tau  Gamma tau, decay over one pulse length
///   gamma_t0   Gamma |t0|, age of the initial atomic operator at t = 0
///   bandwidth_tau  gamma tau (optional; validity check only)
class MemoryParams {
 public:
  /// Builds from dimensionless groups. gamma_t0 defaults to chi + gamma_tau,
  /// i.e. t0 at the start of absorption.
  static MemoryParams dimensionless(double alpha_l, double chi, double gamma_tau = 0.0,
                                    std::optional<double> gamma_t0 = std::nullopt,
                                    std::optional<double> bandwidth_tau = std::nullopt);
  static MemoryParams from_physical(const PhysicalParams& phys);

  double alpha_l() const { return alpha_l_; }
  double chi() const { return chi_; }
  double gamma_tau() const { return gamma_tau_; }
  double gamma_t0() const { return gamma_t0_; }
  std::optional<double> bandwidth_tau() const { return bandwidth_tau_; }

  /// Storage time in units of the pulse length, chi / gamma_tau, when
  /// defined (gamma_tau > 0).
  std::optional<double> storage_time_over_tau() const;

  /// True when the broadband (gamma tau >> 1) approximation is doubtful,
  /// i.e. bandwidth_tau is known and below 10. Not an error.
  bool broadband_warning() const;

  MemoryParams with_alpha_l(double alpha_l) const;
  MemoryParams with_chi(double chi) const;

 private:
  MemoryParams(double alpha_l, double chi, double gamma_tau, double gamma_t0,
               std::optional<double> bandwidth_tau);

  double alpha_l_;
  double chi_;
  double gamma_tau_;
  double gamma_t0_;
  std::optional<double> bandwidth_tau_;
};

/// Variance weights of the four Langevin-type operators in the retrieved
/// mode, plus the signal efficiency and backward vacuum transmission.
struct NoiseWeights {
  double pulse_average = 1.0;  // A = (1 - e^{-Gamma tau}) / (Gamma tau)
  double w_d = 1.0;            // initial atomic operator
  double w_f11 = 0.0;          // absorption-stage noise, before t - T
  double w_f12 = 0.0;          // absorption-stage noise, after t - T
  double w_f2 = 0.0;           // retrieval-stage noise
  double vac_leak = 1.0;       // e^{-alpha L}
  double eta = 0.0;            // e^{-chi} (1 - e^{-alpha L})^2

  double sum() const { return w_d + w_f11 + w_f12 + w_f2; }

  /// Spatially integrated contribution of the D and F11 operators; their
  /// kernel e^{alpha z / 2} e^{-alpha L} integrates to e^{-alpha L}(1 - e^{-alpha L}).
  double near_kernel_integral() const;
  /// Same for F12 and F2 with kernel e^{-alpha z / 2}: (1 - e^{-alpha L}).
  double far_kernel_integral() const;

  double d_contribution() const { return w_d * near_kernel_integral(); }
  double f11_contribution() const { return w_f11 * near_kernel_integral(); }
  double f12_contribution() const { return w_f12 * far_kernel_integral(); }
  double f2_contribution() const { return w_f2 * far_kernel_integral(); }
  double integrated_noise() const {
    return d_contribution() + f11_contribution() + f12_contribution() + f2_contribution();
  }

  /// vac_leak + eta + integrated_noise, which must equal 1 for the output
  /// mode to keep its bosonic commutator.
  double completeness() const { return vac_leak + eta + integrated_noise(); }
};

/// Signal power efficiency e^{-chi} (1 - e^{-alpha L})^2.
double efficiency(const MemoryParams& params);

NoiseWeights noise_weights(const MemoryParams& params);

/// M_out = eta M_in + (1 - eta) I / 4.
CovarianceMatrix output_covariance(const CovarianceMatrix& m_in, const MemoryParams& params);

/// Variance of the squeezed (x) quadrature after storage: [1 + eta (e^{-2r} - 1)] / 4.
double squeezed_quadrature_variance(double r, const MemoryParams& params);

/// Closed-form storage fidelity for x-squeezed vacuum input.
double storage_fidelity(double r, const MemoryParams& params);

struct CurvePoint {
  double alpha_l;
  double fidelity;
};

/// Evaluates storage_fidelity on a strictly increasing, non-negative
/// optical-depth grid. Other parameters (gamma_tau, gamma_t0) default to
/// chi's natural values; use the overload to supply a template.
std::vector<CurvePoint> fidelity_curve(double r, double chi, std::span<const double> alpha_l_grid);
std::vector<CurvePoint> fidelity_curve(double r, const MemoryParams& base,
                                       std::span<const double> alpha_l_grid);

/// Smallest optical depth in [lo, hi] at which storage_fidelity reaches
/// `target`, located by bisection. Returns nullopt when the fidelity does
/// not cross the target inside the bracket.
std::optional<double> threshold_optical_depth(double r, double chi, double target, double lo,
                                              double hi, double tolerance = 1e-12);

}  // namespace hyperecho

#endif  // HYPERECHO_CHANNEL_HPP
