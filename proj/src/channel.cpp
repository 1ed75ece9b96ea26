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

#include "hyperecho/channel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hyperecho {
namespace {

void require_non_negative(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    std::ostringstream msg;
    msg << "memory parameter '" << name << "' must be finite and non-negative, got " << value;
    throw std::invalid_argument(msg.str());
  }
}

// Weights within this distance below zero are rounding residue of the
// telescoping differences and are clamped.
constexpr double kWeightSlack = 1e-13;

double clamp_weight(double w, const char* inequality, const MemoryParams& p) {
  if (w >= 0.0) return w;
  if (w > -kWeightSlack) return 0.0;
  std::ostringstream msg;
  msg << "parameter regime violates " << inequality << " (alpha_l=" << p.alpha_l()
      << ", chi=" << p.chi() << ", gamma_tau=" << p.gamma_tau() << ", gamma_t0=" << p.gamma_t0()
      << "; weight=" << w << ")";
  throw ParameterRegimeError(msg.str());
}

}  // namespace

MemoryParams::MemoryParams(double alpha_l, double chi, double gamma_tau, double gamma_t0,
                           std::optional<double> bandwidth_tau)
    : alpha_l_(alpha_l),
      chi_(chi),
      gamma_tau_(gamma_tau),
      gamma_t0_(gamma_t0),
      bandwidth_tau_(bandwidth_tau) {
  require_non_negative(alpha_l, "alpha_l");
  require_non_negative(chi, "chi");
  require_non_negative(gamma_tau, "gamma_tau");
  require_non_negative(gamma_t0, "gamma_t0");
  if (bandwidth_tau) require_non_negative(*bandwidth_tau, "bandwidth_tau");
}

MemoryParams MemoryParams::dimensionless(double alpha_l, double chi, double gamma_tau,
                                         std::optional<double> gamma_t0,
                                         std::optional<double> bandwidth_tau) {
  return MemoryParams(alpha_l, chi, gamma_tau, gamma_t0.value_or(chi + gamma_tau),
                      bandwidth_tau);
}

MemoryParams MemoryParams::from_physical(const PhysicalParams& phys) {
  double alpha_l = 0.0;
  if (phys.alpha.has_value() != phys.length.has_value()) {
    throw std::invalid_argument("physical parameters: 'alpha' and 'length' must be given together");
  }
  if (phys.alpha) {
    require_non_negative(*phys.alpha, "alpha");
    require_non_negative(*phys.length, "length");
    alpha_l = *phys.alpha * *phys.length;
    if (phys.alpha_l) {
      const double scale = std::max(std::abs(alpha_l), std::abs(*phys.alpha_l));
      if (std::abs(alpha_l - *phys.alpha_l) > 1e-9 * std::max(scale, 1.0)) {
        std::ostringstream msg;
        msg << "physical parameters: 'alpha_l' = " << *phys.alpha_l
            << " conflicts with alpha * length = " << alpha_l;
        throw std::invalid_argument(msg.str());
      }
    }
  } else if (phys.alpha_l) {
    alpha_l = *phys.alpha_l;
  } else {
    throw std::invalid_argument("physical parameters: need 'alpha_l' or both 'alpha' and 'length'");
  }
  require_non_negative(phys.decay_rate, "decay_rate");
  require_non_negative(phys.storage_time, "storage_time");
  require_non_negative(phys.bandwidth, "bandwidth");
  if (!(phys.pulse_duration > 0.0) || !std::isfinite(phys.pulse_duration)) {
    throw std::invalid_argument("physical parameters: 'pulse_duration' must be positive");
  }
  const double chi = phys.decay_rate * phys.storage_time;
  const double gamma_tau = phys.decay_rate * phys.pulse_duration;
  const double angular = phys.bandwidth_unit == BandwidthUnit::hertz
                             ? 2.0 * std::numbers::pi * phys.bandwidth
                             : phys.bandwidth;
  return dimensionless(alpha_l, chi, gamma_tau, std::nullopt, angular * phys.pulse_duration);
}

std::optional<double> MemoryParams::storage_time_over_tau() const {
  if (gamma_tau_ > 0.0) return chi_ / gamma_tau_;
  return std::nullopt;
}

bool MemoryParams::broadband_warning() const {
  return bandwidth_tau_.has_value() && *bandwidth_tau_ < 10.0;
}

MemoryParams MemoryParams::with_alpha_l(double alpha_l) const {
  return MemoryParams(alpha_l, chi_, gamma_tau_, gamma_t0_, bandwidth_tau_);
}

MemoryParams MemoryParams::with_chi(double chi) const {
  return MemoryParams(alpha_l_, chi, gamma_tau_, gamma_t0_, bandwidth_tau_);
}

double NoiseWeights::near_kernel_integral() const { return vac_leak * (1.0 - vac_leak); }

double NoiseWeights::far_kernel_integral() const { return 1.0 - vac_leak; }

double efficiency(const MemoryParams& params) {
  const double absorbed = -std::expm1(-params.alpha_l());
  return std::exp(-params.chi()) * absorbed * absorbed;
}

NoiseWeights noise_weights(const MemoryParams& params) {
  NoiseWeights w;
  const double x = params.gamma_tau();
  w.pulse_average = x > 0.0 ? -std::expm1(-x) / x : 1.0;
  const double survive = std::exp(-params.chi());
  w.w_d = w.pulse_average * std::exp(-params.gamma_t0());
  w.w_f11 = clamp_weight(survive - w.w_d, "A e^{-gamma_t0} <= e^{-chi}", params);
  w.w_f12 = clamp_weight(w.pulse_average - survive, "A >= e^{-chi}", params);
  w.w_f2 = 1.0 - w.pulse_average;
  w.vac_leak = std::exp(-params.alpha_l());
  w.eta = efficiency(params);
  return w;
}

CovarianceMatrix output_covariance(const CovarianceMatrix& m_in, const MemoryParams& params) {
  const double eta = efficiency(params);
  const double noise = (1.0 - eta) * kVacuumVariance;
  return {eta * m_in.vxx() + noise, eta * m_in.vpp() + noise, eta * m_in.vxp()};
}

double squeezed_quadrature_variance(double r, const MemoryParams& params) {
  if (!std::isfinite(r) || r < 0.0) {
    throw std::invalid_argument("squeezing parameter r must be finite and non-negative");
  }
  const double eta = efficiency(params);
  return (1.0 + eta * std::expm1(-2.0 * r)) * kVacuumVariance;
}

double storage_fidelity(double r, const MemoryParams& params) {
  if (!std::isfinite(r) || r < 0.0) {
    throw std::invalid_argument("squeezing parameter r must be finite and non-negative");
  }
  const double eta = efficiency(params);
  const double minus = std::exp(-2.0 * r);
  const double plus = std::exp(2.0 * r);
  const double first = (1.0 + minus) + eta * (minus - 1.0);
  const double second = (1.0 + plus) + eta * (plus - 1.0);
  return 2.0 / std::sqrt(first * second);
}

std::vector<CurvePoint> fidelity_curve(double r, const MemoryParams& base,
                                       std::span<const double> alpha_l_grid) {
  for (std::size_t i = 0; i < alpha_l_grid.size(); ++i) {
    const double a = alpha_l_grid[i];
    if (!std::isfinite(a) || a < 0.0) {
      throw std::invalid_argument("fidelity_curve: optical depths must be finite and non-negative");
    }
    if (i > 0 && !(a > alpha_l_grid[i - 1])) {
      throw std::invalid_argument("fidelity_curve: optical-depth grid must be strictly increasing");
    }
  }
  std::vector<CurvePoint> out;
  out.reserve(alpha_l_grid.size());
  for (double a : alpha_l_grid) {
    out.push_back({a, storage_fidelity(r, base.with_alpha_l(a))});
  }
  return out;
}

std::vector<CurvePoint> fidelity_curve(double r, double chi, std::span<const double> alpha_l_grid) {
  return fidelity_curve(r, MemoryParams::dimensionless(0.0, chi), alpha_l_grid);
}

std::optional<double> threshold_optical_depth(double r, double chi, double target, double lo,
                                              double hi, double tolerance) {
  const auto base = MemoryParams::dimensionless(0.0, chi);
  auto f = [&](double a) { return storage_fidelity(r, base.with_alpha_l(a)) - target; };
  if (f(lo) >= 0.0) return lo;
  if (f(hi) < 0.0) return std::nullopt;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace hyperecho
