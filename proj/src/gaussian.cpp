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

#include "hyperecho/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hyperecho {

CovarianceMatrix::CovarianceMatrix(double vxx, double vpp, double vxp)
    : vxx_(vxx), vpp_(vpp), vxp_(vxp) {
  if (!std::isfinite(vxx) || !std::isfinite(vpp) || !std::isfinite(vxp)) {
    throw std::invalid_argument("covariance matrix entries must be finite");
  }
  if (vxx <= 0.0 || vpp <= 0.0 || det() <= 0.0) {
    throw std::invalid_argument("covariance matrix must be positive definite");
  }
  if (det() < kPureDeterminant * (1.0 - 1e-12)) {
    throw std::invalid_argument("covariance matrix violates the uncertainty relation: det = " +
                                std::to_string(det()) + " < 1/16");
  }
}

double SqueezingSpec::decibels() const { return 10.0 * std::log10(std::exp(2.0 * r)); }

double db_to_r(double db) {
  if (!std::isfinite(db) || db < 0.0) {
    throw std::invalid_argument("squeezing in dB must be finite and non-negative, got " +
                                std::to_string(db));
  }
  return db * std::numbers::ln10 / 20.0;
}

CovarianceMatrix squeezed_vacuum_covariance(const SqueezingSpec& spec) {
  if (!std::isfinite(spec.r) || spec.r < 0.0) {
    throw std::invalid_argument("squeezing parameter r must be finite and non-negative");
  }
  const double squeezed = std::exp(-2.0 * spec.r) * kVacuumVariance;
  const double anti = std::exp(2.0 * spec.r) * kVacuumVariance;
  if (spec.axis == QuadratureAxis::x) {
    return {squeezed, anti};
  }
  return {anti, squeezed};
}

double gaussian_fidelity(const CovarianceMatrix& m_in, const CovarianceMatrix& m_out) {
  const double sxx = m_in.vxx() + m_out.vxx();
  const double spp = m_in.vpp() + m_out.vpp();
  const double sxp = m_in.vxp() + m_out.vxp();
  const double det = sxx * spp - sxp * sxp;
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw std::domain_error("gaussian_fidelity: M + M' is singular");
  }
  return 0.5 / std::sqrt(det);
}

double gaussian_fidelity(const CovarianceMatrix& m_in, const CovarianceMatrix& m_out,
                         std::optional<double> displacement) {
  if (displacement.has_value()) {
    throw std::invalid_argument(
        "gaussian_fidelity: displaced states are not supported (zero-mean formula only)");
  }
  return gaussian_fidelity(m_in, m_out);
}

}  // namespace hyperecho
