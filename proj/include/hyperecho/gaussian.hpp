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

#ifndef HYPERECHO_GAUSSIAN_HPP
#define HYPERECHO_GAUSSIAN_HPP

#include <optional>

namespace hyperecho {

/// Quadrature variance of the vacuum in the convention used throughout
/// (<X X> = 1/4 for a coherent state). Several CV references use 1/2.
inline constexpr double kVacuumVariance = 0.25;

/// Determinant of a pure single-mode state, kVacuumVariance squared.
inline constexpr double kPureDeterminant = kVacuumVariance * kVacuumVariance;

/// Classical (measure-and-prepare) fidelity threshold drawn as a constant
/// reference line on the fidelity curves. Emitted as data only.
inline constexpr double kClassicalFidelityThreshold = 0.815;

/// 2x2 symmetric covariance matrix of one optical mode's (x, p) quadratures.
///
/// Construction validates positive definiteness and the uncertainty
/// relation det >= 1/16 (up to a relative slack of 1e-12).
class CovarianceMatrix {
 public:
  CovarianceMatrix(double vxx, double vpp, double vxp = 0.0);

  static CovarianceMatrix vacuum() { return {kVacuumVariance, kVacuumVariance}; }

  double vxx() const { return vxx_; }
  double vpp() const { return vpp_; }
  double vxp() const { return vxp_; }
  double det() const { return vxx_ * vpp_ - vxp_ * vxp_; }
  double trace() const { return vxx_ + vpp_; }

  bool operator==(const CovarianceMatrix&) const = default;

 private:
  double vxx_;
  double vpp_;
  double vxp_;
};

enum class QuadratureAxis { x, p };

/// Single-mode squeezing: parameter r >= 0 applied to one quadrature.
struct SqueezingSpec {
  double r = 0.0;
  QuadratureAxis axis = QuadratureAxis::x;

  /// Squeezing expressed as noise reduction in dB, 10 log10(e^{2r}).
  double decibels() const;
};

/// Converts "N dB squeezing" (e^{-2r} = 10^{-N/10}) to r = N ln10 / 20.
/// Throws std::invalid_argument for negative or non-finite input.
double db_to_r(double db);

CovarianceMatrix squeezed_vacuum_covariance(const SqueezingSpec& spec);

/// Fidelity between two zero-mean single-mode Gaussian states,
/// F = 1 / (2 sqrt(det(M + M'))).
///
/// Only zero-displacement states are supported. Passing a displacement
/// (any value, including zero) is rejected with std::invalid_argument so
/// that callers cannot silently drop a mean.
double gaussian_fidelity(const CovarianceMatrix& m_in, const CovarianceMatrix& m_out);
double gaussian_fidelity(const CovarianceMatrix& m_in, const CovarianceMatrix& m_out,
                         std::optional<double> displacement);

}  // namespace hyperecho

#endif  // HYPERECHO_GAUSSIAN_HPP
