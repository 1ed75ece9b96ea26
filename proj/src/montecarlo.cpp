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

#include "hyperecho/montecarlo.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hyperecho/philox.hpp"

namespace hyperecho {
namespace {

struct Moments {
  double x1 = 0, x2 = 0, x3 = 0, x4 = 0;
  double p1 = 0, p2 = 0, p3 = 0, p4 = 0;
  double xp = 0;

  void add(double x, double p) {
    const double xx = x * x;
    const double pp = p * p;
    x1 += x;
    x2 += xx;
    x3 += xx * x;
    x4 += xx * xx;
    p1 += p;
    p2 += pp;
    p3 += pp * p;
    p4 += pp * pp;
    xp += x * p;
  }

  void merge(const Moments& o) {
    x1 += o.x1; x2 += o.x2; x3 += o.x3; x4 += o.x4;
    p1 += o.p1; p2 += o.p2; p3 += o.p3; p4 += o.p4;
    xp += o.xp;
  }
};

// Standard deviations (not variances) of each additive contribution to
// one output quadrature, in units where the vacuum has variance 1.
struct Amplitudes {
  double signal = 0.0;
  std::array<double, 5> noise{};  // vacuum leak, D, F11, F12, F2
  double aggregate = 0.0;
};

Amplitudes amplitudes(const NoiseWeights& w) {
  Amplitudes a;
  a.signal = std::sqrt(w.eta);
  a.noise = {std::sqrt(w.vac_leak), std::sqrt(w.d_contribution()),
             std::sqrt(w.f11_contribution()), std::sqrt(w.f12_contribution()),
             std::sqrt(w.f2_contribution())};
  a.aggregate = std::sqrt(1.0 - w.eta);
  return a;
}

// Block layout per sample: 0 -> (x_in, p_in); decomposed: 1..5 -> (x, p)
// pair for each noise operator; aggregate: 1 -> (x, p) total noise.
Moments accumulate(std::uint64_t begin, std::uint64_t end, std::uint64_t seed, double sd_x_in,
                   double sd_p_in, const Amplitudes& amp, NoiseAssembly assembly) {
  constexpr double kVacuumSd = 0.5;  // sqrt(1/4)
  Moments m;
  for (std::uint64_t i = begin; i < end; ++i) {
    const auto [gx, gp] = normal_pair(seed, i, 0);
    double x = amp.signal * sd_x_in * gx;
    double p = amp.signal * sd_p_in * gp;
    if (assembly == NoiseAssembly::decomposed) {
      for (std::uint32_t j = 0; j < amp.noise.size(); ++j) {
        const auto [nx, np] = normal_pair(seed, i, j + 1);
        x += amp.noise[j] * kVacuumSd * nx;
        p += amp.noise[j] * kVacuumSd * np;
      }
    } else {
      const auto [nx, np] = normal_pair(seed, i, 1);
      x += amp.aggregate * kVacuumSd * nx;
      p += amp.aggregate * kVacuumSd * np;
    }
    m.add(x, p);
  }
  return m;
}

struct Summary {
  double mean, var, stderr_var, stderr_mean;
};

Summary summarize(double s1, double s2, double s3, double s4, double n) {
  const double mu = s1 / n;
  const double e2 = s2 / n;
  const double e3 = s3 / n;
  const double e4 = s4 / n;
  const double central2 = e2 - mu * mu;
  const double central4 = e4 - 4.0 * mu * e3 + 6.0 * mu * mu * e2 - 3.0 * mu * mu * mu * mu;
  const double var = central2 * n / (n - 1.0);
  const double spread = std::max(central4 - central2 * central2, 0.0);
  return {mu, var, std::sqrt(spread / n), std::sqrt(var / n)};
}

}  // namespace

void SampleConfig::validate() const {
  if (n_samples < 2) throw std::invalid_argument("sampling: n_samples must be >= 2");
  if (stream_count < 1) throw std::invalid_argument("sampling: stream_count must be >= 1");
}

EmpiricalCovariance sample_output_covariance(double r, const MemoryParams& params,
                                             const SampleConfig& cfg, NoiseAssembly assembly) {
  cfg.validate();
  if (!std::isfinite(r) || r < 0.0) {
    throw std::invalid_argument("squeezing parameter r must be finite and non-negative");
  }
  const NoiseWeights weights = noise_weights(params);
  const Amplitudes amp = amplitudes(weights);
  const double sd_x_in = std::sqrt(kVacuumVariance) * std::exp(-r);
  const double sd_p_in = std::sqrt(kVacuumVariance) * std::exp(r);

  const auto streams = static_cast<std::uint64_t>(cfg.stream_count);
  std::vector<Moments> partial(streams);
  {
    std::vector<std::jthread> workers;
    workers.reserve(streams);
    for (std::uint64_t s = 0; s < streams; ++s) {
      const std::uint64_t begin = cfg.n_samples * s / streams;
      const std::uint64_t end = cfg.n_samples * (s + 1) / streams;
      workers.emplace_back([&, s, begin, end] {
        partial[s] = accumulate(begin, end, cfg.seed, sd_x_in, sd_p_in, amp, assembly);
      });
    }
  }
  Moments total;
  for (const auto& m : partial) total.merge(m);

  const auto n = static_cast<double>(cfg.n_samples);
  const Summary sx = summarize(total.x1, total.x2, total.x3, total.x4, n);
  const Summary sp = summarize(total.p1, total.p2, total.p3, total.p4, n);

  EmpiricalCovariance out;
  out.n = cfg.n_samples;
  out.vxx = sx.var;
  out.vpp = sp.var;
  out.vxp = (total.xp / n - sx.mean * sp.mean) * n / (n - 1.0);
  out.stderr_xx = sx.stderr_var;
  out.stderr_pp = sp.stderr_var;
  out.mean_x = sx.mean;
  out.mean_p = sp.mean;
  out.stderr_mean_x = sx.stderr_mean;
  out.stderr_mean_p = sp.stderr_mean;
  return out;
}

FidelityEstimate estimate_fidelity(double r, const MemoryParams& params, const SampleConfig& cfg,
                                   NoiseAssembly assembly) {
  FidelityEstimate est;
  est.covariance = sample_output_covariance(r, params, cfg, assembly);
  const CovarianceMatrix m_in = squeezed_vacuum_covariance({r, QuadratureAxis::x});
  const double sxx = m_in.vxx() + est.covariance.vxx;
  const double spp = m_in.vpp() + est.covariance.vpp;
  const double sxp = m_in.vxp() + est.covariance.vxp;
  const double det = sxx * spp - sxp * sxp;
  if (!(det > 0.0)) throw std::domain_error("estimate_fidelity: M + M' is singular");
  est.fidelity = 0.5 / std::sqrt(det);
  // dF/dvxx = -F spp / (2 det), dF/dvpp = -F sxx / (2 det).
  const double gx = -est.fidelity * spp / (2.0 * det);
  const double gp = -est.fidelity * sxx / (2.0 * det);
  est.uncertainty = std::hypot(gx * est.covariance.stderr_xx, gp * est.covariance.stderr_pp);
  return est;
}

}  // namespace hyperecho
