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

#include "hyperecho/mbsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

namespace hyperecho {
namespace {

constexpr Complex kI{0.0, 1.0};

// Integrate |f|^2 over samples t_i = i dt with the trapezoidal rule,
// restricted to segments lying inside [lo, hi].
double trapezoid_energy(std::span<const Complex> f, double dt, double lo, double hi) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double t0 = static_cast<double>(i) * dt;
    const double t1 = static_cast<double>(i + 1) * dt;
    if (t0 < lo - 1e-12 || t1 > hi + 1e-12) continue;
    sum += 0.5 * dt * (std::norm(f[i]) + std::norm(f[i + 1]));
  }
  return sum;
}

double trapezoid_energy(std::span<const Complex> f, double dt) {
  return trapezoid_energy(f, dt, -std::numeric_limits<double>::infinity(),
                          std::numeric_limits<double>::infinity());
}

// One stage of coupled propagation. Each time step completes the
// coherence update left pending by the previous step, applies the exact
// free-evolution factor, and sweeps the field through the medium with
// the trapezoidal rule in z. The field entering the coherence update is
// the midpoint (a^n + a^{n+1}) / 2, which makes the z-update a scalar
// implicit equation per node.
std::vector<Complex> integrate_stage(CoherenceField& coh, bool forward,
                                     const std::function<Complex(double)>& entrance, double dt,
                                     int n_t, double decay, double guard) {
  const int nz = coh.n_z;
  const int nd = coh.n_delta;
  const double h = coh.dz();
  const Complex coupling = kI * coh.coupling;

  std::vector<double> e_re(nd), e_im(nd), phi_re(nd), phi_im(nd);
  Complex phi_sum{0.0, 0.0};
  for (int k = 0; k < nd; ++k) {
    const Complex rate{-0.5 * decay, coh.detuning[k]};
    const Complex e = std::exp(rate * dt);
    const Complex phi = std::abs(rate) * dt < 1e-8 ? kI * dt * (1.0 + 0.5 * rate * dt)
                                                   : kI * (e - 1.0) / rate;
    e_re[k] = e.real();
    e_im[k] = e.imag();
    phi_re[k] = phi.real();
    phi_im[k] = phi.imag();
    phi_sum += coh.weights[k] * phi;
  }
  const Complex self_coupling = 0.5 * coupling * phi_sum;
  const Complex implicit_denominator = 1.0 - 0.5 * h * self_coupling;

  auto node = [&](int q) { return forward ? q : nz - 1 - q; };
  auto weighted_sum = [&](int iz) {
    Complex s{0.0, 0.0};
    for (int k = 0; k < nd; ++k) s += coh.weights[k] * coh.at(iz, k);
    return s;
  };

  std::vector<Complex> field(nz);
  std::vector<Complex> pending(nz, Complex{0.0, 0.0});
  std::vector<Complex> exit(n_t);

  // The field carries no time derivative, so at t = 0 it follows from the
  // coherence already present.
  field[node(0)] = entrance(0.0);
  Complex p_prev = coupling * weighted_sum(node(0));
  for (int q = 1; q < nz; ++q) {
    const Complex p = coupling * weighted_sum(node(q));
    field[node(q)] = field[node(q - 1)] + 0.5 * h * (p_prev + p);
    p_prev = p;
  }
  exit[0] = field[node(nz - 1)];

  for (int n = 1; n < n_t; ++n) {
    Complex upstream_new = entrance(n * dt);
    Complex p_upstream{0.0, 0.0};
    for (int q = 0; q < nz; ++q) {
      const int iz = node(q);
      const double m_re = pending[iz].real();
      const double m_im = pending[iz].imag();
      double acc_re = 0.0;
      double acc_im = 0.0;
      auto* s = reinterpret_cast<double*>(&coh.sigma[static_cast<std::size_t>(iz) * nd]);
      for (int k = 0; k < nd; ++k) {
        double sr = s[2 * k] + phi_re[k] * m_re - phi_im[k] * m_im;
        double si = s[2 * k + 1] + phi_re[k] * m_im + phi_im[k] * m_re;
        const double nr = e_re[k] * sr - e_im[k] * si;
        const double ni = e_re[k] * si + e_im[k] * sr;
        s[2 * k] = nr;
        s[2 * k + 1] = ni;
        acc_re += coh.weights[k] * nr;
        acc_im += coh.weights[k] * ni;
      }
      const Complex free_sum{acc_re, acc_im};
      const Complex old_field = field[iz];
      Complex new_field;
      if (q == 0) {
        new_field = upstream_new;
      } else {
        const Complex partial = coupling * free_sum + self_coupling * old_field;
        new_field = (upstream_new + 0.5 * h * (p_upstream + partial)) / implicit_denominator;
      }
      if (!(std::abs(new_field) <= guard)) {
        std::ostringstream msg;
        msg << "field amplitude " << std::abs(new_field) << " exceeds 10x the input peak at step "
            << n << "; refine the grid (n_z=" << nz << ", n_delta=" << nd << ", dt=" << dt << ")";
        throw SolverInstabilityError(msg.str());
      }
      const Complex mid = 0.5 * (old_field + new_field);
      pending[iz] = mid;
      p_upstream = coupling * (free_sum + mid * phi_sum);
      field[iz] = new_field;
      upstream_new = new_field;
    }
    exit[n] = field[node(nz - 1)];
  }

  for (int iz = 0; iz < nz; ++iz) {
    for (int k = 0; k < nd; ++k) {
      coh.at(iz, k) += Complex{phi_re[k], phi_im[k]} * pending[iz];
    }
  }
  return exit;
}

double stability_guard(double peak) {
  return peak > 0.0 ? 10.0 * peak : std::numeric_limits<double>::infinity();
}

}  // namespace

SolverGrid SolverGrid::refined(int factor, DetuningRefinement mode) const {
  if (factor < 1) throw std::invalid_argument("refinement factor must be >= 1");
  SolverGrid g = *this;
  g.n_z = (n_z - 1) * factor + 1;
  g.n_t = (n_t - 1) * factor + 1;
  g.n_delta = (n_delta - 1) * factor + 1;
  if (mode == DetuningRefinement::widen_window) g.delta_half_width = delta_half_width * factor;
  return g;
}

double SolverGrid::simulated_half_width(const MemoryParams& params) const {
  if (const auto band = params.bandwidth_tau(); band && 0.5 * *band < delta_half_width) {
    return 0.5 * *band;
  }
  return delta_half_width;
}

double SolverGrid::courant() const {
  return delta_half_width * std::max(dt_absorption(), dt_retrieval());
}

void SolverGrid::validate() const {
  std::ostringstream msg;
  if (n_z < 16) msg << "n_z=" << n_z << " below minimum 16; ";
  if (n_t < 64) msg << "n_t=" << n_t << " below minimum 64; ";
  if (n_delta < 32) msg << "n_delta=" << n_delta << " below minimum 32; ";
  if (!(delta_half_width >= 10.0)) {
    msg << "detuning half-width " << delta_half_width << " below 10/tau; ";
  }
  if (!(absorption_window >= 1.0)) msg << "absorption window shorter than the pulse; ";
  if (!(retrieval_window >= 1.0)) msg << "retrieval window shorter than the pulse; ";
  if (msg.str().empty()) {
    const double revival = 2.0 * std::numbers::pi / delta_spacing();
    const double longest = std::max(absorption_window, retrieval_window);
    if (revival <= longest) {
      msg << "detuning comb revives after " << revival << " tau, inside a " << longest
          << " tau stage; increase n_delta or reduce the detuning window; ";
    }
  }
  if (!msg.str().empty()) throw std::invalid_argument("invalid solver grid: " + msg.str());
}

PulseShape::PulseShape(std::function<double(double)> envelope, double peak)
    : envelope_(std::move(envelope)), peak_(peak) {
  // Unit energy, normalized with composite Simpson on a fine grid.
  constexpr int kPanels = 20000;
  const double step = 1.0 / kPanels;
  double sum = 0.0;
  for (int i = 0; i <= kPanels; ++i) {
    const double v = envelope_(i * step);
    const double w = (i == 0 || i == kPanels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += w * v * v;
  }
  amplitude_ = 1.0 / std::sqrt(sum * step / 3.0);
}

PulseShape PulseShape::flat_top(double ramp_fraction) {
  if (!(ramp_fraction > 0.0 && ramp_fraction <= 0.5)) {
    throw std::invalid_argument("flat_top: ramp fraction must lie in (0, 0.5]");
  }
  auto env = [ramp_fraction](double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double edge = std::min(t, 1.0 - t);
    if (edge >= ramp_fraction) return 1.0;
    const double s = std::sin(0.5 * std::numbers::pi * edge / ramp_fraction);
    return s * s;
  };
  return PulseShape(env, 1.0);
}

PulseShape PulseShape::gaussian(double rms_width) {
  if (!(rms_width > 0.0)) throw std::invalid_argument("gaussian pulse: width must be positive");
  auto env = [rms_width](double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double x = (t - 0.5) / rms_width;
    return std::exp(-0.25 * x * x);
  };
  return PulseShape(env, 1.0);
}

double PulseShape::operator()(double t) const { return amplitude_ * envelope_(t); }

PulseShape PulseShape::scaled(double factor) const {
  PulseShape p = *this;
  p.amplitude_ *= factor;
  return p;
}

CoherenceField::CoherenceField(int nz, int nd, double half_width, double alpha_l)
    : n_z(nz),
      n_delta(nd),
      coupling(alpha_l / (2.0 * std::numbers::pi)),
      detuning(nd),
      weights(nd),
      sigma(static_cast<std::size_t>(nz) * nd, Complex{0.0, 0.0}) {
  if (nz < 2 || nd < 2) throw std::invalid_argument("coherence field needs >= 2 nodes per axis");
  const double spacing = 2.0 * half_width / (nd - 1);
  for (int k = 0; k < nd; ++k) {
    // Mirror-symmetric nodes so that +Delta and -Delta pair exactly.
    detuning[k] = k < nd / 2 ? -half_width + k * spacing : half_width - (nd - 1 - k) * spacing;
    weights[k] = (k == 0 || k == nd - 1) ? 0.5 * spacing : spacing;
  }
  if (nd % 2 == 1) detuning[nd / 2] = 0.0;
}

double CoherenceField::excitation_energy() const {
  double total = 0.0;
  for (int iz = 0; iz < n_z; ++iz) {
    double slice = 0.0;
    for (int k = 0; k < n_delta; ++k) slice += weights[k] * std::norm(at(iz, k));
    total += (iz == 0 || iz == n_z - 1 ? 0.5 : 1.0) * slice;
  }
  return coupling * total * dz();
}

bool CoherenceField::all_finite() const {
  return std::all_of(sigma.begin(), sigma.end(),
                     [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

AbsorptionResult absorb(const PulseShape& pulse, const MemoryParams& params,
                        const SolverGrid& grid) {
  grid.validate();
  AbsorptionResult out;
  out.coherence =
      CoherenceField(grid.n_z, grid.n_delta, grid.simulated_half_width(params), params.alpha_l());
  const double dt = grid.dt_absorption();

  out.time.resize(grid.n_t);
  out.input_profile.resize(grid.n_t);
  for (int n = 0; n < grid.n_t; ++n) {
    out.time[n] = n * dt;
    out.input_profile[n] = pulse(n * dt);
  }
  auto entrance = [&pulse](double t) { return Complex{pulse(t), 0.0}; };
  out.transmitted_profile = integrate_stage(out.coherence, true, entrance, dt, grid.n_t,
                                            params.gamma_tau(),
                                            stability_guard(pulse.peak_amplitude()));
  // The amplitudes are per atom; with no atoms there is no coherence.
  if (out.coherence.coupling == 0.0) {
    std::fill(out.coherence.sigma.begin(), out.coherence.sigma.end(), Complex{});
  }
  out.input_energy = trapezoid_energy(out.input_profile, dt);
  out.transmission =
      out.input_energy > 0.0 ? trapezoid_energy(out.transmitted_profile, dt) / out.input_energy : 0.0;
  out.coherence.input_energy = out.input_energy;
  out.coherence.input_peak = pulse.peak_amplitude();
  return out;
}

CoherenceField evolve_free(const CoherenceField& coh, double duration) {
  CoherenceField out = coh;
  for (int k = 0; k < coh.n_delta; ++k) {
    const Complex phase = std::polar(1.0, coh.detuning[k] * duration);
    for (int iz = 0; iz < coh.n_z; ++iz) out.at(iz, k) *= phase;
  }
  return out;
}

CoherenceField rephase(const CoherenceField& coh, double storage_time, double excited_decay) {
  if (!std::isfinite(storage_time) || !std::isfinite(excited_decay) || excited_decay < 0.0) {
    throw std::invalid_argument("rephase: storage time and decay must be finite, decay >= 0");
  }
  CoherenceField out = coh;
  const double damping = std::exp(-0.5 * excited_decay);
  for (int k = 0; k < coh.n_delta; ++k) {
    const Complex factor = std::polar(damping, -coh.detuning[k] * storage_time);
    for (int iz = 0; iz < coh.n_z; ++iz) out.at(iz, k) *= factor;
  }
  return out;
}

EchoResult retrieve(const CoherenceField& coh_b, const MemoryParams& params,
                    const SolverGrid& grid, const PulseShape* reference,
                    double echo_half_window) {
  grid.validate();
  if (coh_b.n_z != grid.n_z || coh_b.n_delta != grid.n_delta) {
    throw std::invalid_argument("retrieve: coherence field does not match the solver grid");
  }
  CoherenceField coh = coh_b;
  const double dt = grid.dt_retrieval();
  auto vacuum = [](double) { return Complex{0.0, 0.0}; };

  EchoResult out;
  out.echo_profile = integrate_stage(coh, false, vacuum, dt, grid.n_t, params.gamma_tau(),
                                     stability_guard(coh_b.input_peak));
  out.time.resize(grid.n_t);
  for (int n = 0; n < grid.n_t; ++n) out.time[n] = n * dt;

  std::size_t peak = 0;
  for (std::size_t n = 1; n < out.echo_profile.size(); ++n) {
    if (std::norm(out.echo_profile[n]) > std::norm(out.echo_profile[peak])) peak = n;
  }
  out.echo_peak_time = out.time[peak];

  const double energy_ref = coh_b.input_energy;
  if (energy_ref > 0.0) {
    const double in_window = trapezoid_energy(out.echo_profile, dt, out.echo_peak_time - echo_half_window,
                                              out.echo_peak_time + echo_half_window);
    const double total = trapezoid_energy(out.echo_profile, dt);
    out.efficiency = in_window / energy_ref;
    out.secondary_emission = (total - in_window) / energy_ref;
    out.residual_excitation = coh.excitation_energy() / energy_ref;
  }
  if (reference != nullptr) {
    std::vector<Complex> expected(grid.n_t);
    for (int n = 0; n < grid.n_t; ++n) expected[n] = (*reference)(out.time[n]);
    out.mode_overlap = mode_overlap(out.echo_profile, expected);
  }
  return out;
}

EchoResult run_protocol(const MemoryParams& params, const SolverGrid& grid,
                        const PulseShape& pulse, const ProtocolOptions& options) {
  if (!(options.excited_fraction >= 0.0 && options.excited_fraction <= 1.0)) {
    throw std::invalid_argument("run_protocol: excited_fraction must lie in [0, 1]");
  }
  AbsorptionResult stored = absorb(pulse, params, grid);
  const double storage_time =
      options.storage_time.value_or(params.storage_time_over_tau().value_or(10.0));

  // The stored field is referenced to the end of the absorption window;
  // bring it to the rephasing instant t5 = storage_time after the pulse
  // started, then rephase there.
  CoherenceField at_t5 = evolve_free(stored.coherence, storage_time - grid.absorption_window);
  // Each time slice of the pulse spends the absorption window in |e>
  // inside the two integrated stages; only the rest of its excited-state
  // time is lumped into the rephasing factor.
  const double lumped_decay = std::max(
      0.0, options.excited_fraction * params.chi() - params.gamma_tau() * grid.absorption_window);
  CoherenceField backward = rephase(at_t5, storage_time, lumped_decay);

  EchoResult echo = retrieve(backward, params, grid, &pulse, options.echo_half_window);
  echo.transmitted_profile = std::move(stored.transmitted_profile);
  echo.transmission = stored.transmission;
  return echo;
}

double mode_overlap(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw std::invalid_argument("mode_overlap: size mismatch");
  Complex inner{0.0, 0.0};
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inner += std::conj(a[i]) * b[i];
    na += std::norm(a[i]);
    nb += std::norm(b[i]);
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::norm(inner) / (na * nb);
}

}  // namespace hyperecho
