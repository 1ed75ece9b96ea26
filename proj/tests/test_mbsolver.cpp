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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "hyperecho/mbsolver.hpp"

using namespace hyperecho;
using doctest::Approx;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / want; }

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (auto z : v) m = std::max(m, std::abs(z));
  return m;
}

using Refinement = SolverGrid::DetuningRefinement;

}  // namespace

TEST_CASE("grid validation") {
  CHECK_NOTHROW(SolverGrid::reference().validate());
  auto g = SolverGrid::reference();
  g.n_z = 4;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = SolverGrid::reference();
  g.n_t = 32;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = SolverGrid::reference();
  g.n_delta = 16;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = SolverGrid::reference();
  g.delta_half_width = 5.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = SolverGrid::reference();
  g.n_delta = 40;  // comb revival 2 pi / dDelta inside the retrieval window
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("grid refinement") {
  const auto ref = SolverGrid::reference();
  const auto w = ref.refined(2);
  CHECK(w.n_z == 2 * (ref.n_z - 1) + 1);
  CHECK(w.n_t == 2 * (ref.n_t - 1) + 1);
  CHECK(w.dz() == Approx(ref.dz() / 2));
  CHECK(w.delta_spacing() == Approx(ref.delta_spacing()));
  CHECK(w.delta_half_width == Approx(2 * ref.delta_half_width));
  const auto f = ref.refined(2, Refinement::fixed_window);
  CHECK(f.delta_half_width == ref.delta_half_width);
  CHECK(f.delta_spacing() == Approx(ref.delta_spacing() / 2));
  CHECK(ref.courant() > 0.0);

  const auto narrow = MemoryParams::dimensionless(1.0, 0.0, 0.0, std::nullopt, 60.0);
  CHECK(ref.simulated_half_width(narrow) == Approx(30.0));
  CHECK(ref.simulated_half_width(MemoryParams::dimensionless(1.0, 0.0)) == ref.delta_half_width);
}

TEST_CASE("pulse shapes are normalized") {
  for (const auto& p : {PulseShape::flat_top(), PulseShape::gaussian()}) {
    double e = 0.0;
    const int n = 20000;
    for (int i = 0; i <= n; ++i) {
      const double v = p(static_cast<double>(i) / n);
      e += (i == 0 || i == n ? 0.5 : 1.0) * v * v / n;
    }
    CHECK(e == Approx(1.0).epsilon(1e-6));
    CHECK(p(-0.1) == 0.0);
    CHECK(p(1.1) == 0.0);
    CHECK(p.scaled(3.0)(0.5) == Approx(3.0 * p(0.5)));
  }
}

TEST_CASE("absorption without atoms") {
  const auto pulse = PulseShape::flat_top();
  const auto res = absorb(pulse, MemoryParams::dimensionless(0.0, 0.0), SolverGrid::reference());
  REQUIRE(res.transmitted_profile.size() == res.input_profile.size());
  for (std::size_t i = 0; i < res.input_profile.size(); ++i) {
    REQUIRE(res.transmitted_profile[i] == res.input_profile[i]);
  }
  CHECK(res.transmission == Approx(1.0).epsilon(1e-14));
  for (auto s : res.coherence.sigma) REQUIRE(s == Complex{});
}

TEST_CASE("absorption law") {
  const auto pulse = PulseShape::flat_top();
  for (double a : {0.5, 1.0, 2.5}) {
    const auto res = absorb(pulse, MemoryParams::dimensionless(a, 0.0), SolverGrid::reference());
    CHECK(rel_err(res.transmission, std::exp(-a)) < 0.02);
    CHECK(res.coherence.all_finite());
    // Energy not transmitted sits in the atoms.
    CHECK(std::abs(res.transmission + res.coherence.excitation_energy() / res.input_energy - 1.0) <
          0.02);
  }
}

TEST_CASE("rephasing") {
  const auto pulse = PulseShape::gaussian();
  const auto grid = SolverGrid::reference();
  const auto coh = absorb(pulse, MemoryParams::dimensionless(1.0, 0.0), grid).coherence;

  const auto same = rephase(coh, 0.0, 0.0);
  CHECK(same.sigma == coh.sigma);

  const double T = 3.7;
  const auto rot = rephase(coh, T, 0.0);
  for (int iz : {0, grid.n_z / 2}) {
    for (int k : {0, 17, grid.n_delta - 1}) {
      const Complex expect = coh.at(iz, k) * std::polar(1.0, -coh.detuning[k] * T);
      CHECK(std::abs(rot.at(iz, k) - expect) <= 1e-15 * std::abs(coh.at(iz, k)) + 1e-300);
    }
  }
  for (std::size_t i = 0; i < coh.sigma.size(); ++i) {
    REQUIRE(std::abs(rot.sigma[i]) == Approx(std::abs(coh.sigma[i])).epsilon(1e-14));
  }
  const auto damped = rephase(coh, T, 0.2);
  CHECK(damped.excitation_energy() == Approx(std::exp(-0.2) * coh.excitation_energy()).epsilon(1e-12));

  const auto fwd = evolve_free(coh, 1.5);
  const auto back = evolve_free(fwd, -1.5);
  for (std::size_t i = 0; i < coh.sigma.size(); ++i) {
    REQUIRE(std::abs(back.sigma[i] - coh.sigma[i]) <= 1e-14 * std::abs(coh.sigma[i]) + 1e-300);
  }
  CHECK_THROWS_AS(rephase(coh, T, -1.0), std::invalid_argument);
}

TEST_CASE("retrieval from an empty medium") {
  const auto grid = SolverGrid::reference();
  const CoherenceField empty(grid.n_z, grid.n_delta, grid.delta_half_width, 2.5);
  const auto echo = retrieve(empty, MemoryParams::dimensionless(2.5, 0.0), grid);
  CHECK(max_abs(echo.echo_profile) == 0.0);
  CHECK(echo.efficiency == 0.0);
}

TEST_CASE("protocol efficiency") {
  const auto pulse = PulseShape::flat_top();
  const auto grid = SolverGrid::reference();
  for (double a : {0.5, 2.5}) {
    const auto p = MemoryParams::dimensionless(a, 0.0);
    const auto echo = run_protocol(p, grid, pulse);
    CHECK(rel_err(echo.efficiency, efficiency(p)) < 0.02);
    CHECK(echo.efficiency >= 0.0);
    CHECK(echo.efficiency + echo.transmission <= 1.02);
    REQUIRE(echo.mode_overlap.has_value());
    CHECK(*echo.mode_overlap >= 0.98);
    // Energy accounting without decay.
    const double total =
        echo.transmission + echo.efficiency + echo.secondary_emission + echo.residual_excitation;
    CHECK(std::abs(total - 1.0) < 0.02);
    // The echo is a delayed copy: it peaks inside the input's time span.
    CHECK(echo.echo_peak_time > 0.0);
    CHECK(echo.echo_peak_time < 1.25);
  }
  const auto decayed = MemoryParams::dimensionless(2.5, 0.01, 0.001);
  CHECK(rel_err(run_protocol(decayed, grid, pulse).efficiency, 0.834184258573640) < 0.02);

  const auto none = run_protocol(MemoryParams::dimensionless(0.0, 0.01, 0.001), grid, pulse);
  CHECK(none.efficiency == 0.0);
  CHECK(max_abs(none.echo_profile) == 0.0);
}

TEST_CASE("storage time split between excited and spin states") {
  const auto pulse = PulseShape::flat_top();
  const auto grid = SolverGrid::reference();
  const auto p = MemoryParams::dimensionless(2.5, 0.5, 0.005);
  ProtocolOptions half;
  half.excited_fraction = 0.5;
  const auto full = run_protocol(p, grid, pulse);
  const auto split = run_protocol(p, grid, pulse, half);
  CHECK(rel_err(full.efficiency, efficiency(p)) < 0.02);
  CHECK(split.efficiency / full.efficiency == Approx(std::exp(0.25)).epsilon(1e-6));
}

TEST_CASE("linearity") {
  const auto grid = SolverGrid::reference();
  const auto p = MemoryParams::dimensionless(1.0, 0.01, 0.001);
  const auto pulse = PulseShape::gaussian();
  const auto a = run_protocol(p, grid, pulse);
  const auto b = run_protocol(p, grid, pulse.scaled(3.0));
  const double scale = max_abs(a.echo_profile);
  for (std::size_t i = 0; i < a.echo_profile.size(); ++i) {
    REQUIRE(std::abs(b.echo_profile[i] - 3.0 * a.echo_profile[i]) <= 1e-12 * scale);
    REQUIRE(std::abs(b.transmitted_profile[i] - 3.0 * a.transmitted_profile[i]) <= 1e-12 * scale);
  }
  CHECK(b.efficiency == Approx(a.efficiency).epsilon(1e-12));
}

TEST_CASE("detuning symmetry keeps the echo real up to a global phase") {
  const auto grid = SolverGrid::reference();
  const auto echo = run_protocol(MemoryParams::dimensionless(2.5, 0.0), grid, PulseShape::flat_top());
  std::size_t peak = 0;
  double norm = 0.0;
  for (std::size_t i = 0; i < echo.echo_profile.size(); ++i) {
    norm += std::norm(echo.echo_profile[i]);
    if (std::abs(echo.echo_profile[i]) > std::abs(echo.echo_profile[peak])) peak = i;
  }
  norm = std::sqrt(norm);
  const Complex phase = echo.echo_profile[peak] / std::abs(echo.echo_profile[peak]);
  for (auto z : echo.echo_profile) REQUIRE(std::abs((z / phase).imag()) <= 1e-10 * norm);
}

TEST_CASE("instability is reported") {
  // A coherence far above anything a unit pulse can write trips the guard.
  const auto grid = SolverGrid::reference();
  CoherenceField coh(grid.n_z, grid.n_delta, grid.delta_half_width, 2.5);
  coh.input_energy = 1.0;
  coh.input_peak = 1.0;
  for (auto& s : coh.sigma) s = Complex{1e3, 0.0};
  CHECK_THROWS_AS(retrieve(coh, MemoryParams::dimensionless(2.5, 0.0), grid), SolverInstabilityError);
}

TEST_CASE("second-order convergence with a fixed detuning window") {
  // Self-convergence: with the window held, successive differences
  // shrink by 2^p where p is the integrator order.
  const auto pulse = PulseShape::flat_top();
  const auto p = MemoryParams::dimensionless(1.0, 0.0);
  double t[3], e[3];
  for (int k = 0; k < 3; ++k) {
    const auto echo = run_protocol(p, SolverGrid::reference().refined(1 << k, Refinement::fixed_window), pulse);
    t[k] = echo.transmission;
    e[k] = echo.efficiency;
  }
  const double order_t = std::log2(std::abs(t[0] - t[1]) / std::abs(t[1] - t[2]));
  const double order_e = std::log2(std::abs(e[0] - e[1]) / std::abs(e[1] - e[2]));
  CHECK(std::abs(order_t - 2.0) < 0.2);
  CHECK(std::abs(order_e - 2.0) < 0.2);
}

TEST_CASE("error against the broadband oracle falls under refinement") {
  const auto pulse = PulseShape::flat_top();
  for (double chi : {0.0, 0.01}) {
    const auto p = MemoryParams::dimensionless(2.5, chi, chi / 10.0);
    double prev_e = 1.0, prev_t = 1.0;
    for (int k = 0; k < 3; ++k) {
      const auto echo = run_protocol(p, SolverGrid::reference().refined(1 << k), pulse);
      const double err_e = rel_err(echo.efficiency, efficiency(p));
      const double err_t = rel_err(echo.transmission, std::exp(-2.5));
      CHECK(err_e < prev_e);
      CHECK(err_t < prev_t);
      prev_e = err_e;
      prev_t = err_t;
    }
  }
}

TEST_CASE("mode overlap") {
  const std::vector<Complex> a{{1, 0}, {2, 0}, {0, 0}};
  const std::vector<Complex> b{{0, 2}, {0, 4}, {0, 0}};
  const std::vector<Complex> c{{0, 0}, {0, 0}, {1, 0}};
  CHECK(mode_overlap(a, b) == Approx(1.0));
  CHECK(mode_overlap(a, c) == 0.0);
  CHECK_THROWS_AS(mode_overlap(a, std::vector<Complex>(2)), std::invalid_argument);
}
