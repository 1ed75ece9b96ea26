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

#include <cmath>
#include <numbers>
#include <string>

#include "hyperecho/config.hpp"

using namespace hyperecho;
using doctest::Approx;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("defaults") {
  const auto cfg = parse_config("{}");
  CHECK(cfg.mode == Mode::fidelity);
  CHECK(cfg.memory.alpha_l() == 2.5);
  CHECK(cfg.memory.chi() == 0.01);
  CHECK(cfg.format == OutputFormat::csv);
  CHECK(cfg.grid.n_z == 128);
  CHECK(cfg.sampling.n_samples == 1'000'000);
  CHECK_FALSE(cfg.output_path.has_value());
  CHECK(squeezing_for(cfg) == std::vector<double>{3.0, 7.0, 10.0});
  const auto grid = default_alpha_l_grid();
  CHECK(grid.size() == 101);
  CHECK(grid.back() == Approx(10.0));
}

TEST_CASE("physical parameter set with the unit declared") {
  const auto cfg = parse_config(R"({
    // reference memory
    "memory": {"alpha_l": 2.5, "decay_rate": 1e3, "storage_time": 10e-6,
               "pulse_duration": 1e-6, "bandwidth": 4.4e9, "bandwidth_unit": "hz"}
  })");
  CHECK(cfg.memory.chi() == Approx(0.01).epsilon(1e-14));
  CHECK(cfg.memory.gamma_tau() == Approx(0.001).epsilon(1e-14));
  CHECK(*cfg.memory.bandwidth_tau() == Approx(4400 * 2 * std::numbers::pi).epsilon(1e-14));
  CHECK_FALSE(cfg.memory.broadband_warning());
  CHECK(cfg.conversion_note.find("converted") != std::string::npos);
  CHECK(cfg.conversion_note.find("chi=0.01") != std::string::npos);

  const auto rad = parse_config(R"({"memory": {"alpha_l": 2.5, "decay_rate": 1e3,
      "storage_time": 10e-6, "pulse_duration": 1e-6, "bandwidth": 4.4e9,
      "bandwidth_unit": "rad_per_s"}})");
  CHECK(*rad.memory.bandwidth_tau() == Approx(4400).epsilon(1e-14));
}

TEST_CASE("minimal dimensionless memory") {
  const auto cfg = parse_config(R"({"memory": {"alpha_l": 2.5, "chi": 0.01}})");
  CHECK(cfg.memory.gamma_tau() == 0.0);
  CHECK(cfg.memory.chi() == 0.01);
  CHECK(cfg.conversion_note.find("dimensionless") != std::string::npos);
}

TEST_CASE("errors name the field") {
  CHECK(error_of(R"({"memory": {"alpha_l": 2.5}})").find("memory.chi") != std::string::npos);
  CHECK(error_of(R"({"memory": {"alpha_l": 2.5, "chi": 0.01, "decay_rate": 1}})")
            .find("mixes") != std::string::npos);
  CHECK(error_of(R"({"memory": {"alpha_l": 2.5, "alpha": 100, "length": 0.01, "decay_rate": 1e3,
      "storage_time": 1e-5, "pulse_duration": 1e-6, "bandwidth": 1e9, "bandwidth_unit": "hz"}})")
            .find("conflicts") != std::string::npos);
  CHECK(error_of(R"({"memory": {"alpha_l": 2.5, "decay_rate": 1e3, "storage_time": 1e-5,
      "pulse_duration": 1e-6, "bandwidth": 1e9}})")
            .find("memory.bandwidth_unit") != std::string::npos);
  CHECK(error_of(R"({"memory": {"alpha_l": 2.5, "decay_rate": 1e3, "storage_time": 1e-5,
      "pulse_duration": 1e-6, "bandwidth_unit": "hz"}})")
            .find("memory.bandwidth") != std::string::npos);
  CHECK(error_of(R"({"memory": {"alpha_l": -1, "chi": 0.01}})").find("alpha_l") != std::string::npos);
  CHECK(error_of(R"({"memroy": {}})").find("memroy") != std::string::npos);
  CHECK(error_of(R"({"grid": {"nz": 10}})").find("grid.nz") != std::string::npos);
  CHECK(error_of(R"({"mode": "plot"})").find("mode") != std::string::npos);
  CHECK(error_of(R"({"format": "xml"})").find("format") != std::string::npos);
  CHECK(error_of(R"({"squeezing_db": [3, -1]})").find("squeezing_db[1]") != std::string::npos);
  CHECK(error_of(R"({"sampling": {"n_samples": 1}})").find("sampling.n_samples") != std::string::npos);
  CHECK(error_of(R"({"sampling": {"seed": -4}})").find("sampling.seed") != std::string::npos);
  CHECK(error_of(R"({"curve": {"figure": 4}})").find("curve.figure") != std::string::npos);
  CHECK(error_of(R"({"protocol": {"excited_fraction": 2}})").find("excited_fraction") !=
        std::string::npos);
  CHECK(error_of(R"({"protocol": {"pulse": "square"}})").find("protocol.pulse") != std::string::npos);
  CHECK(error_of("{ not json").find("JSON") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("sections") {
  const auto cfg = parse_config(R"({
    "mode": "curve",
    "format": "json",
    "output_path": "out.json",
    "squeezing_db": [0, 3],
    "curve": {"figure": 3, "alpha_l_grid": {"start": 0, "stop": 5, "count": 11},
              "chi_values": [0, 0.2]},
    "crosscheck": {"alpha_l_values": [0, 2.5]},
    "grid": {"n_z": 4, "n_t": 100, "n_delta": 64, "delta_half_width": 50},
    "protocol": {"storage_time": 5, "excited_fraction": 0.5, "echo_half_window": 0.75,
                 "pulse": "gaussian"},
    "sampling": {"n_samples": 1000, "seed": 18446744073709551615, "stream_count": 2}
  })");
  CHECK(cfg.mode == Mode::curve);
  CHECK(cfg.format == OutputFormat::json);
  CHECK(cfg.output_path->string() == "out.json");
  CHECK(squeezing_for(cfg) == std::vector<double>{0.0, 3.0});
  CHECK(cfg.figure == 3);
  REQUIRE(cfg.alpha_l_grid.size() == 11);
  CHECK(cfg.alpha_l_grid[1] == Approx(0.5));
  CHECK(cfg.chi_values == std::vector<double>{0.0, 0.2});
  CHECK(cfg.crosscheck_alpha_l == std::vector<double>{0.0, 2.5});
  CHECK(cfg.grid.n_z == 4);  // accepted here, rejected by the solver
  CHECK(cfg.grid.delta_half_width == 50.0);
  CHECK(*cfg.protocol.storage_time == 5.0);
  CHECK(cfg.protocol.excited_fraction == 0.5);
  CHECK(cfg.pulse == PulseKind::gaussian);
  CHECK(cfg.sampling.seed == 18446744073709551615ull);
  CHECK(cfg.sampling.stream_count == 2);
}

TEST_CASE("per-mode squeezing defaults") {
  ExperimentConfig cfg;
  cfg.mode = Mode::curve;
  cfg.figure = 2;
  CHECK(squeezing_for(cfg) == std::vector<double>{7.0});
  cfg.figure = 3;
  CHECK(squeezing_for(cfg) == std::vector<double>{3.0, 7.0, 10.0});
  cfg.mode = Mode::crosscheck;
  CHECK(squeezing_for(cfg) == std::vector<double>{7.0});
}

TEST_CASE("enum spellings round trip") {
  for (auto m : {Mode::fidelity, Mode::curve, Mode::solve, Mode::montecarlo, Mode::crosscheck}) {
    CHECK(parse_mode(to_string(m)) == m);
  }
  CHECK(parse_format("json") == OutputFormat::json);
  CHECK(to_string(OutputFormat::csv) == "csv");
}
