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

#include "hyperecho/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hyperecho {
namespace {

using nlohmann::json;

void reject_unknown(const json& section, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : section.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) {
      throw ConfigError("unknown key '" + std::string(where) + key + "'");
    }
  }
}

const json& require_object(const json& j, const std::string& name) {
  if (!j.is_object()) throw ConfigError("'" + name + "' must be an object");
  return j;
}

double number(const json& j, const std::string& name) {
  if (!j.is_number()) throw ConfigError("'" + name + "' must be a number");
  return j.get<double>();
}

std::optional<double> optional_number(const json& section, const char* key,
                                      const std::string& prefix) {
  if (!section.contains(key)) return std::nullopt;
  return number(section.at(key), prefix + key);
}

double required_number(const json& section, const char* key, const std::string& prefix) {
  if (!section.contains(key)) throw ConfigError("missing key '" + prefix + key + "'");
  return number(section.at(key), prefix + key);
}

int integer(const json& j, const std::string& name) {
  if (!j.is_number_integer()) throw ConfigError("'" + name + "' must be an integer");
  const auto v = j.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError("'" + name + "' out of range");
  }
  return static_cast<int>(v);
}

std::vector<double> number_list(const json& j, const std::string& name) {
  if (!j.is_array()) throw ConfigError("'" + name + "' must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], name + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// Either an explicit list or {"start", "stop", "count"} (inclusive ends).
std::vector<double> grid_spec(const json& j, const std::string& name) {
  if (j.is_array()) return number_list(j, name);
  require_object(j, name);
  reject_unknown(j, name + ".", {"start", "stop", "count"});
  const double start = required_number(j, "start", name + ".");
  const double stop = required_number(j, "stop", name + ".");
  if (!j.contains("count")) throw ConfigError("missing key '" + name + ".count'");
  const int count = integer(j.at("count"), name + ".count");
  if (count < 2) throw ConfigError("'" + name + ".count' must be >= 2");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    out[i] = start + (stop - start) * static_cast<double>(i) / (count - 1);
  }
  return out;
}

std::string describe(const MemoryParams& p) {
  std::ostringstream s;
  s << "alpha_l=" << p.alpha_l() << " chi=" << p.chi() << " gamma_tau=" << p.gamma_tau()
    << " gamma_t0=" << p.gamma_t0();
  if (p.bandwidth_tau()) s << " bandwidth_tau=" << *p.bandwidth_tau();
  return s.str();
}

MemoryParams parse_memory(const json& m, std::string& note) {
  require_object(m, "memory");
  static const std::set<std::string> physical_keys{
      "alpha", "length", "decay_rate", "storage_time", "pulse_duration", "bandwidth",
      "bandwidth_unit"};
  static const std::set<std::string> dimensionless_keys{"chi", "gamma_tau", "gamma_t0",
                                                        "bandwidth_tau"};
  bool has_physical = false;
  bool has_dimensionless = false;
  for (const auto& [key, value] : m.items()) {
    has_physical = has_physical || physical_keys.count(key) > 0;
    has_dimensionless = has_dimensionless || dimensionless_keys.count(key) > 0;
  }
  if (has_physical && has_dimensionless) {
    throw ConfigError(
        "'memory' mixes physical keys (alpha, length, decay_rate, storage_time, pulse_duration, "
        "bandwidth) with dimensionless keys (chi, gamma_tau, gamma_t0, bandwidth_tau)");
  }

  try {
    if (!has_physical) {
      reject_unknown(m, "memory.", {"alpha_l", "chi", "gamma_tau", "gamma_t0", "bandwidth_tau"});
      const double alpha_l = required_number(m, "alpha_l", "memory.");
      const double chi = required_number(m, "chi", "memory.");
      const double gamma_tau = optional_number(m, "gamma_tau", "memory.").value_or(0.0);
      auto params = MemoryParams::dimensionless(alpha_l, chi, gamma_tau,
                                                optional_number(m, "gamma_t0", "memory."),
                                                optional_number(m, "bandwidth_tau", "memory."));
      note = "dimensionless memory parameters: " + describe(params);
      return params;
    }

    reject_unknown(m, "memory.",
                   {"alpha_l", "alpha", "length", "decay_rate", "storage_time", "pulse_duration",
                    "bandwidth", "bandwidth_unit"});
    PhysicalParams phys;
    phys.alpha_l = optional_number(m, "alpha_l", "memory.");
    phys.alpha = optional_number(m, "alpha", "memory.");
    phys.length = optional_number(m, "length", "memory.");
    phys.decay_rate = required_number(m, "decay_rate", "memory.");
    phys.storage_time = required_number(m, "storage_time", "memory.");
    phys.pulse_duration = required_number(m, "pulse_duration", "memory.");
    phys.bandwidth = required_number(m, "bandwidth", "memory.");
    if (!m.contains("bandwidth_unit")) {
      throw ConfigError("missing key 'memory.bandwidth_unit' (\"hz\" or \"rad_per_s\")");
    }
    const auto& unit = m.at("bandwidth_unit");
    if (unit == "hz") {
      phys.bandwidth_unit = BandwidthUnit::hertz;
    } else if (unit == "rad_per_s") {
      phys.bandwidth_unit = BandwidthUnit::radians_per_second;
    } else {
      throw ConfigError("'memory.bandwidth_unit' must be \"hz\" or \"rad_per_s\"");
    }
    auto params = MemoryParams::from_physical(phys);
    std::ostringstream s;
    s << "physical memory parameters converted (decay_rate as 1/s, bandwidth in "
      << (phys.bandwidth_unit == BandwidthUnit::hertz ? "Hz, times 2 pi" : "rad/s")
      << "): " << describe(params);
    if (params.broadband_warning()) s << " [warning: bandwidth_tau < 10]";
    note = s.str();
    return params;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("memory: ") + e.what());
  }
}

SolverGrid parse_grid(const json& g) {
  require_object(g, "grid");
  reject_unknown(g, "grid.", {"n_z", "n_t", "n_delta", "delta_half_width", "absorption_window",
                              "retrieval_window"});
  SolverGrid grid = SolverGrid::reference();
  if (g.contains("n_z")) grid.n_z = integer(g.at("n_z"), "grid.n_z");
  if (g.contains("n_t")) grid.n_t = integer(g.at("n_t"), "grid.n_t");
  if (g.contains("n_delta")) grid.n_delta = integer(g.at("n_delta"), "grid.n_delta");
  grid.delta_half_width =
      optional_number(g, "delta_half_width", "grid.").value_or(grid.delta_half_width);
  grid.absorption_window =
      optional_number(g, "absorption_window", "grid.").value_or(grid.absorption_window);
  grid.retrieval_window =
      optional_number(g, "retrieval_window", "grid.").value_or(grid.retrieval_window);
  // Resolution below the minimum is reported by the solver at run time so
  // that a crosscheck can still flag the PDE engine instead of aborting.
  if (grid.n_z < 2 || grid.n_t < 2 || grid.n_delta < 2) {
    throw ConfigError("'grid' point counts must be >= 2");
  }
  return grid;
}

PulseKind parse_pulse(const json& p) {
  if (!p.contains("pulse")) return PulseKind::flat_top;
  const auto& v = p.at("pulse");
  if (v == "flat_top") return PulseKind::flat_top;
  if (v == "gaussian") return PulseKind::gaussian;
  throw ConfigError("'protocol.pulse' must be \"flat_top\" or \"gaussian\"");
}

ProtocolOptions parse_protocol(const json& p) {
  require_object(p, "protocol");
  reject_unknown(p, "protocol.",
                 {"storage_time", "excited_fraction", "echo_half_window", "pulse"});
  ProtocolOptions opt;
  opt.storage_time = optional_number(p, "storage_time", "protocol.");
  opt.excited_fraction =
      optional_number(p, "excited_fraction", "protocol.").value_or(opt.excited_fraction);
  opt.echo_half_window =
      optional_number(p, "echo_half_window", "protocol.").value_or(opt.echo_half_window);
  if (!(opt.excited_fraction >= 0.0 && opt.excited_fraction <= 1.0)) {
    throw ConfigError("'protocol.excited_fraction' must lie in [0, 1]");
  }
  if (!(opt.echo_half_window > 0.0)) {
    throw ConfigError("'protocol.echo_half_window' must be positive");
  }
  return opt;
}

SampleConfig parse_sampling(const json& s) {
  require_object(s, "sampling");
  reject_unknown(s, "sampling.", {"n_samples", "seed", "stream_count"});
  SampleConfig cfg;
  if (s.contains("n_samples")) {
    if (!s.at("n_samples").is_number_unsigned()) {
      throw ConfigError("'sampling.n_samples' must be a non-negative integer");
    }
    cfg.n_samples = s.at("n_samples").get<std::uint64_t>();
  }
  if (s.contains("seed")) {
    if (!s.at("seed").is_number_unsigned()) {
      throw ConfigError("'sampling.seed' must be a non-negative integer");
    }
    cfg.seed = s.at("seed").get<std::uint64_t>();
  }
  if (s.contains("stream_count")) {
    cfg.stream_count = integer(s.at("stream_count"), "sampling.stream_count");
  }
  if (cfg.n_samples < 2) throw ConfigError("'sampling.n_samples' must be >= 2");
  if (cfg.stream_count < 1) throw ConfigError("'sampling.stream_count' must be >= 1");
  return cfg;
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::fidelity: return "fidelity";
    case Mode::curve: return "curve";
    case Mode::solve: return "solve";
    case Mode::montecarlo: return "montecarlo";
    case Mode::crosscheck: return "crosscheck";
  }
  return "?";
}

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::csv ? "csv" : "json";
}

Mode parse_mode(std::string_view text) {
  for (Mode m : {Mode::fidelity, Mode::curve, Mode::solve, Mode::montecarlo, Mode::crosscheck}) {
    if (text == to_string(m)) return m;
  }
  throw ConfigError("'mode' must be one of fidelity, curve, solve, montecarlo, crosscheck; got '" +
                    std::string(text) + "'");
}

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ConfigError("'format' must be csv or json; got '" + std::string(text) + "'");
}

std::vector<double> squeezing_for(const ExperimentConfig& cfg) {
  if (cfg.squeezing_db) return *cfg.squeezing_db;
  switch (cfg.mode) {
    case Mode::fidelity: return {3.0, 7.0, 10.0};
    case Mode::curve: return cfg.figure == 3 ? std::vector<double>{3.0, 7.0, 10.0}
                                             : std::vector<double>{7.0};
    case Mode::solve:
    case Mode::montecarlo:
    case Mode::crosscheck: return {7.0};
  }
  return {7.0};
}

std::vector<double> default_alpha_l_grid() {
  std::vector<double> grid(101);
  for (int i = 0; i <= 100; ++i) grid[i] = 0.1 * i;
  return grid;
}

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_object(root, "config");
  reject_unknown(root, "", {"mode", "memory", "squeezing_db", "curve", "crosscheck", "grid",
                            "protocol", "sampling", "output_path", "format"});

  ExperimentConfig cfg;
  if (root.contains("mode")) {
    if (!root.at("mode").is_string()) throw ConfigError("'mode' must be a string");
    cfg.mode = parse_mode(root.at("mode").get<std::string>());
  }
  if (root.contains("memory")) {
    cfg.memory = parse_memory(root.at("memory"), cfg.conversion_note);
  } else {
    cfg.conversion_note = "default memory parameters: " + describe(cfg.memory);
  }
  if (root.contains("squeezing_db")) {
    cfg.squeezing_db = number_list(root.at("squeezing_db"), "squeezing_db");
    if (cfg.squeezing_db->empty()) throw ConfigError("'squeezing_db' must not be empty");
    for (std::size_t i = 0; i < cfg.squeezing_db->size(); ++i) {
      const double db = (*cfg.squeezing_db)[i];
      if (!std::isfinite(db) || db < 0.0) {
        throw ConfigError("'squeezing_db[" + std::to_string(i) + "]' must be >= 0");
      }
    }
  }
  if (root.contains("curve")) {
    const auto& c = require_object(root.at("curve"), "curve");
    reject_unknown(c, "curve.", {"figure", "alpha_l_grid", "chi_values"});
    if (c.contains("figure")) {
      cfg.figure = integer(c.at("figure"), "curve.figure");
      if (cfg.figure != 2 && cfg.figure != 3) throw ConfigError("'curve.figure' must be 2 or 3");
    }
    if (c.contains("alpha_l_grid")) {
      cfg.alpha_l_grid = grid_spec(c.at("alpha_l_grid"), "curve.alpha_l_grid");
    }
    if (c.contains("chi_values")) {
      cfg.chi_values = number_list(c.at("chi_values"), "curve.chi_values");
    }
  }
  if (root.contains("crosscheck")) {
    const auto& c = require_object(root.at("crosscheck"), "crosscheck");
    reject_unknown(c, "crosscheck.", {"alpha_l_values"});
    if (c.contains("alpha_l_values")) {
      cfg.crosscheck_alpha_l = number_list(c.at("alpha_l_values"), "crosscheck.alpha_l_values");
    }
  }
  if (root.contains("grid")) cfg.grid = parse_grid(root.at("grid"));
  if (root.contains("protocol")) {
    cfg.protocol = parse_protocol(root.at("protocol"));
    cfg.pulse = parse_pulse(root.at("protocol"));
  }
  if (root.contains("sampling")) cfg.sampling = parse_sampling(root.at("sampling"));
  if (root.contains("output_path")) {
    if (!root.at("output_path").is_string()) throw ConfigError("'output_path' must be a string");
    cfg.output_path = root.at("output_path").get<std::string>();
  }
  if (root.contains("format")) {
    if (!root.at("format").is_string()) throw ConfigError("'format' must be a string");
    cfg.format = parse_format(root.at("format").get<std::string>());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace hyperecho
