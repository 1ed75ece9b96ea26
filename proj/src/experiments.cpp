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

#include "hyperecho/experiments.hpp"

#include <charconv>
#include <cmath>
#include <future>
#include <map>
#include <sstream>
#include <variant>

#include "json.hpp"

namespace hyperecho {
namespace {

using nlohmann::json;

constexpr double kPdeTolerance = 0.02;  // relative
constexpr double kMcSigmas = 4.0;

PulseShape make_pulse(PulseKind kind) {
  return kind == PulseKind::gaussian ? PulseShape::gaussian() : PulseShape::flat_top();
}

json params_json(const MemoryParams& p) {
  json j = {{"alpha_l", p.alpha_l()},
            {"chi", p.chi()},
            {"gamma_tau", p.gamma_tau()},
            {"gamma_t0", p.gamma_t0()}};
  j["bandwidth_tau"] = p.bandwidth_tau() ? json(*p.bandwidth_tau()) : json(nullptr);
  return j;
}

std::string dump(json j, const ExperimentConfig& cfg) {
  j["//"] = provenance(cfg);
  return j.dump(2) + "\n";
}

class CsvWriter {
 public:
  explicit CsvWriter(const ExperimentConfig& cfg) { out_ << "# " << provenance(cfg) << '\n'; }

  CsvWriter& comment(const std::string& text) {
    out_ << "# " << text << '\n';
    return *this;
  }
  CsvWriter& header(std::initializer_list<const char*> columns) {
    bool first = true;
    for (const char* c : columns) {
      out_ << (first ? "" : ",") << c;
      first = false;
    }
    out_ << '\n';
    return *this;
  }
  CsvWriter& row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      out_ << (first ? "" : ",") << format_number(v);
      first = false;
    }
    out_ << '\n';
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::vector<double> curve_grid(const ExperimentConfig& cfg) {
  if (cfg.alpha_l_grid.empty()) return default_alpha_l_grid();
  return cfg.alpha_l_grid;
}

struct CrosscheckPoint {
  double alpha_l;
  double squeezing_db;
};

struct PdeOutcome {
  std::optional<EchoResult> echo;
  std::string error;
};

PdeOutcome run_pde(const MemoryParams& params, const ExperimentConfig& cfg) {
  try {
    return {run_protocol(params, cfg.grid, make_pulse(cfg.pulse), cfg.protocol), {}};
  } catch (const std::exception& e) {
    return {std::nullopt, std::string("pde: ") + e.what()};
  }
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

std::string provenance(const ExperimentConfig& cfg) {
  const MemoryParams& p = cfg.memory;
  std::string s = std::string("hyperecho ") + HYPERECHO_VERSION + " mode=" +
                  std::string(to_string(cfg.mode));
  s += " alpha_l=" + format_number(p.alpha_l());
  s += " chi=" + format_number(p.chi());
  s += " gamma_tau=" + format_number(p.gamma_tau());
  s += " gamma_t0=" + format_number(p.gamma_t0());
  s += " bandwidth_tau=" + (p.bandwidth_tau() ? format_number(*p.bandwidth_tau()) : "unset");
  return s;
}

RunOutput run_fidelity(const ExperimentConfig& cfg) {
  const auto& p = cfg.memory;
  const double eta = efficiency(p);
  struct Row {
    double db, r, sqv, sqv_db, fidelity;
  };
  std::vector<Row> rows;
  for (double db : squeezing_for(cfg)) {
    const double r = db_to_r(db);
    const double sqv = squeezed_quadrature_variance(r, p);
    rows.push_back({db, r, sqv, 10.0 * std::log10(sqv / kVacuumVariance), storage_fidelity(r, p)});
  }
  if (cfg.format == OutputFormat::json) {
    json table = json::array();
    for (const auto& row : rows) {
      table.push_back({{"squeezing_db", row.db},
                       {"r", row.r},
                       {"eta", eta},
                       {"sqv", row.sqv},
                       {"sqv_db", row.sqv_db},
                       {"fidelity", row.fidelity},
                       {"above_cft", row.fidelity > kClassicalFidelityThreshold}});
    }
    return {dump({{"parameters", params_json(p)}, {"cft", kClassicalFidelityThreshold},
                  {"rows", table}},
                 cfg)};
  }
  CsvWriter csv(cfg);
  csv.header({"squeezing_db", "r", "eta", "sqv", "sqv_db", "fidelity", "cft"});
  for (const auto& row : rows) {
    csv.row({row.db, row.r, eta, row.sqv, row.sqv_db, row.fidelity, kClassicalFidelityThreshold});
  }
  return {csv.str()};
}

RunOutput run_figure2(const ExperimentConfig& cfg) {
  const auto dbs = squeezing_for(cfg);
  if (dbs.size() != 1) {
    throw ConfigError("figure 2 uses a single squeezing value; 'squeezing_db' has " +
                      std::to_string(dbs.size()));
  }
  const auto grid = curve_grid(cfg);
  if (grid.empty() || cfg.chi_values.empty()) {
    throw ConfigError("figure 2 needs a non-empty 'curve.alpha_l_grid' and 'curve.chi_values'");
  }
  const double r = db_to_r(dbs.front());
  json rows = json::array();
  CsvWriter csv(cfg);
  csv.comment("squeezing_db=" + format_number(dbs.front()));
  csv.header({"alpha_l", "chi", "fidelity", "cft"});
  for (double chi : cfg.chi_values) {
    const auto curve = fidelity_curve(r, cfg.memory.with_chi(chi), grid);
    for (const auto& pt : curve) {
      csv.row({pt.alpha_l, chi, pt.fidelity, kClassicalFidelityThreshold});
      rows.push_back({{"alpha_l", pt.alpha_l}, {"chi", chi}, {"fidelity", pt.fidelity},
                      {"cft", kClassicalFidelityThreshold}});
    }
  }
  if (cfg.format == OutputFormat::json) {
    return {dump({{"figure", 2}, {"squeezing_db", dbs.front()}, {"rows", rows}}, cfg)};
  }
  return {csv.str()};
}

RunOutput run_figure3(const ExperimentConfig& cfg) {
  const auto dbs = squeezing_for(cfg);
  const auto grid = curve_grid(cfg);
  if (grid.empty() || dbs.empty()) {
    throw ConfigError("figure 3 needs a non-empty 'curve.alpha_l_grid' and 'squeezing_db'");
  }
  json rows = json::array();
  CsvWriter csv(cfg);
  csv.comment("chi=" + format_number(cfg.memory.chi()));
  csv.header({"alpha_l", "squeezing_db", "fidelity", "cft"});
  for (double db : dbs) {
    const auto curve = fidelity_curve(db_to_r(db), cfg.memory, grid);
    for (const auto& pt : curve) {
      csv.row({pt.alpha_l, db, pt.fidelity, kClassicalFidelityThreshold});
      rows.push_back({{"alpha_l", pt.alpha_l}, {"squeezing_db", db}, {"fidelity", pt.fidelity},
                      {"cft", kClassicalFidelityThreshold}});
    }
  }
  if (cfg.format == OutputFormat::json) {
    return {dump({{"figure", 3}, {"chi", cfg.memory.chi()}, {"rows", rows}}, cfg)};
  }
  return {csv.str()};
}

RunOutput run_solve(const ExperimentConfig& cfg) {
  const EchoResult echo = run_protocol(cfg.memory, cfg.grid, make_pulse(cfg.pulse), cfg.protocol);
  const double eta = efficiency(cfg.memory);
  if (cfg.format == OutputFormat::json) {
    json t = json::array(), re = json::array(), im = json::array();
    for (std::size_t i = 0; i < echo.time.size(); ++i) {
      t.push_back(echo.time[i]);
      re.push_back(echo.echo_profile[i].real());
      im.push_back(echo.echo_profile[i].imag());
    }
    json summary = {{"efficiency", echo.efficiency},
                    {"analytic_eta", eta},
                    {"transmission", echo.transmission},
                    {"analytic_transmission", std::exp(-cfg.memory.alpha_l())},
                    {"echo_peak_time", echo.echo_peak_time},
                    {"secondary_emission", echo.secondary_emission},
                    {"residual_excitation", echo.residual_excitation},
                    {"mode_overlap", echo.mode_overlap.value_or(0.0)}};
    json grid = {{"n_z", cfg.grid.n_z},
                 {"n_t", cfg.grid.n_t},
                 {"n_delta", cfg.grid.n_delta},
                 {"delta_half_width", cfg.grid.delta_half_width},
                 {"courant", cfg.grid.courant()}};
    return {dump({{"parameters", params_json(cfg.memory)},
                  {"grid", grid},
                  {"summary", summary},
                  {"echo", {{"t", t}, {"re_amplitude", re}, {"im_amplitude", im}}}},
                 cfg)};
  }
  CsvWriter csv(cfg);
  csv.comment("efficiency=" + format_number(echo.efficiency) + " analytic_eta=" +
              format_number(eta) + " transmission=" + format_number(echo.transmission) +
              " echo_peak_time=" + format_number(echo.echo_peak_time) +
              " mode_overlap=" + format_number(echo.mode_overlap.value_or(0.0)));
  csv.header({"t", "re_amplitude", "im_amplitude"});
  for (std::size_t i = 0; i < echo.time.size(); ++i) {
    csv.row({echo.time[i], echo.echo_profile[i].real(), echo.echo_profile[i].imag()});
  }
  return {csv.str()};
}

RunOutput run_montecarlo(const ExperimentConfig& cfg) {
  json estimates = json::array();
  CsvWriter csv(cfg);
  csv.header({"squeezing_db", "vxx", "vpp", "vxp", "stderr_xx", "stderr_pp", "fidelity",
              "uncertainty", "analytic_vxx", "analytic_fidelity", "seed", "n_samples"});
  for (double db : squeezing_for(cfg)) {
    const double r = db_to_r(db);
    const FidelityEstimate est = estimate_fidelity(r, cfg.memory, cfg.sampling);
    const auto& c = est.covariance;
    const double analytic_vxx = squeezed_quadrature_variance(r, cfg.memory);
    const double analytic_f = storage_fidelity(r, cfg.memory);
    estimates.push_back({{"parameters", params_json(cfg.memory)},
                         {"squeezing_db", db},
                         {"vxx", c.vxx},
                         {"vpp", c.vpp},
                         {"vxp", c.vxp},
                         {"stderr_xx", c.stderr_xx},
                         {"stderr_pp", c.stderr_pp},
                         {"fidelity", est.fidelity},
                         {"uncertainty", est.uncertainty},
                         {"analytic_vxx", analytic_vxx},
                         {"analytic_fidelity", analytic_f},
                         {"seed", cfg.sampling.seed},
                         {"n_samples", cfg.sampling.n_samples},
                         {"stream_count", cfg.sampling.stream_count}});
    csv.row({db, c.vxx, c.vpp, c.vxp, c.stderr_xx, c.stderr_pp, est.fidelity, est.uncertainty,
             analytic_vxx, analytic_f, static_cast<double>(cfg.sampling.seed),
             static_cast<double>(cfg.sampling.n_samples)});
  }
  if (cfg.format == OutputFormat::json) return {dump({{"estimates", estimates}}, cfg)};
  return {csv.str()};
}

RunOutput run_crosscheck(const ExperimentConfig& cfg) {
  std::vector<double> depths = cfg.crosscheck_alpha_l;
  if (depths.empty()) depths.push_back(cfg.memory.alpha_l());
  const auto dbs = squeezing_for(cfg);

  // The PDE result does not depend on squeezing: one solve per depth.
  std::vector<std::future<PdeOutcome>> pde_jobs;
  for (double a : depths) {
    pde_jobs.push_back(std::async(std::launch::async, [&cfg, params = cfg.memory.with_alpha_l(a)] {
      return run_pde(params, cfg);
    }));
  }
  std::vector<PdeOutcome> pde;
  for (auto& job : pde_jobs) pde.push_back(job.get());

  json points = json::array();
  bool all_pass = true;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    const MemoryParams params = cfg.memory.with_alpha_l(depths[i]);
    const double eta = efficiency(params);
    for (double db : dbs) {
      const double r = db_to_r(db);
      json point = {{"alpha_l", depths[i]}, {"chi", params.chi()}, {"squeezing_db", db}};
      json errors = json::array();
      point["analytic_eta"] = eta;
      point["analytic_vxx"] = squeezed_quadrature_variance(r, params);
      point["fidelity_analytic"] = storage_fidelity(r, params);

      bool pde_pass = false;
      if (pde[i].echo) {
        const double got = pde[i].echo->efficiency;
        point["pde_efficiency"] = got;
        point["pde_transmission"] = pde[i].echo->transmission;
        pde_pass = std::abs(got - eta) <= kPdeTolerance * eta + 1e-12;
      } else {
        point["pde_efficiency"] = nullptr;
        errors.push_back(pde[i].error);
      }

      bool mc_pass = false;
      bool mc_fid_pass = false;
      try {
        const FidelityEstimate est = estimate_fidelity(r, params, cfg.sampling);
        point["mc_vxx"] = est.covariance.vxx;
        point["mc_stderr_xx"] = est.covariance.stderr_xx;
        point["fidelity_mc"] = est.fidelity;
        point["fidelity_mc_uncertainty"] = est.uncertainty;
        mc_pass = std::abs(est.covariance.vxx - point["analytic_vxx"].get<double>()) <=
                  kMcSigmas * est.covariance.stderr_xx;
        mc_fid_pass = std::abs(est.fidelity - point["fidelity_analytic"].get<double>()) <=
                      kMcSigmas * est.uncertainty;
      } catch (const std::exception& e) {
        point["mc_vxx"] = nullptr;
        point["fidelity_mc"] = nullptr;
        errors.push_back(std::string("montecarlo: ") + e.what());
      }

      point["pass_flags"] = {{"pde", pde_pass}, {"mc_vxx", mc_pass}, {"mc_fidelity", mc_fid_pass}};
      point["errors"] = errors;
      all_pass = all_pass && pde_pass && mc_pass && mc_fid_pass;
      points.push_back(point);
    }
  }
  json report = {{"points", points},
                 {"all_pass", all_pass},
                 {"seed", cfg.sampling.seed},
                 {"n_samples", cfg.sampling.n_samples},
                 {"tolerances", {{"pde_relative", kPdeTolerance}, {"mc_sigmas", kMcSigmas}}}};
  return {dump(report, cfg), all_pass};
}

RunOutput run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.mode) {
    case Mode::fidelity: return run_fidelity(cfg);
    case Mode::curve: return cfg.figure == 3 ? run_figure3(cfg) : run_figure2(cfg);
    case Mode::solve: return run_solve(cfg);
    case Mode::montecarlo: return run_montecarlo(cfg);
    case Mode::crosscheck: return run_crosscheck(cfg);
  }
  throw ConfigError("unknown mode");
}

}  // namespace hyperecho
