// SPDX-License-Identifier: Apache-2.0
//
// cfmimo: hybrid beamforming and adaptive RF chain activation for uplink
// cell-free mmWave massive MIMO
// Copyright (C) 2026 The cfmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "cfmimo/experiments.hpp"

namespace cfmimo {

namespace {

using nlohmann::ordered_json;

void reject_unknown(const ordered_json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (allowed.count(key) == 0) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const ordered_json& obj, const char* key, T& dst, const std::string& where) {
  if (!obj.contains(key)) return;
  const ordered_json& v = obj.at(key);
  const std::string name = where + "." + key;
  if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) throw ConfigError(name + ": expected a number");
    dst = v.get<double>();
    if (!std::isfinite(dst)) throw ConfigError(name + ": must be finite");
  } else if constexpr (std::is_same_v<T, int>) {
    if (!v.is_number_integer()) throw ConfigError(name + ": expected an integer");
    const auto x = v.get<long long>();
    if (x < -2147483647LL || x > 2147483647LL) throw ConfigError(name + ": out of range");
    dst = static_cast<int>(x);
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    if (!v.is_number_unsigned()) throw ConfigError(name + ": expected a non-negative integer");
    dst = v.get<std::uint64_t>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ConfigError(name + ": expected a string");
    dst = v.get<std::string>();
  }
}

std::vector<double> read_number_list(const ordered_json& v, const std::string& name) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError(name + ": expected numbers");
      out.push_back(x.get<double>());
    }
  } else {
    throw ConfigError(name + ": expected a number or an array of numbers");
  }
  for (double x : out)
    if (!std::isfinite(x)) throw ConfigError(name + ": values must be finite");
  return out;
}

void parse_scenario(const ordered_json& s, ScenarioConfig& cfg) {
  const std::string w = "scenario";
  reject_unknown(s,
                 {"area_side_m", "aps", "ues", "rx_antennas", "tx_antennas", "rf_chains",
                  "avg_active_chains", "paths", "phase_bits", "carrier_hz", "bandwidth_hz",
                  "noise_figure_db", "tx_gain_dbi", "rx_gain_dbi", "rho_dbm", "trials", "seed",
                  "antenna_spacing", "aoa_half_width_rad", "aod_half_width_rad", "as_antennas",
                  "beam_grid"},
                 w);
  read(s, "area_side_m", cfg.area_side_m, w);
  read(s, "aps", cfg.num_aps, w);
  read(s, "ues", cfg.num_ues, w);
  read(s, "rx_antennas", cfg.rx_antennas, w);
  read(s, "tx_antennas", cfg.tx_antennas, w);
  read(s, "rf_chains", cfg.rf_chains, w);
  read(s, "avg_active_chains", cfg.avg_active_chains, w);
  read(s, "paths", cfg.paths, w);
  read(s, "phase_bits", cfg.phase_bits, w);
  read(s, "carrier_hz", cfg.carrier_hz, w);
  read(s, "bandwidth_hz", cfg.bandwidth_hz, w);
  read(s, "noise_figure_db", cfg.noise_figure_db, w);
  read(s, "tx_gain_dbi", cfg.tx_gain_dbi, w);
  read(s, "rx_gain_dbi", cfg.rx_gain_dbi, w);
  if (s.contains("rho_dbm")) cfg.rho_dbm = read_number_list(s.at("rho_dbm"), w + ".rho_dbm");
  read(s, "trials", cfg.trials, w);
  read(s, "seed", cfg.master_seed, w);
  read(s, "antenna_spacing", cfg.antenna_spacing, w);
  read(s, "aoa_half_width_rad", cfg.aoa_half_width, w);
  read(s, "aod_half_width_rad", cfg.aod_half_width, w);
  read(s, "as_antennas", cfg.as_antennas, w);
  read(s, "beam_grid", cfg.beam_grid, w);
}

void parse_path_loss(const ordered_json& p, PathLossModel& plm) {
  const std::string w = "path_loss";
  reject_unknown(p,
                 {"d0_m", "beta0_db", "eps_los", "eps_nlos", "xi_los_db", "xi_nlos_db",
                  "a_out_inv_m", "b_out", "a_los_inv_m", "ga_db"},
                 w);
  read(p, "d0_m", plm.d0_m, w);
  read(p, "beta0_db", plm.beta0_db, w);
  read(p, "eps_los", plm.eps_los, w);
  read(p, "eps_nlos", plm.eps_nlos, w);
  read(p, "xi_los_db", plm.xi_los_db, w);
  read(p, "xi_nlos_db", plm.xi_nlos_db, w);
  read(p, "a_out_inv_m", plm.a_out_inv_m, w);
  read(p, "b_out", plm.b_out, w);
  read(p, "a_los_inv_m", plm.a_los_inv_m, w);
  read(p, "ga_db", plm.ga_db, w);
}

void parse_power(const ordered_json& p, PowerModel& pm) {
  const std::string w = "power";
  reject_unknown(p,
                 {"p_lo_mw", "p_lna_mw", "p_ps_mw", "p_rf_mw", "p_adc_mw", "p_mixer_mw",
                  "p_hybrid_mw", "p_switch_mw"},
                 w);
  read(p, "p_lo_mw", pm.p_lo, w);
  read(p, "p_lna_mw", pm.p_lna, w);
  read(p, "p_ps_mw", pm.p_ps, w);
  read(p, "p_rf_mw", pm.p_rf, w);
  read(p, "p_adc_mw", pm.p_adc, w);
  read(p, "p_mixer_mw", pm.p_mixer, w);
  read(p, "p_hybrid_mw", pm.p_hybrid, w);
  read(p, "p_switch_mw", pm.p_switch, w);
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigError("unknown output format '" + s + "' (expected csv or json)");
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": '" + text + "' is not a number");
  }
  if (used != text.size() || !std::isfinite(v))
    throw ConfigError(what + ": '" + text + "' is not a number");
  return v;
}

}  // namespace

ExperimentPlan parse_plan(const std::string& json_text) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("plan is not valid JSON: ") + e.what());
  }
  reject_unknown(root, {"scenario", "path_loss", "power", "schemes", "sweep", "output"}, "plan");

  ExperimentPlan plan;
  if (root.contains("scenario")) parse_scenario(root.at("scenario"), plan.scenario);
  // beta0 and Ga follow the carrier and gains unless overridden below.
  plan.scenario.path_loss = PathLossModel::from_carrier(
      plan.scenario.carrier_hz, plan.scenario.tx_gain_dbi, plan.scenario.rx_gain_dbi);
  if (root.contains("path_loss")) parse_path_loss(root.at("path_loss"), plan.scenario.path_loss);
  if (root.contains("power")) parse_power(root.at("power"), plan.power);

  if (root.contains("schemes")) {
    const auto& list = root.at("schemes");
    if (!list.is_array()) throw ConfigError("plan.schemes: expected an array of names");
    plan.schemes.clear();
    for (const auto& s : list) {
      if (!s.is_string()) throw ConfigError("plan.schemes: expected an array of names");
      plan.schemes.push_back(parse_scheme(s.get<std::string>()));
    }
  }
  if (root.contains("sweep")) {
    const auto& sw = root.at("sweep");
    reject_unknown(sw, {"variable", "values"}, "sweep");
    std::string var = "rho";
    read(sw, "variable", var, "sweep");
    plan.sweep.variable = parse_sweep_variable(var);
    if (sw.contains("values")) plan.sweep.values = read_number_list(sw.at("values"), "sweep.values");
  }
  if (root.contains("output")) {
    const auto& o = root.at("output");
    reject_unknown(o, {"path", "format"}, "output");
    read(o, "path", plan.out_path, "output");
    std::string fmt = "csv";
    read(o, "format", fmt, "output");
    plan.format = parse_format(fmt);
  }
  plan.validate();
  return plan;
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_plan(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string echo_plan(const ExperimentPlan& plan) {
  const ScenarioConfig& c = plan.scenario;
  const PathLossModel& p = c.path_loss;
  const PowerModel& pm = plan.power;
  ordered_json root;
  root["scenario"] = {
      {"area_side_m", c.area_side_m},   {"aps", c.num_aps},
      {"ues", c.num_ues},               {"rx_antennas", c.rx_antennas},
      {"tx_antennas", c.tx_antennas},   {"rf_chains", c.rf_chains},
      {"avg_active_chains", c.avg_active_chains},
      {"paths", c.paths},               {"phase_bits", c.phase_bits},
      {"carrier_hz", c.carrier_hz},     {"bandwidth_hz", c.bandwidth_hz},
      {"noise_figure_db", c.noise_figure_db},
      {"tx_gain_dbi", c.tx_gain_dbi},   {"rx_gain_dbi", c.rx_gain_dbi},
      {"rho_dbm", c.rho_dbm},           {"trials", c.trials},
      {"seed", c.master_seed},          {"antenna_spacing", c.antenna_spacing},
      {"aoa_half_width_rad", c.aoa_half_width},
      {"aod_half_width_rad", c.aod_half_width},
      {"as_antennas", c.as_antennas},   {"beam_grid", c.beam_grid},
  };
  root["path_loss"] = {
      {"d0_m", p.d0_m},           {"beta0_db", p.beta0_db},     {"eps_los", p.eps_los},
      {"eps_nlos", p.eps_nlos},   {"xi_los_db", p.xi_los_db},   {"xi_nlos_db", p.xi_nlos_db},
      {"a_out_inv_m", p.a_out_inv_m}, {"b_out", p.b_out},       {"a_los_inv_m", p.a_los_inv_m},
      {"ga_db", p.ga_db},
  };
  root["power"] = {
      {"p_lo_mw", pm.p_lo},         {"p_lna_mw", pm.p_lna},     {"p_ps_mw", pm.p_ps},
      {"p_rf_mw", pm.p_rf},         {"p_adc_mw", pm.p_adc},     {"p_mixer_mw", pm.p_mixer},
      {"p_hybrid_mw", pm.p_hybrid}, {"p_switch_mw", pm.p_switch},
  };
  ordered_json schemes = ordered_json::array();
  for (Scheme s : plan.schemes) schemes.push_back(scheme_name(s));
  root["schemes"] = schemes;
  root["sweep"] = {{"variable", sweep_name(plan.sweep.variable)},
                   {"values", plan.sweep_values()}};
  root["output"] = {{"path", plan.out_path},
                    {"format", plan.format == OutputFormat::Csv ? "csv" : "json"}};
  return root.dump(2) + "\n";
}

Sweep parse_sweep_spec(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
    throw ConfigError("sweep '" + spec + "': expected VAR=start:step:stop or VAR=v1,v2,...");
  Sweep sweep;
  sweep.variable = parse_sweep_variable(spec.substr(0, eq));
  const std::string body = spec.substr(eq + 1);

  if (body.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(body);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw ConfigError("sweep '" + spec + "': range needs start:step:stop");
    const double start = parse_number(parts[0], "sweep start");
    const double step = parse_number(parts[1], "sweep step");
    const double stop = parse_number(parts[2], "sweep stop");
    if (step == 0.0 || (stop - start) / step < 0.0)
      throw ConfigError("sweep '" + spec + "': step does not reach stop");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) throw ConfigError("sweep '" + spec + "': too many points");
    for (long i = 0; i < count; ++i) sweep.values.push_back(start + static_cast<double>(i) * step);
  } else {
    std::stringstream ss(body);
    for (std::string item; std::getline(ss, item, ',');)
      sweep.values.push_back(parse_number(item, "sweep value"));
  }
  if (sweep.values.empty()) throw ConfigError("sweep '" + spec + "': no values");
  return sweep;
}

}  // namespace cfmimo
