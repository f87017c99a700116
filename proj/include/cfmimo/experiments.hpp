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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cfmimo/power.hpp"
#include "cfmimo/scenario.hpp"

namespace cfmimo {

enum class Scheme {
  ChbfFixedN,
  ChbfFixedNbar,
  Schbf,
  BeamSteering,
  TsCarfa,
  FsCarfa,
  SvScarfa,
  PlScarfa,
  Aps,
  As,
  Exhaustive,
};

const char* scheme_name(Scheme s);
/// Throws ConfigError for an unknown name.
Scheme parse_scheme(const std::string& name);
const std::vector<Scheme>& all_schemes();

enum class SweepVariable { Rho, NumAps, AvgChains };

const char* sweep_name(SweepVariable v);
SweepVariable parse_sweep_variable(const std::string& name);

struct Sweep {
  SweepVariable variable = SweepVariable::Rho;
  std::vector<double> values;  // empty with Rho: the scenario's rho list
};

enum class OutputFormat { Csv, Json };

struct ExperimentPlan {
  ScenarioConfig scenario;
  PowerModel power;
  std::vector<Scheme> schemes{Scheme::ChbfFixedN, Scheme::TsCarfa, Scheme::FsCarfa,
                              Scheme::SvScarfa, Scheme::PlScarfa};
  Sweep sweep;
  std::string out_path;  // empty: standard output
  OutputFormat format = OutputFormat::Csv;

  /// Throws ConfigError; called before any trial runs.
  void validate() const;
  /// Sweep values after defaulting.
  std::vector<double> sweep_values() const;
  /// Scenario with sweep point `index` applied.
  ScenarioConfig scenario_at(int index) const;
  /// Transmit power (dBm) at sweep point `index`.
  double rho_at(int index) const;
};

struct MetricsRecord {
  Scheme scheme = Scheme::ChbfFixedN;
  SweepVariable sweep_variable = SweepVariable::Rho;
  double sweep_value = 0.0;
  int sweep_index = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double rate = 0.0;      // bits/s/Hz
  double power_mw = 0.0;
  double ee = 0.0;        // bits/s/Hz per W
  std::int64_t candidates_examined = 0;
  int active_ap_count = 0;
  int active_chains = 0;
  std::optional<std::int64_t> fronthaul_up;    // real units
  std::optional<std::int64_t> fronthaul_down;  // real units
  int degenerate_links = 0;                    // links closer than d0
};

/// Stable 64-bit mix of the three inputs (splitmix64 finalizer applied in
/// sequence). Every trial draws topology, then channels, from
/// std::mt19937_64 seeded with this value.
std::uint64_t trial_seed(std::uint64_t master_seed, int sweep_index, int trial);

struct FronthaulLoad {
  std::int64_t uplink = 0;    // real scalars, complex counted twice
  std::int64_t downlink = 0;
};

/// Per-AP fronthaul exchange per channel realization. Throws
/// std::invalid_argument for schemes that have no accounting entry
/// (beam-steering, aps, as).
FronthaulLoad fronthaul_load(Scheme scheme, const ScenarioConfig& cfg);

/// All schemes of the plan on one realization, in scheme enum order.
std::vector<MetricsRecord> run_trial(const ExperimentPlan& plan, int sweep_index, int trial);

/// Every (sweep point, trial), sorted by sweep index, trial, scheme. The
/// output does not depend on `workers`.
std::vector<MetricsRecord> run_plan(const ExperimentPlan& plan, int workers = 1);

struct Stat {
  double mean = 0.0;
  double stderr_ = 0.0;
};

struct SummaryRow {
  Scheme scheme = Scheme::ChbfFixedN;
  SweepVariable sweep_variable = SweepVariable::Rho;
  double sweep_value = 0.0;
  int count = 0;
  Stat rate, power_mw, ee, candidates;
  std::optional<double> rate_loss_pct;  // 100 (1 - mean rate / mean rate of fixed-N)
  std::optional<double> ee_gain_pct;    // 100 (mean ee / mean ee of fixed-N - 1)
  std::optional<double> fs_ts_candidate_ratio;  // fs-carfa rows only
};

/// One row per (sweep point, scheme), sorted like the records.
std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records);

void write_csv(std::ostream& os, const std::vector<MetricsRecord>& records);
void write_json(std::ostream& os, const std::vector<MetricsRecord>& records);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

// ------------------------------------------------------------ plan files

/// Parses a JSON plan. Unknown keys and out-of-range values throw ConfigError.
ExperimentPlan parse_plan(const std::string& json_text);
ExperimentPlan load_plan(const std::string& path);

/// Fully resolved plan (scenario, path-loss and power parameters included) as
/// JSON text that parse_plan() accepts.
std::string echo_plan(const ExperimentPlan& plan);

/// "rho=10:10:50" (start:step:stop, inclusive) or "L=10,20,40".
Sweep parse_sweep_spec(const std::string& spec);

}  // namespace cfmimo
