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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfmimo {

/// Random stream used everywhere a draw is needed. Passed explicitly so that
/// every generator is a pure function of its seed.
using Rng = std::mt19937_64;

// Rounded value; link budgets in this domain conventionally use 3e8.
inline constexpr double kSpeedOfLight = 3.0e8;
inline constexpr double kPi = std::numbers::pi;

/// Raised for invalid scenario or plan parameters (maps to CLI exit code 1).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear);

/// Path-loss parameters of the 28 GHz close-in model.
///
/// Defaults are the directional close-in reference distance parameters:
/// LOS exponent 1.9 / shadowing 1.1 dB, NLOS exponent 4.1 / shadowing 7.6 dB,
/// outage scale 45.5 m with offset 3.3, LOS scale 37 m.
struct PathLossModel {
  double d0_m = 1.0;
  double beta0_db = 0.0;  // 20 log10(4 pi d0 / lambda), see from_carrier()
  double eps_los = 1.9;
  double eps_nlos = 4.1;
  double xi_los_db = 1.1;
  double xi_nlos_db = 7.6;
  double a_out_inv_m = 45.5;
  double b_out = 3.3;
  double a_los_inv_m = 37.0;
  double ga_db = 39.5;  // Gtx + Grx

  /// Builds the model for a carrier frequency and antenna gains, deriving
  /// beta0 from the free-space loss at d0.
  static PathLossModel from_carrier(double carrier_hz, double gtx_dbi,
                                    double grx_dbi);

  double ga_linear() const { return db_to_linear(ga_db); }
  void validate() const;
};

/// Everything that defines one network scenario. Field names follow the
/// quantity they hold; see README for the config-file keys.
struct ScenarioConfig {
  double area_side_m = 200.0;   // D
  int num_aps = 40;             // L
  int num_ues = 8;              // K
  int rx_antennas = 64;         // Nr
  int tx_antennas = 4;          // Nt
  int rf_chains = 8;            // N
  int avg_active_chains = 2;    // nbar
  int paths = 3;                // paths per UE-AP link
  int phase_bits = 4;           // b
  double carrier_hz = 28e9;
  double bandwidth_hz = 100e6;
  double noise_figure_db = 9.0;
  double tx_gain_dbi = 15.0;
  double rx_gain_dbi = 24.5;
  std::vector<double> rho_dbm{50.0};
  int trials = 20;
  std::uint64_t master_seed = 1;

  double antenna_spacing = 0.5;       // ds / lambda
  double aoa_half_width = kPi / 12.0; // AoA ~ U[-w, w]
  double aod_half_width = kPi / 6.0;  // AoD ~ U[-w, w]
  int as_antennas = 32;               // Nr_AS for the antenna-selection baseline
  int beam_grid = 1024;               // beam-steering angle grid size

  /// Path-loss model. Config loading rebuilds it with from_carrier() from the
  /// carrier and gain fields, then applies any explicit overrides.
  PathLossModel path_loss = PathLossModel::from_carrier(28e9, 15.0, 24.5);

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;

  double wavelength_m() const { return kSpeedOfLight / carrier_hz; }
  /// -174 dBm/Hz + 10 log10(B) + NF
  double noise_dbm() const;
  /// rho / N0 in linear units for a transmit power in dBm.
  double gamma(double rho_dbm_value) const;
  int total_active() const { return num_aps * avg_active_chains; }
  int streams() const { return num_ues * tx_antennas; }
};

}  // namespace cfmimo
