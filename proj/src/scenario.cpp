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

#include "cfmimo/scenario.hpp"

#include <cmath>

namespace cfmimo {

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

PathLossModel PathLossModel::from_carrier(double carrier_hz, double gtx_dbi,
                                          double grx_dbi) {
  PathLossModel m;
  const double lambda = kSpeedOfLight / carrier_hz;
  m.beta0_db = 20.0 * std::log10(4.0 * kPi * m.d0_m / lambda);
  m.ga_db = gtx_dbi + grx_dbi;
  return m;
}

void PathLossModel::validate() const {
  if (!(d0_m > 0.0)) throw ConfigError("path loss: d0 must be positive");
  if (!(eps_los > 0.0) || !(eps_nlos > 0.0))
    throw ConfigError("path loss: exponents must be positive");
  if (xi_los_db < 0.0 || xi_nlos_db < 0.0)
    throw ConfigError("path loss: shadowing deviation must be non-negative");
  if (!(a_out_inv_m > 0.0) || !(a_los_inv_m > 0.0))
    throw ConfigError("path loss: outage/LOS length scales must be positive");
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(area_side_m > 0.0, "area_side_m must be positive");
  require(num_aps >= 1, "aps must be >= 1");
  require(num_ues >= 1, "ues must be >= 1");
  require(tx_antennas >= 1, "tx_antennas must be >= 1");
  require(rf_chains >= 1 && rf_chains <= rx_antennas,
          "rf_chains must satisfy 1 <= N <= rx_antennas");
  require(avg_active_chains >= 0 && avg_active_chains <= rf_chains,
          "avg_active_chains must satisfy 0 <= nbar <= N");
  require(paths >= 1, "paths must be >= 1");
  require(phase_bits >= 1 && phase_bits <= 16, "phase_bits must be in [1, 16]");
  require(carrier_hz > 0.0, "carrier_hz must be positive");
  require(bandwidth_hz > 0.0, "bandwidth_hz must be positive");
  require(!rho_dbm.empty(), "rho_dbm must list at least one value");
  require(trials >= 1, "trials must be >= 1");
  require(antenna_spacing > 0.0, "antenna_spacing must be positive");
  require(aoa_half_width >= 0.0 && aod_half_width >= 0.0,
          "angle half widths must be non-negative");
  require(as_antennas >= 1, "as_antennas must be >= 1");
  require(beam_grid >= 2, "beam_grid must be >= 2");
  path_loss.validate();
}

double ScenarioConfig::noise_dbm() const {
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double ScenarioConfig::gamma(double rho_dbm_value) const {
  // Both in mW, so the ratio is unit-free.
  return db_to_linear(rho_dbm_value) / db_to_linear(noise_dbm());
}

}  // namespace cfmimo
