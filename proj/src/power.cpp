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

#include "cfmimo/power.hpp"

#include <stdexcept>

namespace cfmimo {

void PowerModel::validate() const {
  for (double p : {p_lo, p_lna, p_ps, p_rf, p_adc, p_mixer, p_hybrid, p_switch}) {
    if (!(p >= 0.0)) throw std::invalid_argument("PowerModel: component powers must be >= 0");
  }
}

double power_fixed(int num_aps, int chains_per_ap, int rx_antennas, const PowerModel& pm) {
  if (num_aps < 0 || chains_per_ap < 0 || rx_antennas < 0)
    throw std::invalid_argument("power_fixed: negative dimension");
  const double aps = num_aps;
  return aps * pm.p_lo + aps * chains_per_ap * pm.per_chain(rx_antennas) +
         aps * rx_antennas * pm.per_antenna();
}

double power_aps(int num_aps, int avg_chains, int max_chains, int rx_antennas,
                 const PowerModel& pm) {
  if (num_aps < 0 || avg_chains < 0 || max_chains < 1 || rx_antennas < 0)
    throw std::invalid_argument("power_aps: invalid dimension");
  const double aps = num_aps;
  const double active = aps * avg_chains / max_chains;
  return aps * pm.p_lo + aps * avg_chains * pm.per_chain(rx_antennas) +
         active * rx_antennas * pm.per_antenna();
}

double power_as(int num_aps, int rx_antennas, int selected, const PowerModel& pm) {
  if (num_aps < 0 || rx_antennas < 0 || selected < 0 || selected > rx_antennas)
    throw std::invalid_argument("power_as: invalid dimension");
  const double aps = num_aps;
  return aps * pm.p_lo + aps * rx_antennas * pm.p_switch +
         aps * selected * (pm.p_rf + pm.p_adc + pm.per_antenna());
}

double power_arfa(const ActivationVector& n, int rx_antennas, const PowerModel& pm) {
  if (rx_antennas < 0) throw std::invalid_argument("power_arfa: negative dimension");
  for (int c : n.counts()) {
    if (c < 0) throw std::invalid_argument("power_arfa: negative chain count");
  }
  return n.size() * pm.p_lo + n.total() * pm.per_chain(rx_antennas) +
         static_cast<double>(rx_antennas) * pm.per_antenna() * n.active_aps();
}

double energy_efficiency(double rate, double power_mw) {
  if (!(power_mw > 0.0)) throw std::invalid_argument("energy_efficiency: power must be > 0");
  return rate / (power_mw / 1000.0);
}

}  // namespace cfmimo
