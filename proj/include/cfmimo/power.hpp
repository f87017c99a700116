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

#include "cfmimo/activation.hpp"

namespace cfmimo {

/// Component power draws in mW.
struct PowerModel {
  double p_lo = 22.5;
  double p_lna = 20.0;
  double p_ps = 30.0;
  double p_rf = 40.0;
  double p_adc = 200.0;
  double p_mixer = 0.3;
  double p_hybrid = 3.0;
  double p_switch = 5.0;

  void validate() const;

  /// Per-chain cost behind the phase-shifter network: Nr P_PS + P_RF + P_ADC.
  double per_chain(int rx_antennas) const { return rx_antennas * p_ps + p_rf + p_adc; }
  /// Per-antenna front end: P_LNA + 2 P_M + P_H.
  double per_antenna() const { return p_lna + 2.0 * p_mixer + p_hybrid; }
};

/// Every AP runs n chains: L P_LO + L n (Nr P_PS + P_RF + P_ADC) + L Nr (P_LNA + 2 P_M + P_H).
double power_fixed(int num_aps, int chains_per_ap, int rx_antennas, const PowerModel& pm = {});

/// AP selection: L nbar / N APs on with all N chains. The active AP count
/// enters as the real ratio L nbar / N.
double power_aps(int num_aps, int avg_chains, int max_chains, int rx_antennas,
                 const PowerModel& pm = {});

/// Antenna selection through switches: no phase shifters.
double power_as(int num_aps, int rx_antennas, int selected, const PowerModel& pm = {});

/// Adaptive activation: an AP with no chains switches off its front end but
/// keeps its local oscillator.
double power_arfa(const ActivationVector& n, int rx_antennas, const PowerModel& pm = {});

/// rate / (power_mw / 1000), bits/s/Hz per W. Throws for power <= 0.
double energy_efficiency(double rate, double power_mw);

}  // namespace cfmimo
