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
#include <functional>
#include <set>
#include <stdexcept>
#include <vector>

#include "cfmimo/activation.hpp"
#include "cfmimo/channel.hpp"
#include "cfmimo/combining.hpp"

namespace cfmimo {

/// Thrown when an exhaustive search would exceed its enumeration guard.
class SearchSpaceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct SearchTrace {
  std::int64_t candidates_examined = 0;  // distinct activation vectors evaluated
  std::vector<double> rate_history;      // best-so-far rate, initial point then per iteration
};

struct ArfaResult {
  ActivationVector n;
  AnalogCombiner combiner;
  double rate = 0.0;
  std::vector<double> sub_rates;  // only for centralized schemes
  SearchTrace trace;
};

/// Chain budget shared by every activation scheme.
struct ChainBudget {
  int max_per_ap = 0;   // N
  int avg_per_ap = 0;   // nbar
  int total(int num_aps) const { return num_aps * avg_per_ap; }
};

/// |S| for L APs, per-AP cap N and the given total. Saturates at INT64_MAX.
std::int64_t count_feasible(int num_aps, int max_per_ap, int total);

/// Calls `visit` for every member of S in increasing lexicographic order.
void enumerate_feasible(int num_aps, int max_per_ap, int total,
                        const std::function<void(const ActivationVector&)>& visit);

/// Neighbors of n: one chain moved from an AP with R_i < rbar (and n_i > 0) to
/// an AP with R_j > rbar (and n_j < N), minus tabu members. Sorted
/// lexicographically.
std::vector<ActivationVector> neighbor_set(const ActivationVector& n,
                                           const std::vector<double>& sub_rates, double rbar,
                                           const std::set<ActivationVector>& tabu,
                                           int max_per_ap);

struct TabuOptions {
  int max_iterations = -1;  // I; negative selects 8 L
  int max_stall = -1;       // count_max; negative selects I / 2
};

/// Tabu search over S starting from the uniform vector. Always moves to the
/// best non-tabu neighbor, even when it is worse; ties go to the
/// lexicographically smallest vector.
ArfaResult ts_carfa(const ChannelRealization& channels, const ChainBudget& budget,
                    double gamma, const PhaseCodebook& cb, const TabuOptions& opts = {});

/// Fast search: walks chains from the lowest-sub-rate APs to the highest with
/// two cursors over the sub-rate order of the uniform vector.
ArfaResult fs_carfa(const ChannelRealization& channels, const ChainBudget& budget,
                    double gamma, const PhaseCodebook& cb);

/// Picks the L nbar largest values out of the per-AP singular value lists.
/// Ties: larger value, then lower AP index, then lower position within the AP.
ActivationVector sv_allocation(const std::vector<std::vector<double>>& singular_values,
                               int total);

ArfaResult sv_scarfa(const ChannelRealization& channels, const ChainBudget& budget,
                     double gamma, const PhaseCodebook& cb);

/// Proportional allocation n_l = min(N, round(L nbar alpha_l / sum alpha)),
/// followed by the cyclic repair that adds chains at the largest-alpha APs or
/// removes them at the smallest-alpha APs until the total matches.
ActivationVector pl_allocation(const std::vector<double>& alpha, const ChainBudget& budget);

/// alpha_l = 1 / sum_k beta_kl over the connected links of AP l; an AP whose
/// links are all in outage gets alpha_l = 0.
std::vector<double> path_loss_weights(const ChannelRealization& channels);

ArfaResult pl_scarfa(const ChannelRealization& channels, const ChainBudget& budget,
                     double gamma, const PhaseCodebook& cb);

/// Argmax over all of S (ties to the lexicographically smallest n). Throws
/// SearchSpaceError when |S| exceeds `guard`.
ArfaResult exhaustive_arfa(const ChannelRealization& channels, const ChainBudget& budget,
                           double gamma, const PhaseCodebook& cb,
                           std::int64_t guard = 1000000);

/// AP selection baseline: floor(L nbar / N) APs with the largest
/// sum_k ||H_kl||_F^2 run all N chains, the rest are off.
ActivationVector aps_activation(const ChannelRealization& channels, const ChainBudget& budget);

}  // namespace cfmimo
