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

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "cfmimo/scenario.hpp"

namespace cfmimo {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point2& a, const Point2& b);

struct Topology {
  std::vector<Point2> ap_positions;
  std::vector<Point2> ue_positions;

  /// Distance between UE k and AP l (m).
  double distance(int k, int l) const;
};

/// L access points then K users, each an independent uniform draw over
/// [0, D]^2.
Topology generate_topology(const ScenarioConfig& cfg, Rng& rng);

enum class LinkKind { Outage, Los, Nlos };

const char* to_string(LinkKind kind);

struct LinkProbabilities {
  double outage = 0.0;
  double los = 0.0;
  double nlos = 0.0;
};

/// p_out = max{0, 1 - exp(-d/a_out_inv + b_out)}, p_los = (1 - p_out) exp(-d/a_los_inv),
/// p_nlos = 1 - p_out - p_los.
LinkProbabilities link_state_probabilities(double d, const PathLossModel& plm);

struct LinkState {
  LinkKind kind = LinkKind::Outage;
  double beta_db = 0.0;        // undefined for Outage
  double beta_linear = 0.0;    // path loss as a power ratio (> 1 means loss); 0 for Outage
  double shadow_db = 0.0;      // realized shadowing term
  bool below_reference = false;  // d < d0: formula evaluated as written

  bool connected() const { return kind != LinkKind::Outage; }
};

/// beta0 + 10 eps log10(d/d0) + shadow, for a LOS or NLOS link.
double path_loss_db(double d, LinkKind kind, double shadow_db,
                    const PathLossModel& plm);

/// Draws the link state, then one shadowing term for a connected link.
LinkState draw_link_state(double d, const PathLossModel& plm, Rng& rng);

/// ULA response: element i = exp(j 2 pi spacing i sin(angle)) / sqrt(n).
Eigen::VectorXcd array_response(double angle, int n_elems, double spacing);

/// Per-path parameters of one UE-AP link.
struct PathSet {
  Eigen::VectorXcd gains;  // alpha_p ~ CN(0, 1)
  Eigen::VectorXd aoa;     // rad
  Eigen::VectorXd aod;     // rad
};

/// sqrt(Ga / beta * Nr Nt / P) * sum_p alpha_p a_r(aoa_p) a_t(aod_p)^H, or the
/// zero matrix for an outage link.
Eigen::MatrixXcd link_channel(const LinkState& state, const PathSet& paths,
                              int rx_antennas, int tx_antennas, double spacing,
                              double ga_linear);

/// Channels for every (UE, AP) pair of one large-scale realization.
class ChannelRealization {
 public:
  ChannelRealization(int num_ues, int num_aps, int rx_antennas, int tx_antennas);

  int num_ues() const { return num_ues_; }
  int num_aps() const { return num_aps_; }
  int rx_antennas() const { return rx_antennas_; }
  int tx_antennas() const { return tx_antennas_; }
  /// K * Nt, the column count of every per-AP aggregate.
  int streams() const { return num_ues_ * tx_antennas_; }

  const Eigen::MatrixXcd& link(int k, int l) const { return links_[index(k, l)]; }
  const LinkState& link_state(int k, int l) const { return states_[index(k, l)]; }
  const PathSet& paths(int k, int l) const { return paths_[index(k, l)]; }
  /// H_l = [H_1l, ..., H_Kl], Nr x K Nt.
  const Eigen::MatrixXcd& ap_channel(int l) const { return per_ap_[l]; }

  /// Stores H_kl and refreshes the matching column block of H_l.
  void set_link(int k, int l, LinkState state, PathSet paths, Eigen::MatrixXcd h);

  /// Number of links flagged below the reference distance.
  int degenerate_links() const;

 private:
  std::size_t index(int k, int l) const {
    return static_cast<std::size_t>(l) * num_ues_ + k;
  }

  int num_ues_;
  int num_aps_;
  int rx_antennas_;
  int tx_antennas_;
  std::vector<Eigen::MatrixXcd> links_;
  std::vector<LinkState> states_;
  std::vector<PathSet> paths_;
  std::vector<Eigen::MatrixXcd> per_ap_;
};

/// Draws link states and small-scale path parameters for every pair. Draw
/// order is AP-major, UE-minor; within a link: state, shadowing, then per
/// path (gain, AoA, AoD).
ChannelRealization draw_channels(const ScenarioConfig& cfg, const Topology& topology,
                                 const PathLossModel& plm, Rng& rng);

}  // namespace cfmimo
