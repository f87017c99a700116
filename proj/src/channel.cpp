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

#include "cfmimo/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace cfmimo {

double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double Topology::distance(int k, int l) const {
  return cfmimo::distance(ue_positions.at(k), ap_positions.at(l));
}

Topology generate_topology(const ScenarioConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> coord(0.0, cfg.area_side_m);
  Topology topo;
  topo.ap_positions.reserve(cfg.num_aps);
  topo.ue_positions.reserve(cfg.num_ues);
  for (int l = 0; l < cfg.num_aps; ++l) {
    const double x = coord(rng);
    const double y = coord(rng);
    topo.ap_positions.push_back({x, y});
  }
  for (int k = 0; k < cfg.num_ues; ++k) {
    const double x = coord(rng);
    const double y = coord(rng);
    topo.ue_positions.push_back({x, y});
  }
  return topo;
}

const char* to_string(LinkKind kind) {
  switch (kind) {
    case LinkKind::Outage: return "outage";
    case LinkKind::Los: return "los";
    case LinkKind::Nlos: return "nlos";
  }
  return "?";
}

LinkProbabilities link_state_probabilities(double d, const PathLossModel& plm) {
  LinkProbabilities p;
  p.outage = std::max(0.0, 1.0 - std::exp(-d / plm.a_out_inv_m + plm.b_out));
  p.los = (1.0 - p.outage) * std::exp(-d / plm.a_los_inv_m);
  p.nlos = 1.0 - p.outage - p.los;
  return p;
}

double path_loss_db(double d, LinkKind kind, double shadow_db,
                    const PathLossModel& plm) {
  const double eps = kind == LinkKind::Los ? plm.eps_los : plm.eps_nlos;
  return plm.beta0_db + 10.0 * eps * std::log10(d / plm.d0_m) + shadow_db;
}

LinkState draw_link_state(double d, const PathLossModel& plm, Rng& rng) {
  const LinkProbabilities p = link_state_probabilities(d, plm);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);

  LinkState s;
  s.below_reference = d < plm.d0_m;
  if (u < p.outage) {
    s.kind = LinkKind::Outage;
    return s;
  }
  s.kind = u < p.outage + p.los ? LinkKind::Los : LinkKind::Nlos;
  const double xi = s.kind == LinkKind::Los ? plm.xi_los_db : plm.xi_nlos_db;
  std::normal_distribution<double> shadow(0.0, xi);
  s.shadow_db = xi > 0.0 ? shadow(rng) : 0.0;
  s.beta_db = path_loss_db(d, s.kind, s.shadow_db, plm);
  s.beta_linear = db_to_linear(s.beta_db);
  return s;
}

Eigen::VectorXcd array_response(double angle, int n_elems, double spacing) {
  Eigen::VectorXcd a(n_elems);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_elems));
  const double step = 2.0 * kPi * spacing * std::sin(angle);
  for (int i = 0; i < n_elems; ++i) {
    a(i) = std::polar(scale, step * i);
  }
  return a;
}

Eigen::MatrixXcd link_channel(const LinkState& state, const PathSet& paths,
                              int rx_antennas, int tx_antennas, double spacing,
                              double ga_linear) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(rx_antennas, tx_antennas);
  if (!state.connected()) return h;
  const auto n_paths = paths.gains.size();
  for (Eigen::Index p = 0; p < n_paths; ++p) {
    h.noalias() += paths.gains(p) * array_response(paths.aoa(p), rx_antennas, spacing) *
                   array_response(paths.aod(p), tx_antennas, spacing).adjoint();
  }
  const double amplitude =
      std::sqrt(ga_linear / state.beta_linear * rx_antennas * tx_antennas /
                static_cast<double>(n_paths));
  return amplitude * h;
}

ChannelRealization::ChannelRealization(int num_ues, int num_aps, int rx_antennas,
                                       int tx_antennas)
    : num_ues_(num_ues),
      num_aps_(num_aps),
      rx_antennas_(rx_antennas),
      tx_antennas_(tx_antennas),
      links_(static_cast<std::size_t>(num_ues) * num_aps,
             Eigen::MatrixXcd::Zero(rx_antennas, tx_antennas)),
      states_(static_cast<std::size_t>(num_ues) * num_aps),
      paths_(static_cast<std::size_t>(num_ues) * num_aps),
      per_ap_(num_aps, Eigen::MatrixXcd::Zero(rx_antennas, num_ues * tx_antennas)) {}

void ChannelRealization::set_link(int k, int l, LinkState state, PathSet paths,
                                  Eigen::MatrixXcd h) {
  if (h.rows() != rx_antennas_ || h.cols() != tx_antennas_)
    throw std::invalid_argument("set_link: channel matrix has the wrong shape");
  per_ap_[l].middleCols(static_cast<Eigen::Index>(k) * tx_antennas_, tx_antennas_) = h;
  links_[index(k, l)] = std::move(h);
  states_[index(k, l)] = state;
  paths_[index(k, l)] = std::move(paths);
}

int ChannelRealization::degenerate_links() const {
  return static_cast<int>(std::count_if(states_.begin(), states_.end(),
                                        [](const LinkState& s) { return s.below_reference; }));
}

ChannelRealization draw_channels(const ScenarioConfig& cfg, const Topology& topology,
                                 const PathLossModel& plm, Rng& rng) {
  ChannelRealization ch(cfg.num_ues, cfg.num_aps, cfg.rx_antennas, cfg.tx_antennas);
  std::normal_distribution<double> half_normal(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> aoa(-cfg.aoa_half_width, cfg.aoa_half_width);
  std::uniform_real_distribution<double> aod(-cfg.aod_half_width, cfg.aod_half_width);
  const double ga = plm.ga_linear();

  for (int l = 0; l < cfg.num_aps; ++l) {
    for (int k = 0; k < cfg.num_ues; ++k) {
      LinkState state = draw_link_state(topology.distance(k, l), plm, rng);
      PathSet paths;
      if (state.connected()) {
        paths.gains.resize(cfg.paths);
        paths.aoa.resize(cfg.paths);
        paths.aod.resize(cfg.paths);
        for (int p = 0; p < cfg.paths; ++p) {
          const double re = half_normal(rng);
          const double im = half_normal(rng);
          paths.gains(p) = {re, im};
          paths.aoa(p) = aoa(rng);
          paths.aod(p) = aod(rng);
        }
      }
      Eigen::MatrixXcd h = link_channel(state, paths, cfg.rx_antennas, cfg.tx_antennas,
                                        cfg.antenna_spacing, ga);
      ch.set_link(k, l, state, std::move(paths), std::move(h));
    }
  }
  return ch;
}

}  // namespace cfmimo
