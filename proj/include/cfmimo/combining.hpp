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

#include <complex>
#include <stdexcept>
#include <vector>

#include "cfmimo/activation.hpp"
#include "cfmimo/channel.hpp"
#include "cfmimo/linalg.hpp"

namespace cfmimo {

/// Uniform b-bit phase grid {0, 2pi/2^b, ..., 2pi(2^b - 1)/2^b} with element
/// magnitude 1/sqrt(Nr).
class PhaseCodebook {
 public:
  PhaseCodebook(int bits, int n_elems);

  int bits() const { return bits_; }
  int levels() const { return levels_; }
  int n_elems() const { return n_elems_; }
  double step() const { return step_; }
  double magnitude() const { return magnitude_; }
  double phase(int index) const { return step_ * index; }
  std::vector<double> phases() const;
  /// magnitude * exp(j phase(index))
  std::complex<double> element(int index) const { return elements_[index]; }

  /// Grid index nearest to `angle` (any real value). An angle exactly midway
  /// between two grid points resolves to the lower index of the pair.
  int nearest_index(double angle) const;

 private:
  int bits_;
  int levels_;
  int n_elems_;
  double step_;
  double magnitude_;
  std::vector<std::complex<double>> elements_;
};

/// Thrown by quantize_to_codebook() for an all-zero input.
class DegenerateVectorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Nearest codebook vector to u in Euclidean distance. The objective separates
/// per element, so each phase is rounded to its nearest grid point; zero
/// entries map to phase 0.
Eigen::VectorXcd quantize_to_codebook(const Eigen::VectorXcd& u, const PhaseCodebook& cb);

/// Per-AP analog combiners F_l (Nr x n_l). The global combiner is
/// block-diagonal and never formed densely.
struct AnalogCombiner {
  std::vector<Eigen::MatrixXcd> blocks;

  int num_aps() const { return static_cast<int>(blocks.size()); }
  ActivationVector active_counts() const;
};

struct RateBreakdown {
  double total_rate = 0.0;        // bits/s/Hz
  std::vector<double> sub_rates;  // R_l, bits/s/Hz
  double gamma = 0.0;
};

/// Centralized combiner construction with reusable per-AP state.
///
/// Works on channels pre-scaled by sqrt(gamma), each stored as H_l = U_l R_l
/// with U_l an orthonormal basis of range(H_l). With Q_{l-1} = L L^H and
/// S = L^{-1} R_l^H, the leading eigenvectors of H_l Q_{l-1}^{-1} H_l^H are
/// U_l w for the leading eigenvectors w of the rank(H_l) sized matrix S^H S,
/// so no inverse is formed and the Nr x Nr problem is never solved.
class ChbfEngine {
 public:
  /// State after an evaluation, enough to resume from any AP.
  struct Trace {
    ActivationVector n;
    std::vector<Eigen::MatrixXcd> q_before;     // Q_{l-1} (scaled, lower triangle), per AP
    std::vector<Eigen::MatrixXcd> full_columns; // leading quantized columns (n_l, plus one spare if n_l > 0)
    std::vector<double> sub_rates;
  };

  ChbfEngine(const ChannelRealization& channels, double gamma, const PhaseCodebook& cb,
             int max_columns);

  int num_aps() const { return static_cast<int>(factors_.size()); }
  int max_columns() const { return max_columns_; }
  double gamma() const { return gamma_; }

  /// Sub-rates and total rate for activation n. When `base` is given, APs
  /// before the first index where n differs from base->n are taken from it;
  /// the result is bit-identical to a fresh evaluation. When `capture` is
  /// given, the full per-AP state is recorded for later reuse.
  RateBreakdown evaluate(const ActivationVector& n, const Trace* base = nullptr,
                         Trace* capture = nullptr) const;

  /// The combiner F(n).
  AnalogCombiner combiner(const ActivationVector& n) const;

 private:
  friend struct ChbfAccess;
  RateBreakdown run(const ActivationVector& n, const Trace* base, Trace* capture,
                    AnalogCombiner* blocks) const;

  std::vector<linalg::RangeFactor> factors_;  // of sqrt(gamma) H_l
  PhaseCodebook cb_;
  int max_columns_;
  Eigen::Index streams_ = 0;
  double gamma_;
};

struct ChbfResult {
  AnalogCombiner combiner;
  RateBreakdown rates;
};

/// Sequential centralized construction: for l = 1..L, the n_l leading
/// eigenvectors of H_l Q_{l-1}^{-1} H_l^H are quantized to form F_l, the
/// sub-rate R_l = log2 det(I + gamma F_l^H H_l Q_{l-1}^{-1} H_l^H F_l) is
/// recorded, and Q_l = Q_{l-1} + gamma H_l^H F_l F_l^H H_l, with Q_0 = I.
ChbfResult chbf(const ChannelRealization& channels, const ActivationVector& n,
                double gamma, const PhaseCodebook& cb);

/// Per-AP construction from local channel state only: F_l holds the
/// quantized left singular vectors of H_l for its n_l largest singular values.
AnalogCombiner schbf(const ChannelRealization& channels, const ActivationVector& n,
                     const PhaseCodebook& cb);

/// The N largest singular values of every H_l (zero-padded when rank is
/// smaller), descending per AP.
std::vector<std::vector<double>> leading_singular_values(const ChannelRealization& channels,
                                                         int count);

struct BeamSteeringResult {
  AnalogCombiner combiner;
  std::vector<std::vector<double>> angles;  // chosen steering angle per column
};

/// Each of the n_l leading left singular vectors u of H_l is replaced by the
/// array response a_r(phi), phi on a uniform grid over [-pi/2, pi/2],
/// maximizing |a_r(phi)^H u| (ties to the lower grid index), then quantized.
BeamSteeringResult beam_steering(const ChannelRealization& channels,
                                 const ActivationVector& n, int grid_size,
                                 double spacing, const PhaseCodebook& cb);

struct AntennaSelection {
  std::vector<std::vector<int>> rows;  // selected antenna indices per AP, ascending
  double rate = 0.0;
};

/// Keeps the `selected` rows of each H_l with the largest Euclidean norms
/// (ties to the lower index) and evaluates the rate with those 0/1 selections.
AntennaSelection antenna_selection(const ChannelRealization& channels, int selected,
                                   double gamma);

/// Selection matrix (Nr x |rows|) with a single 1 per column.
Eigen::MatrixXd selection_matrix(const std::vector<int>& rows, int rx_antennas);

/// R = log2 det(I_{K Nt} + gamma sum_l H_l^H F_l F_l^H H_l).
double achievable_rate(const AnalogCombiner& combiner, const ChannelRealization& channels,
                       double gamma);

/// log2 det(I + gamma H^H H), every antenna with its own chain.
double fully_digital_rate(const ChannelRealization& channels, double gamma);

}  // namespace cfmimo
