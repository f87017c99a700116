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

// Independent reference computations for the test suites. Everything here is
// written the slow, literal way on purpose and shares no code with the
// library beyond its data types.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "cfmimo/activation.hpp"
#include "cfmimo/channel.hpp"
#include "cfmimo/combining.hpp"

namespace oracle {

using cfmimo::ActivationVector;
using cfmimo::ChannelRealization;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Channel realization with i.i.d. CN(0, scale^2) entries on every link.
inline ChannelRealization gaussian_channels(int num_ues, int num_aps, int nr, int nt,
                                            std::mt19937_64& rng, double scale = 1.0) {
  ChannelRealization ch(num_ues, num_aps, nr, nt);
  std::normal_distribution<double> g(0.0, scale * std::sqrt(0.5));
  for (int l = 0; l < num_aps; ++l) {
    for (int k = 0; k < num_ues; ++k) {
      MatrixXcd h(nr, nt);
      for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j) h(i, j) = {g(rng), g(rng)};
      cfmimo::LinkState s;
      s.kind = cfmimo::LinkKind::Los;
      s.beta_linear = 1.0;
      ch.set_link(k, l, s, cfmimo::PathSet{}, h);
    }
  }
  return ch;
}

/// Random member of S by repeated +1 at uniformly chosen non-full APs.
inline ActivationVector random_feasible(int num_aps, int cap, int total, std::mt19937_64& rng) {
  std::vector<int> n(num_aps, 0);
  std::uniform_int_distribution<int> pick(0, num_aps - 1);
  for (int t = 0; t < total;) {
    const int l = pick(rng);
    if (n[l] < cap) {
      ++n[l];
      ++t;
    }
  }
  return ActivationVector(n);
}

/// Exhaustive minimization of ||u - f||^2 over every codebook vector.
/// Ties keep the first vector in odometer order (element 0 fastest).
inline VectorXcd brute_force_quantize(const VectorXcd& u, int bits) {
  const int nr = static_cast<int>(u.size());
  const int levels = 1 << bits;
  const double mag = 1.0 / std::sqrt(static_cast<double>(nr));
  const double step = 2.0 * M_PI / levels;
  std::vector<int> idx(nr, 0);
  VectorXcd best(nr);
  double best_dist = std::numeric_limits<double>::infinity();
  while (true) {
    VectorXcd f(nr);
    for (int i = 0; i < nr; ++i) f(i) = std::polar(mag, step * idx[i]);
    const double d = (u - f).squaredNorm();
    if (d < best_dist) {
      best_dist = d;
      best = f;
    }
    int pos = 0;
    while (pos < nr && ++idx[pos] == levels) idx[pos++] = 0;
    if (pos == nr) break;
  }
  return best;
}

/// Per-element nearest codebook entry by Euclidean distance (first wins).
inline VectorXcd nearest_by_distance(const VectorXcd& u, int bits) {
  const int levels = 1 << bits;
  const double mag = 1.0 / std::sqrt(static_cast<double>(u.size()));
  VectorXcd f(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < levels; ++k) {
      const std::complex<double> c = std::polar(mag, 2.0 * M_PI * k / levels);
      const double d = std::norm(u(i) - c);
      if (d < best) {
        best = d;
        f(i) = c;
      }
    }
  }
  return f;
}

/// Largest-magnitude entry made real positive (first index on ties).
inline VectorXcd phase_normalized(VectorXcd v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  if (std::abs(v(best)) > 0) v *= std::conj(v(best)) / std::abs(v(best));
  return v;
}

inline double log2det(const MatrixXcd& m) {
  // General LU on the complex matrix; the determinant of an HPD matrix is real.
  return std::log2(std::abs(m.partialPivLu().determinant()));
}

/// log2 det(I_{sum n_l} + gamma F^H H H^H F) with the block-diagonal F and the
/// stacked H formed densely.
inline double stacked_rate(const std::vector<MatrixXcd>& blocks, const ChannelRealization& ch,
                           double gamma) {
  const int L = ch.num_aps();
  const int nr = ch.rx_antennas();
  const int p = ch.streams();
  int cols = 0;
  for (const auto& f : blocks) cols += static_cast<int>(f.cols());
  MatrixXcd big_f = MatrixXcd::Zero(L * nr, cols);
  MatrixXcd big_h(L * nr, p);
  int c = 0;
  for (int l = 0; l < L; ++l) {
    big_f.block(l * nr, c, nr, blocks[l].cols()) = blocks[l];
    c += static_cast<int>(blocks[l].cols());
    big_h.middleRows(l * nr, nr) = ch.ap_channel(l);
  }
  const MatrixXcd g = big_f.adjoint() * big_h;
  MatrixXcd m = MatrixXcd::Identity(cols, cols) + gamma * g * g.adjoint();
  return log2det(m);
}

struct ChbfReference {
  std::vector<MatrixXcd> blocks;
  std::vector<double> sub_rates;
  double total = 0.0;
};

/// Sequential centralized construction written literally: explicit inverse of
/// Q, the full Nr x Nr matrix H Q^{-1} H^H, its complete eigendecomposition,
/// per-element nearest-distance quantization.
inline ChbfReference chbf_reference(const ChannelRealization& ch, const ActivationVector& n,
                                    double gamma, int bits) {
  const int p = ch.streams();
  MatrixXcd q = MatrixXcd::Identity(p, p);
  ChbfReference out;
  for (int l = 0; l < ch.num_aps(); ++l) {
    const MatrixXcd& h = ch.ap_channel(l);
    const MatrixXcd qi = q.inverse();
    MatrixXcd m = h * qi * h.adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
    const int nr = static_cast<int>(h.rows());
    MatrixXcd f(nr, n[l]);
    for (int c = 0; c < n[l]; ++c)
      f.col(c) = nearest_by_distance(phase_normalized(es.eigenvectors().col(nr - 1 - c)), bits);
    const MatrixXcd inner =
        MatrixXcd::Identity(n[l], n[l]) + gamma * f.adjoint() * h * qi * h.adjoint() * f;
    const double r = n[l] > 0 ? log2det(inner) : 0.0;
    out.sub_rates.push_back(r);
    out.total += r;
    q += gamma * h.adjoint() * f * f.adjoint() * h;
    out.blocks.push_back(f);
  }
  return out;
}

/// Quantized leading left singular vectors of every H_l through a full SVD.
inline std::vector<MatrixXcd> schbf_reference(const ChannelRealization& ch,
                                              const ActivationVector& n, int bits) {
  std::vector<MatrixXcd> out;
  for (int l = 0; l < ch.num_aps(); ++l) {
    Eigen::JacobiSVD<MatrixXcd> svd(ch.ap_channel(l), Eigen::ComputeFullU);
    MatrixXcd f(ch.rx_antennas(), n[l]);
    for (int c = 0; c < n[l]; ++c)
      f.col(c) = nearest_by_distance(phase_normalized(svd.matrixU().col(c)), bits);
    out.push_back(f);
  }
  return out;
}

/// All vectors in [0, cap]^L with the given sum, odometer enumeration with a
/// final sort.
inline std::vector<ActivationVector> brute_force_feasible(int num_aps, int cap, int total) {
  std::vector<ActivationVector> out;
  std::vector<int> v(num_aps, 0);
  while (true) {
    int s = 0;
    for (int x : v) s += x;
    if (s == total) out.emplace_back(v);
    int pos = 0;
    while (pos < num_aps && ++v[pos] > cap) v[pos++] = 0;
    if (pos == num_aps) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
