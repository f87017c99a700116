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

#include "cfmimo/combining.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "cfmimo/linalg.hpp"

namespace cfmimo {

// ---------------------------------------------------------------- codebook

PhaseCodebook::PhaseCodebook(int bits, int n_elems)
    : bits_(bits), levels_(1 << bits), n_elems_(n_elems) {
  if (bits < 1 || bits > 16) throw std::invalid_argument("PhaseCodebook: bits out of range");
  if (n_elems < 1) throw std::invalid_argument("PhaseCodebook: n_elems must be >= 1");
  step_ = 2.0 * kPi / levels_;
  magnitude_ = 1.0 / std::sqrt(static_cast<double>(n_elems));
  elements_.reserve(levels_);
  for (int i = 0; i < levels_; ++i) elements_.push_back(std::polar(magnitude_, phase(i)));
}

std::vector<double> PhaseCodebook::phases() const {
  std::vector<double> out(levels_);
  for (int i = 0; i < levels_; ++i) out[i] = phase(i);
  return out;
}

int PhaseCodebook::nearest_index(double angle) const {
  double x = std::fmod(angle / step_, static_cast<double>(levels_));
  if (x < 0.0) x += levels_;
  const double lower = std::floor(x);
  int idx = static_cast<int>(lower);
  if (x - lower > 0.5) ++idx;
  return idx % levels_;
}

Eigen::VectorXcd quantize_to_codebook(const Eigen::VectorXcd& u, const PhaseCodebook& cb) {
  if (u.size() != cb.n_elems())
    throw std::invalid_argument("quantize_to_codebook: length does not match codebook");
  if ((u.array() == std::complex<double>(0.0, 0.0)).all())
    throw DegenerateVectorError("quantize_to_codebook: all-zero singular vector");
  Eigen::VectorXcd f(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const int idx = u(i) == std::complex<double>(0.0, 0.0) ? 0 : cb.nearest_index(std::arg(u(i)));
    f(i) = cb.element(idx);
  }
  return f;
}

ActivationVector AnalogCombiner::active_counts() const {
  std::vector<int> n(blocks.size());
  for (std::size_t l = 0; l < blocks.size(); ++l) n[l] = static_cast<int>(blocks[l].cols());
  return ActivationVector(std::move(n));
}

namespace {

Eigen::MatrixXcd quantize_columns(const Eigen::MatrixXcd& u, const PhaseCodebook& cb) {
  Eigen::MatrixXcd f(u.rows(), u.cols());
  for (Eigen::Index c = 0; c < u.cols(); ++c) f.col(c) = quantize_to_codebook(u.col(c), cb);
  return f;
}

void check_activation(const ActivationVector& n, const ChannelRealization& channels) {
  if (n.size() != channels.num_aps())
    throw std::invalid_argument("activation vector length does not match AP count");
  for (int l = 0; l < n.size(); ++l) {
    if (n[l] < 0 || n[l] > channels.rx_antennas())
      throw std::invalid_argument("activation count out of range");
  }
}

}  // namespace

// ---------------------------------------------------------------- C-HBF

ChbfEngine::ChbfEngine(const ChannelRealization& channels, double gamma,
                       const PhaseCodebook& cb, int max_columns)
    : cb_(cb), max_columns_(max_columns), gamma_(gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("ChbfEngine: gamma must be >= 0");
  if (cb.n_elems() != channels.rx_antennas())
    throw std::invalid_argument("ChbfEngine: codebook size does not match Nr");
  if (max_columns < 0 || max_columns > channels.rx_antennas())
    throw std::invalid_argument("ChbfEngine: max_columns out of range");
  const double s = std::sqrt(gamma);
  factors_.reserve(channels.num_aps());
  for (int l = 0; l < channels.num_aps(); ++l)
    factors_.push_back(linalg::range_factor(s * channels.ap_channel(l)));
  streams_ = channels.streams();
}

RateBreakdown ChbfEngine::evaluate(const ActivationVector& n, const Trace* base,
                                   Trace* capture) const {
  return run(n, base, capture, nullptr);
}

AnalogCombiner ChbfEngine::combiner(const ActivationVector& n) const {
  AnalogCombiner out;
  run(n, nullptr, nullptr, &out);
  return out;
}

RateBreakdown ChbfEngine::run(const ActivationVector& n, const Trace* base, Trace* capture,
                              AnalogCombiner* blocks) const {
  const int num_aps = this->num_aps();
  if (n.size() != num_aps) throw std::invalid_argument("chbf: activation length mismatch");
  for (int l = 0; l < num_aps; ++l) {
    if (n[l] < 0 || n[l] > max_columns_)
      throw std::invalid_argument("chbf: activation count exceeds available columns");
  }
  const Eigen::Index p = streams_;

  RateBreakdown out;
  out.gamma = gamma_;
  out.sub_rates.assign(num_aps, 0.0);

  int start = 0;
  if (base != nullptr) {
    if (base->n.size() != num_aps || static_cast<int>(base->q_before.size()) != num_aps)
      throw std::invalid_argument("chbf: base trace does not match");
    while (start < num_aps && base->n[start] == n[start]) ++start;
  }

  if (capture != nullptr) {
    capture->n = n;
    capture->q_before.resize(num_aps);
    capture->full_columns.resize(num_aps);
    capture->sub_rates.assign(num_aps, 0.0);
  }
  if (blocks != nullptr) blocks->blocks.assign(num_aps, Eigen::MatrixXcd());

  Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(p, p);
  if (start > 0) {
    for (int l = 0; l < start; ++l) out.sub_rates[l] = base->sub_rates[l];
    if (start < num_aps) q = base->q_before[start];
    if (capture != nullptr) {
      for (int l = 0; l < start; ++l) {
        capture->q_before[l] = base->q_before[l];
        capture->full_columns[l] = base->full_columns[l];
        capture->sub_rates[l] = base->sub_rates[l];
      }
    }
  }

  Eigen::MatrixXcd gram;
  for (int l = start; l < num_aps; ++l) {
    const int nl = n[l];
    const linalg::RangeFactor& h = factors_[l];
    const Eigen::Index nr = h.basis.rows();
    if (capture != nullptr) {
      capture->q_before[l] = q;
      capture->full_columns[l].resize(nr, 0);
    }
    if (nl == 0) {
      if (blocks != nullptr) blocks->blocks[l].resize(nr, 0);
      continue;
    }

    Eigen::LLT<Eigen::MatrixXcd> llt(q);
    if (llt.info() != Eigen::Success) throw std::runtime_error("chbf: Q is not positive definite");
    // S = L^{-1} R^H, so S^H S = R Q^{-1} R^H.
    const Eigen::MatrixXcd s = llt.matrixL().solve(h.coords.adjoint());

    Eigen::MatrixXcd columns;
    if (base != nullptr && l == start && base->full_columns[l].cols() >= nl) {
      // Q_{l-1} matches the base, so the leading columns do too.
      columns = base->full_columns[l];
    } else {
      // One spare column lets a later +1 move at this AP reuse the result.
      const int want = capture != nullptr ? std::min(max_columns_, nl + 1) : nl;
      gram.setZero(s.cols(), s.cols());
      gram.selfadjointView<Eigen::Lower>().rankUpdate(s.adjoint());
      columns = quantize_columns(linalg::leading_vectors_in_basis(h.basis, gram, want).vectors, cb_);
    }

    const Eigen::MatrixXcd w = h.basis.adjoint() * columns.leftCols(nl);  // U^H F
    const Eigen::MatrixXcd c = s * w;                                     // L^{-1} H^H F
    Eigen::MatrixXcd inner = Eigen::MatrixXcd::Identity(nl, nl);
    inner.selfadjointView<Eigen::Lower>().rankUpdate(c.adjoint());
    out.sub_rates[l] = linalg::log2det_hpd(inner);
    const Eigen::MatrixXcd bh = h.coords.adjoint() * w;  // H^H F
    q.selfadjointView<Eigen::Lower>().rankUpdate(bh);
    if (blocks != nullptr) blocks->blocks[l] = columns.leftCols(nl);
    if (capture != nullptr) {
      capture->full_columns[l] = std::move(columns);
      capture->sub_rates[l] = out.sub_rates[l];
    }
  }
  out.total_rate = std::accumulate(out.sub_rates.begin(), out.sub_rates.end(), 0.0);
  return out;
}

struct ChbfAccess {
  static RateBreakdown run(const ChbfEngine& e, const ActivationVector& n, AnalogCombiner* f) {
    return e.run(n, nullptr, nullptr, f);
  }
};

ChbfResult chbf(const ChannelRealization& channels, const ActivationVector& n, double gamma,
                const PhaseCodebook& cb) {
  check_activation(n, channels);
  const auto& counts = n.counts();
  const int widest = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  ChbfEngine engine(channels, gamma, cb, widest);
  ChbfResult result;
  result.rates = ChbfAccess::run(engine, n, &result.combiner);
  return result;
}

// ---------------------------------------------------------------- SC-HBF

AnalogCombiner schbf(const ChannelRealization& channels, const ActivationVector& n,
                     const PhaseCodebook& cb) {
  check_activation(n, channels);
  if (cb.n_elems() != channels.rx_antennas())
    throw std::invalid_argument("schbf: codebook size does not match Nr");
  AnalogCombiner out;
  out.blocks.resize(channels.num_aps());
  for (int l = 0; l < channels.num_aps(); ++l) {
    if (n[l] == 0) {
      out.blocks[l].resize(channels.rx_antennas(), 0);
      continue;
    }
    const auto lv = linalg::leading_left_vectors(channels.ap_channel(l), n[l]);
    out.blocks[l] = quantize_columns(lv.vectors, cb);
  }
  return out;
}

std::vector<std::vector<double>> leading_singular_values(const ChannelRealization& channels,
                                                         int count) {
  if (count < 0) throw std::invalid_argument("leading_singular_values: negative count");
  std::vector<std::vector<double>> out(channels.num_aps(), std::vector<double>(count, 0.0));
  for (int l = 0; l < channels.num_aps(); ++l) {
    const Eigen::MatrixXcd& h = channels.ap_channel(l);
    Eigen::MatrixXcd gram(h.cols(), h.cols());
    gram.setZero();
    gram.selfadjointView<Eigen::Lower>().rankUpdate(h.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("leading_singular_values: eigensolver failed");
    const Eigen::VectorXd& lambda = es.eigenvalues();
    const Eigen::Index p = lambda.size();
    for (int i = 0; i < count && i < p; ++i) out[l][i] = std::sqrt(std::max(0.0, lambda(p - 1 - i)));
  }
  return out;
}

// ---------------------------------------------------------------- baselines

BeamSteeringResult beam_steering(const ChannelRealization& channels, const ActivationVector& n,
                                 int grid_size, double spacing, const PhaseCodebook& cb) {
  check_activation(n, channels);
  if (grid_size < 2) throw std::invalid_argument("beam_steering: grid needs at least 2 points");
  const int nr = channels.rx_antennas();
  Eigen::MatrixXcd steering(nr, grid_size);
  std::vector<double> grid(grid_size);
  for (int g = 0; g < grid_size; ++g) {
    grid[g] = -kPi / 2.0 + g * kPi / (grid_size - 1);
    steering.col(g) = array_response(grid[g], nr, spacing);
  }

  BeamSteeringResult out;
  out.combiner.blocks.resize(channels.num_aps());
  out.angles.resize(channels.num_aps());
  for (int l = 0; l < channels.num_aps(); ++l) {
    const int nl = n[l];
    out.combiner.blocks[l].resize(nr, nl);
    if (nl == 0) continue;
    const auto lv = linalg::leading_left_vectors(channels.ap_channel(l), nl);
    const Eigen::MatrixXcd corr = steering.adjoint() * lv.vectors;  // G x nl
    for (int c = 0; c < nl; ++c) {
      int best = 0;
      double best_abs = std::abs(corr(0, c));
      for (int g = 1; g < grid_size; ++g) {
        const double v = std::abs(corr(g, c));
        if (v > best_abs) {
          best_abs = v;
          best = g;
        }
      }
      out.angles[l].push_back(grid[best]);
      out.combiner.blocks[l].col(c) = quantize_to_codebook(steering.col(best), cb);
    }
  }
  return out;
}

Eigen::MatrixXd selection_matrix(const std::vector<int>& rows, int rx_antennas) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(rx_antennas, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t c = 0; c < rows.size(); ++c) {
    if (rows[c] < 0 || rows[c] >= rx_antennas)
      throw std::invalid_argument("selection_matrix: row index out of range");
    s(rows[c], static_cast<Eigen::Index>(c)) = 1.0;
  }
  return s;
}

AntennaSelection antenna_selection(const ChannelRealization& channels, int selected,
                                   double gamma) {
  const int nr = channels.rx_antennas();
  if (selected < 0 || selected > nr)
    throw std::invalid_argument("antenna_selection: selected count out of range");
  const Eigen::Index p = channels.streams();
  AntennaSelection out;
  out.rows.resize(channels.num_aps());
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(p, p);
  for (int l = 0; l < channels.num_aps(); ++l) {
    const Eigen::MatrixXcd& h = channels.ap_channel(l);
    const Eigen::VectorXd norms = h.rowwise().norm();
    std::vector<int> order(nr);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return norms(a) > norms(b); });
    order.resize(selected);
    std::sort(order.begin(), order.end());
    Eigen::MatrixXcd hs(selected, p);
    for (int i = 0; i < selected; ++i) hs.row(i) = h.row(order[i]);
    q.noalias() += gamma * (hs.adjoint() * hs);
    out.rows[l] = std::move(order);
  }
  out.rate = linalg::log2det_hpd(q);
  return out;
}

double achievable_rate(const AnalogCombiner& combiner, const ChannelRealization& channels,
                       double gamma) {
  if (combiner.num_aps() != channels.num_aps())
    throw std::invalid_argument("achievable_rate: combiner does not match AP count");
  const Eigen::Index p = channels.streams();
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(p, p);
  for (int l = 0; l < channels.num_aps(); ++l) {
    const Eigen::MatrixXcd& f = combiner.blocks[l];
    if (f.cols() == 0) continue;
    if (f.rows() != channels.rx_antennas())
      throw std::invalid_argument("achievable_rate: combiner block has wrong row count");
    const Eigen::MatrixXcd b = f.adjoint() * channels.ap_channel(l);
    q.noalias() += gamma * (b.adjoint() * b);
  }
  return linalg::log2det_hpd(q);
}

double fully_digital_rate(const ChannelRealization& channels, double gamma) {
  const Eigen::Index p = channels.streams();
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(p, p);
  for (int l = 0; l < channels.num_aps(); ++l) {
    const Eigen::MatrixXcd& h = channels.ap_channel(l);
    q.noalias() += gamma * (h.adjoint() * h);
  }
  return linalg::log2det_hpd(q);
}

}  // namespace cfmimo
