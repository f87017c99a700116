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

#include "cfmimo/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfmimo::linalg {

namespace {

// Eigenvalues of the Gram matrix below this fraction of the largest are
// treated as zero.
constexpr double kRelativeNullTolerance = 1e-13;

}  // namespace

void normalize_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  Eigen::Index best = -1;
  double best_abs = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v(i));
    if (m > best_abs) {
      best_abs = m;
      best = i;
    }
  }
  if (best < 0) return;
  const std::complex<double> rot = std::conj(v(best)) / best_abs;
  v *= rot;
  v(best) = best_abs;  // exactly real and positive
}

namespace {

// Fills columns [from, count) of out.vectors with unit vectors e_0, e_1, ...
// orthogonalized against `range` (orthonormal columns) and each other.
void complete_null_space(const Eigen::MatrixXcd& range, Eigen::Index from, LeadingVectors& out) {
  const Eigen::Index m = out.vectors.rows();
  const Eigen::Index count = out.vectors.cols();
  const Eigen::Index rank = range.cols();
  Eigen::MatrixXcd basis(m, rank + count - from);
  basis.leftCols(rank) = range;
  Eigen::Index filled = rank;
  Eigen::Index col = from;
  for (Eigen::Index e = 0; e < m && col < count; ++e) {
    Eigen::VectorXcd cand = Eigen::VectorXcd::Unit(m, e);
    // Two Gram-Schmidt passes keep the completion orthogonal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < filled; ++j) {
        cand -= basis.col(j) * basis.col(j).dot(cand);
      }
    }
    const double norm = cand.norm();
    if (norm < 0.5) continue;
    cand /= norm;
    basis.col(filled++) = cand;
    out.vectors.col(col++) = cand;
  }
}

Eigen::Index numerical_rank(const Eigen::VectorXd& ascending) {
  const Eigen::Index p = ascending.size();
  const double top = p > 0 ? ascending(p - 1) : 0.0;
  const double tol = top * kRelativeNullTolerance;
  Eigen::Index rank = 0;
  for (Eigen::Index i = p - 1; i >= 0 && top > 0.0 && ascending(i) > tol; --i) ++rank;
  return rank;
}

}  // namespace

LeadingVectors leading_left_vectors(const Eigen::MatrixXcd& a, int count) {
  const Eigen::Index m = a.rows();
  const Eigen::Index p = a.cols();
  if (count < 0 || count > m)
    throw std::invalid_argument("leading_left_vectors: count out of range");

  LeadingVectors out;
  out.vectors.resize(m, count);
  out.values = Eigen::VectorXd::Zero(count);
  if (count == 0) return out;

  Eigen::Index rank = 0;
  Eigen::MatrixXcd range(m, 0);
  if (p > 0) {
    Eigen::MatrixXcd gram(p, p);
    gram.setZero();
    gram.selfadjointView<Eigen::Lower>().rankUpdate(a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("leading_left_vectors: eigensolver failed");

    // Eigen returns ascending eigenvalues.
    const Eigen::VectorXd& lambda = es.eigenvalues();
    rank = numerical_rank(lambda);
    // Only the columns actually returned, unless the completion needs the whole range.
    const Eigen::Index needed = rank < count ? rank : count;
    range.resize(m, needed);
    for (Eigen::Index r = 0; r < needed; ++r) {
      const Eigen::Index idx = p - 1 - r;
      Eigen::VectorXcd u = a * es.eigenvectors().col(idx);
      u /= std::sqrt(lambda(idx));
      u.normalize();
      range.col(r) = u;
      out.values(r) = lambda(idx);
    }
  }
  const Eigen::Index from_range = std::min<Eigen::Index>(rank, count);
  out.vectors.leftCols(from_range) = range.leftCols(from_range);
  if (from_range < count) complete_null_space(range, from_range, out);
  for (Eigen::Index c = 0; c < count; ++c) normalize_phase(out.vectors.col(c));
  return out;
}

LeadingVectors leading_vectors_in_basis(const Eigen::MatrixXcd& basis,
                                        const Eigen::MatrixXcd& gram, int count) {
  const Eigen::Index m = basis.rows();
  const Eigen::Index r = basis.cols();
  if (count < 0 || count > m)
    throw std::invalid_argument("leading_vectors_in_basis: count out of range");
  if (gram.rows() != r || gram.cols() != r)
    throw std::invalid_argument("leading_vectors_in_basis: gram does not match basis");

  LeadingVectors out;
  out.vectors.resize(m, count);
  out.values = Eigen::VectorXd::Zero(count);
  if (count == 0) return out;

  Eigen::Index rank = 0;
  Eigen::MatrixXcd range(m, 0);
  if (r > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("leading_vectors_in_basis: eigensolver failed");
    const Eigen::VectorXd& lambda = es.eigenvalues();
    rank = numerical_rank(lambda);
    const Eigen::Index needed = rank < count ? rank : count;
    range.resize(m, needed);
    for (Eigen::Index i = 0; i < needed; ++i) {
      const Eigen::Index idx = r - 1 - i;
      Eigen::VectorXcd u = basis * es.eigenvectors().col(idx);
      u.normalize();
      range.col(i) = u;
      out.values(i) = lambda(idx);
    }
  }
  const Eigen::Index from_range = std::min<Eigen::Index>(rank, count);
  out.vectors.leftCols(from_range) = range.leftCols(from_range);
  if (from_range < count) complete_null_space(range, from_range, out);
  for (Eigen::Index c = 0; c < count; ++c) normalize_phase(out.vectors.col(c));
  return out;
}

RangeFactor range_factor(const Eigen::MatrixXcd& a) {
  RangeFactor f;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a.rows(), a.cols());
  qr.setThreshold(1e-12);
  qr.compute(a);
  const Eigen::Index r = a.size() == 0 ? 0 : qr.rank();
  f.basis = qr.householderQ() * Eigen::MatrixXcd::Identity(a.rows(), r);
  f.coords = f.basis.adjoint() * a;
  return f;
}

double log2det_hpd(const Eigen::MatrixXcd& m) {
  Eigen::LLT<Eigen::MatrixXcd> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("log2det_hpd: matrix is not positive definite");
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < m.rows(); ++i) acc += std::log(l(i, i).real());
  return 2.0 * acc / std::log(2.0);
}

}  // namespace cfmimo::linalg
