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

namespace cfmimo::linalg {

/// Rotates v so that its largest-magnitude entry is real and positive. The
/// first entry wins among equal magnitudes. Zero vectors are left untouched.
void normalize_phase(Eigen::Ref<Eigen::VectorXcd> v);

/// Leading left singular vectors of a tall matrix A, ordered by decreasing
/// singular value.
struct LeadingVectors {
  Eigen::MatrixXcd vectors;  // rows(A) x count, orthonormal columns
  Eigen::VectorXd values;    // squared singular values, descending; 0 for completions
};

/// Computes the `count` leading eigenvectors of A A^H through the
/// eigendecomposition of the small Gram matrix A^H A.
///
/// Each returned vector is A v / sigma for an eigenpair (sigma^2, v) of the
/// Gram matrix. When fewer than `count` eigenvalues are numerically nonzero,
/// the remaining columns span part of the null space of A A^H: unit vectors
/// e_0, e_1, ... are orthogonalized against range(A) and the columns already
/// chosen, in index order. Every column is phase-normalized.
LeadingVectors leading_left_vectors(const Eigen::MatrixXcd& a, int count);

/// Same contract as leading_left_vectors() for A = basis * S, where `basis`
/// (m x r) has orthonormal columns and `gram` = S S^H (r x r, lower triangle
/// read). The eigenproblem is solved in the r-dimensional coordinates and
/// mapped back, so its cost does not depend on m or on the column count of S.
LeadingVectors leading_vectors_in_basis(const Eigen::MatrixXcd& basis,
                                        const Eigen::MatrixXcd& gram, int count);

/// Orthonormal basis U (m x r) of range(A) and coordinates R = U^H A, so that
/// A = U R up to singular values below 1e-12 of the largest.
struct RangeFactor {
  Eigen::MatrixXcd basis;
  Eigen::MatrixXcd coords;
};

RangeFactor range_factor(const Eigen::MatrixXcd& a);

/// log2 det(M) for Hermitian positive definite M, via Cholesky.
/// Throws std::domain_error when the factorization fails.
double log2det_hpd(const Eigen::MatrixXcd& m);

}  // namespace cfmimo::linalg
