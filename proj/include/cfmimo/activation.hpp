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

#include <compare>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <vector>

namespace cfmimo {

/// Number of turned-on RF chains per AP, n = (n_1, ..., n_L).
class ActivationVector {
 public:
  ActivationVector() = default;
  explicit ActivationVector(std::vector<int> counts) : counts_(std::move(counts)) {}
  ActivationVector(std::initializer_list<int> counts) : counts_(counts) {}

  static ActivationVector uniform(int num_aps, int per_ap) {
    return ActivationVector(std::vector<int>(num_aps, per_ap));
  }

  int size() const { return static_cast<int>(counts_.size()); }
  int operator[](int l) const { return counts_[l]; }
  int& operator[](int l) { return counts_[l]; }
  const std::vector<int>& counts() const { return counts_; }

  int total() const { return std::accumulate(counts_.begin(), counts_.end(), 0); }
  /// Number of APs with at least one active chain.
  int active_aps() const {
    int n = 0;
    for (int c : counts_) n += c > 0 ? 1 : 0;
    return n;
  }

  /// Membership in S = {n : 0 <= n_l <= N, sum n_l = total}.
  bool feasible(int max_per_ap, int required_total) const {
    for (int c : counts_)
      if (c < 0 || c > max_per_ap) return false;
    return total() == required_total;
  }

  auto operator<=>(const ActivationVector&) const = default;
  bool operator==(const ActivationVector&) const = default;

 private:
  std::vector<int> counts_;
};

inline std::ostream& operator<<(std::ostream& os, const ActivationVector& n) {
  os << '(';
  for (int l = 0; l < n.size(); ++l) os << (l ? "," : "") << n[l];
  return os << ')';
}

}  // namespace cfmimo
