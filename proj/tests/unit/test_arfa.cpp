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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "cfmimo/arfa.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cfmimo;

namespace {

// Neighbors straight from the definition: every member of S one +1/-1 move
// away whose decremented AP is below the mean and incremented AP above it.
std::set<ActivationVector> neighbors_by_definition(const ActivationVector& n,
                                                   const std::vector<double>& r, double rbar,
                                                   const std::set<ActivationVector>& tabu, int cap) {
  std::set<ActivationVector> out;
  for (const ActivationVector& m : oracle::brute_force_feasible(n.size(), cap, n.total())) {
    int down = -1, up = -1, changed = 0;
    for (int l = 0; l < n.size(); ++l) {
      if (m[l] == n[l]) continue;
      ++changed;
      if (m[l] == n[l] - 1) down = l;
      if (m[l] == n[l] + 1) up = l;
    }
    if (changed != 2 || down < 0 || up < 0) continue;
    if (r[down] < rbar && r[up] > rbar && !tabu.count(m)) out.insert(m);
  }
  return out;
}

struct Tiny {
  ChannelRealization ch;
  ChainBudget budget;
  double gamma;
  PhaseCodebook cb;
};

Tiny tiny_instance(std::mt19937_64& rng) {
  // Unequal AP strengths make the activation choice matter.
  ChannelRealization g = oracle::gaussian_channels(2, 4, 8, 2, rng);
  ChannelRealization ch(2, 4, 8, 2);
  std::uniform_real_distribution<double> scale(0.05, 1.5);
  for (int l = 0; l < 4; ++l) {
    const double s = scale(rng);
    for (int k = 0; k < 2; ++k) ch.set_link(k, l, g.link_state(k, l), g.paths(k, l), s * g.link(k, l));
  }
  return Tiny{ch, ChainBudget{2, 1}, 30.0, PhaseCodebook(3, 8)};
}

}  // namespace

TEST_CASE("feasible set size and enumeration order") {
  CHECK(count_feasible(3, 2, 3) == 7);
  CHECK(count_feasible(2, 1, 0) == 1);
  CHECK(count_feasible(2, 1, 3) == 0);
  CHECK(count_feasible(40, 8, 80) > 1000000);
  for (int L = 1; L <= 5; ++L)
    for (int cap = 0; cap <= 3; ++cap)
      for (int total = 0; total <= L * cap; ++total) {
        const auto ref = oracle::brute_force_feasible(L, cap, total);
        std::vector<ActivationVector> got;
        enumerate_feasible(L, cap, total, [&](const ActivationVector& n) { got.push_back(n); });
        CHECK(got == ref);
        CHECK(count_feasible(L, cap, total) == static_cast<std::int64_t>(ref.size()));
      }
}

TEST_CASE("neighbor set of the worked example") {
  const ActivationVector n{1, 1, 1};
  const std::vector<double> r{0.1, 0.5, 0.9};
  const auto got = neighbor_set(n, r, 0.5, {}, 2);
  const auto ref = neighbors_by_definition(n, r, 0.5, {}, 2);
  CHECK(std::set<ActivationVector>(got.begin(), got.end()) == ref);
  REQUIRE(got.size() == 1);
  CHECK(got[0] == ActivationVector{0, 1, 2});
}

TEST_CASE("neighbor set edge cases") {
  const ActivationVector n{1, 1, 1};
  CHECK(neighbor_set(n, {0.4, 0.4, 0.4}, 0.4, {}, 2).empty());
  CHECK(neighbor_set(n, {0.1, 0.5, 0.9}, 0.5, {ActivationVector{0, 1, 2}}, 2).empty());
  // A saturated AP cannot receive and an empty AP cannot give.
  CHECK(neighbor_set(ActivationVector{0, 2, 1}, {0.1, 0.9, 0.2}, 0.4, {}, 2).empty());
}

TEST_CASE("neighbor set agrees with the definition on random inputs") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const int L = 2 + t % 5, cap = 1 + t % 3;
    const ActivationVector n = oracle::random_feasible(L, cap, (L * cap + 1) / 2, rng);
    std::vector<double> r(L);
    double mean = 0.0;
    for (double& x : r) {
      x = std::round(u(rng) * 4) / 4;  // coarse values produce ties with the mean
      mean += x;
    }
    mean /= L;
    std::set<ActivationVector> tabu;
    for (const auto& m : neighbors_by_definition(n, r, mean, {}, cap))
      if (u(rng) < 0.3) tabu.insert(m);
    const auto got = neighbor_set(n, r, mean, tabu, cap);
    CHECK(std::is_sorted(got.begin(), got.end()));
    CHECK(std::set<ActivationVector>(got.begin(), got.end()) ==
          neighbors_by_definition(n, r, mean, tabu, cap));
  }
}

TEST_CASE("singular value allocation examples") {
  CHECK(sv_allocation({{5, 3}, {4, 1}}, 2) == ActivationVector{1, 1});
  CHECK(sv_allocation({{4, 4}, {4, 1}}, 2) == ActivationVector{2, 0});
  CHECK(sv_allocation({{4, 4}, {4, 1}}, 3) == ActivationVector{2, 1});
  CHECK(sv_allocation({{1, 0}, {0, 0}}, 0) == ActivationVector{0, 0});
}

TEST_CASE("singular value allocation keeps the largest values") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int t = 0; t < 100; ++t) {
    const int L = 2 + t % 6, N = 1 + t % 4, nbar = t % (N + 1);
    std::vector<std::vector<double>> sv(L, std::vector<double>(N));
    std::vector<double> pool;
    for (auto& row : sv) {
      for (double& x : row) x = u(rng);
      std::sort(row.rbegin(), row.rend());
      pool.insert(pool.end(), row.begin(), row.end());
    }
    const ActivationVector n = sv_allocation(sv, L * nbar);
    CHECK(n.feasible(N, L * nbar));
    std::sort(pool.rbegin(), pool.rend());
    double kept = 0.0, best = 0.0;
    for (int l = 0; l < L; ++l)
      for (int i = 0; i < n[l]; ++i) kept += sv[l][i];
    for (int i = 0; i < L * nbar; ++i) best += pool[i];
    CHECK(kept == doctest::Approx(best).epsilon(1e-14));
  }
}

TEST_CASE("path-loss allocation examples") {
  CHECK(pl_allocation({1.0, 1.0, 1.0, 1.0}, ChainBudget{8, 2}) == ActivationVector{2, 2, 2, 2});
  CHECK(pl_allocation({0.5, 0.3, 0.2}, ChainBudget{2, 1}) == ActivationVector{2, 1, 0});
  CHECK(pl_allocation({0.0, 0.0, 0.0}, ChainBudget{2, 1}).feasible(2, 3));
  // Capped AP: the surplus moves to the next-largest weight.
  CHECK(pl_allocation({10.0, 1.0, 1.0}, ChainBudget{2, 1}) == ActivationVector{2, 1, 0});
}

TEST_CASE("path-loss allocation always lands in the feasible set") {
  std::mt19937_64 rng(23);
  std::exponential_distribution<double> e(1.0);
  std::bernoulli_distribution zero(0.2);
  for (int t = 0; t < 500; ++t) {
    const int L = 1 + t % 12, N = 1 + t % 8, nbar = t % (N + 1);
    std::vector<double> alpha(L);
    for (double& a : alpha) a = zero(rng) ? 0.0 : e(rng);
    CHECK(pl_allocation(alpha, ChainBudget{N, nbar}).feasible(N, L * nbar));
  }
}

TEST_CASE("path-loss weights skip outage links") {
  ChannelRealization ch(2, 3, 4, 1);
  LinkState a, b, out;
  a.kind = LinkKind::Los;
  a.beta_linear = 100.0;
  b.kind = LinkKind::Nlos;
  b.beta_linear = 300.0;
  const Eigen::MatrixXcd h = Eigen::MatrixXcd::Ones(4, 1);
  ch.set_link(0, 0, a, {}, h);
  ch.set_link(1, 0, b, {}, h);
  ch.set_link(0, 1, a, {}, h);
  ch.set_link(1, 1, out, {}, Eigen::MatrixXcd::Zero(4, 1));
  ch.set_link(0, 2, out, {}, Eigen::MatrixXcd::Zero(4, 1));
  ch.set_link(1, 2, out, {}, Eigen::MatrixXcd::Zero(4, 1));
  const auto w = path_loss_weights(ch);
  CHECK(w[0] == doctest::Approx(1.0 / 400.0));
  CHECK(w[1] == doctest::Approx(1.0 / 100.0));
  CHECK(w[2] == 0.0);
}

TEST_CASE("exhaustive search degenerate cases and guard") {
  std::mt19937_64 rng(24);
  const auto ch = oracle::gaussian_channels(1, 2, 4, 1, rng);
  const PhaseCodebook cb(2, 4);
  const ArfaResult r = exhaustive_arfa(ch, ChainBudget{1, 0}, 10.0, cb);
  CHECK(r.rate == 0.0);
  CHECK(r.n == ActivationVector{0, 0});
  CHECK(r.trace.candidates_examined == 1);
  CHECK_THROWS_AS(exhaustive_arfa(ch, ChainBudget{1, 0}, 10.0, cb, 0), SearchSpaceError);
}

TEST_CASE("exhaustive search finds the true argmax") {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 10; ++t) {
    const Tiny x = tiny_instance(rng);
    const ArfaResult r = exhaustive_arfa(x.ch, x.budget, x.gamma, x.cb);
    double best = -1.0;
    ActivationVector arg;
    for (const auto& n : oracle::brute_force_feasible(4, 2, 4)) {
      const double v = oracle::chbf_reference(x.ch, n, x.gamma, 3).total;
      if (v > best + 1e-9) {
        best = v;
        arg = n;
      }
    }
    CHECK(r.rate == doctest::Approx(best).epsilon(1e-9));
    CHECK(r.trace.candidates_examined == 19);
  }
}

TEST_CASE("tabu search invariants") {
  std::mt19937_64 rng(26);
  int within_one_pct = 0;
  for (int t = 0; t < 20; ++t) {
    const Tiny x = tiny_instance(rng);
    const ArfaResult ts = ts_carfa(x.ch, x.budget, x.gamma, x.cb);
    const double uniform = chbf(x.ch, ActivationVector::uniform(4, 1), x.gamma, x.cb).rates.total_rate;
    const ArfaResult ex = exhaustive_arfa(x.ch, x.budget, x.gamma, x.cb);
    CHECK(ts.n.feasible(2, 4));
    CHECK(ts.rate >= uniform);
    CHECK(ts.rate <= ex.rate + 1e-12);
    CHECK(ts.trace.rate_history.front() == uniform);
    CHECK(ts.trace.rate_history.back() == ts.rate);
    CHECK(std::is_sorted(ts.trace.rate_history.begin(), ts.trace.rate_history.end()));
    CHECK(ts.trace.candidates_examined >= 1);
    CHECK(ts.trace.candidates_examined <= 19);
    CHECK(ts.combiner.active_counts() == ts.n);
    CHECK(achievable_rate(ts.combiner, x.ch, x.gamma) == doctest::Approx(ts.rate).epsilon(1e-9));
    if (ts.rate >= 0.99 * ex.rate) ++within_one_pct;
  }
  MESSAGE("tabu search within 1% of the optimum on " << within_one_pct << "/20 tiny instances");
}

TEST_CASE("tabu search honors the iteration limit") {
  std::mt19937_64 rng(27);
  const Tiny x = tiny_instance(rng);
  TabuOptions opts;
  opts.max_iterations = 1;
  const ArfaResult ts = ts_carfa(x.ch, x.budget, x.gamma, x.cb, opts);
  CHECK(ts.trace.rate_history.size() <= 2);
}

TEST_CASE("fast search invariants") {
  std::mt19937_64 rng(28);
  for (int t = 0; t < 20; ++t) {
    const Tiny x = tiny_instance(rng);
    const ArfaResult fs = fs_carfa(x.ch, x.budget, x.gamma, x.cb);
    const double uniform = chbf(x.ch, ActivationVector::uniform(4, 1), x.gamma, x.cb).rates.total_rate;
    CHECK(fs.n.feasible(2, 4));
    CHECK(fs.rate >= uniform);
    CHECK(std::is_sorted(fs.trace.rate_history.begin(), fs.trace.rate_history.end()));
    // At most L - 1 moves past the starting point.
    CHECK(fs.trace.candidates_examined <= 4);
  }
}

TEST_CASE("fast search with every chain on stays put") {
  std::mt19937_64 rng(29);
  const Tiny x = tiny_instance(rng);
  const ArfaResult fs = fs_carfa(x.ch, ChainBudget{2, 2}, x.gamma, x.cb);
  CHECK(fs.n == ActivationVector::uniform(4, 2));
  CHECK(fs.trace.candidates_examined == 1);
}

TEST_CASE("semi-centralized schemes") {
  std::mt19937_64 rng(30);
  for (int t = 0; t < 10; ++t) {
    const Tiny x = tiny_instance(rng);
    const ArfaResult sv = sv_scarfa(x.ch, x.budget, x.gamma, x.cb);
    const ArfaResult pl = pl_scarfa(x.ch, x.budget, x.gamma, x.cb);
    for (const ArfaResult* r : {&sv, &pl}) {
      CHECK(r->n.feasible(2, 4));
      CHECK(r->combiner.active_counts() == r->n);
      CHECK(r->trace.candidates_examined == 0);
      CHECK(r->rate == doctest::Approx(achievable_rate(r->combiner, x.ch, x.gamma)).epsilon(1e-12));
    }
    // Each block is a column prefix of the all-chains per-AP combiner, so
    // dropping columns can only lower the rate.
    const AnalogCombiner full = schbf(x.ch, ActivationVector::uniform(4, 2), x.cb);
    for (const ArfaResult* r : {&sv, &pl}) {
      for (int l = 0; l < 4; ++l)
        CHECK(r->combiner.blocks[l] == full.blocks[l].leftCols(r->n[l]));
      CHECK(r->rate <= achievable_rate(full, x.ch, x.gamma));
    }
  }
}

TEST_CASE("AP selection keeps the strongest APs at full chains") {
  std::mt19937_64 rng(31);
  const Tiny x = tiny_instance(rng);
  const ActivationVector n = aps_activation(x.ch, ChainBudget{2, 1});
  CHECK(n.total() == 4);
  CHECK(n.active_aps() == 2);
  std::vector<std::pair<double, int>> power;
  for (int l = 0; l < 4; ++l) power.emplace_back(-x.ch.ap_channel(l).squaredNorm(), l);
  std::sort(power.begin(), power.end());
  CHECK(n[power[0].second] == 2);
  CHECK(n[power[1].second] == 2);
  // floor(L nbar / N) APs: 3 * 1 / 2 = 1.
  const auto ch3 = oracle::gaussian_channels(1, 3, 4, 1, rng);
  CHECK(aps_activation(ch3, ChainBudget{2, 1}).active_aps() == 1);
}
