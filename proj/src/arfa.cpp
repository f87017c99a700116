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

#include "cfmimo/arfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

namespace cfmimo {

namespace {

void check_budget(const ChannelRealization& channels, const ChainBudget& b) {
  if (b.max_per_ap < 1 || b.max_per_ap > channels.rx_antennas())
    throw std::invalid_argument("chain budget: N must lie in [1, Nr]");
  if (b.avg_per_ap < 0 || b.avg_per_ap > b.max_per_ap)
    throw std::invalid_argument("chain budget: nbar must lie in [0, N]");
}

std::int64_t saturating_add(std::int64_t a, std::int64_t b) {
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  return a > kMax - b ? kMax : a + b;
}

void enumerate_rec(std::vector<int>& n, int pos, int remaining, int max_per_ap,
                   const std::function<void(const ActivationVector&)>& visit) {
  const int num_aps = static_cast<int>(n.size());
  if (pos == num_aps) {
    if (remaining == 0) visit(ActivationVector(n));
    return;
  }
  const int slots_after = (num_aps - pos - 1) * max_per_ap;
  const int lo = std::max(0, remaining - slots_after);
  const int hi = std::min(max_per_ap, remaining);
  for (int v = lo; v <= hi; ++v) {
    n[pos] = v;
    enumerate_rec(n, pos + 1, remaining - v, max_per_ap, visit);
  }
  n[pos] = 0;
}

ArfaResult centralized_result(const ChannelRealization& channels, const ActivationVector& n,
                              double gamma, const PhaseCodebook& cb, SearchTrace trace) {
  ChbfResult r = chbf(channels, n, gamma, cb);
  ArfaResult out;
  out.n = n;
  out.combiner = std::move(r.combiner);
  out.rate = r.rates.total_rate;
  out.sub_rates = std::move(r.rates.sub_rates);
  out.trace = std::move(trace);
  return out;
}

ArfaResult semi_centralized_result(const ChannelRealization& channels,
                                   const ActivationVector& n, double gamma,
                                   const PhaseCodebook& cb) {
  ArfaResult out;
  out.n = n;
  out.combiner = schbf(channels, n, cb);
  out.rate = achievable_rate(out.combiner, channels, gamma);
  return out;
}

}  // namespace

std::int64_t count_feasible(int num_aps, int max_per_ap, int total) {
  if (num_aps < 0 || max_per_ap < 0 || total < 0) return 0;
  std::vector<std::int64_t> ways(total + 1, 0);
  ways[0] = 1;
  for (int l = 0; l < num_aps; ++l) {
    std::vector<std::int64_t> next(total + 1, 0);
    for (int s = 0; s <= total; ++s) {
      if (ways[s] == 0) continue;
      for (int v = 0; v <= max_per_ap && s + v <= total; ++v)
        next[s + v] = saturating_add(next[s + v], ways[s]);
    }
    ways = std::move(next);
  }
  return ways[total];
}

void enumerate_feasible(int num_aps, int max_per_ap, int total,
                        const std::function<void(const ActivationVector&)>& visit) {
  if (num_aps < 0 || max_per_ap < 0 || total < 0) return;
  if (total > static_cast<std::int64_t>(num_aps) * max_per_ap) return;
  std::vector<int> n(num_aps, 0);
  enumerate_rec(n, 0, total, max_per_ap, visit);
}

std::vector<ActivationVector> neighbor_set(const ActivationVector& n,
                                           const std::vector<double>& sub_rates, double rbar,
                                           const std::set<ActivationVector>& tabu,
                                           int max_per_ap) {
  if (static_cast<int>(sub_rates.size()) != n.size())
    throw std::invalid_argument("neighbor_set: sub-rate count does not match n");
  std::vector<int> down, up;
  for (int l = 0; l < n.size(); ++l) {
    if (sub_rates[l] < rbar && n[l] > 0) down.push_back(l);
    if (sub_rates[l] > rbar && n[l] < max_per_ap) up.push_back(l);
  }
  std::vector<ActivationVector> out;
  out.reserve(down.size() * up.size());
  for (int i : down) {
    for (int j : up) {
      ActivationVector m = n;
      --m[i];
      ++m[j];
      if (tabu.count(m) == 0) out.push_back(std::move(m));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ArfaResult ts_carfa(const ChannelRealization& channels, const ChainBudget& budget,
                    double gamma, const PhaseCodebook& cb, const TabuOptions& opts) {
  check_budget(channels, budget);
  const int num_aps = channels.num_aps();
  const int max_iter = opts.max_iterations < 0 ? 8 * num_aps : opts.max_iterations;
  const int max_stall = opts.max_stall < 0 ? max_iter / 2 : opts.max_stall;
  const ChbfEngine engine(channels, gamma, cb, budget.max_per_ap);

  SearchTrace trace;
  ActivationVector n = ActivationVector::uniform(num_aps, budget.avg_per_ap);
  ChbfEngine::Trace current;
  const RateBreakdown first = engine.evaluate(n, nullptr, &current);
  trace.candidates_examined = 1;

  std::map<ActivationVector, double> seen{{n, first.total_rate}};
  ActivationVector best = n;
  double best_rate = first.total_rate;
  trace.rate_history.push_back(best_rate);

  double rbar = num_aps > 0 ? first.total_rate / num_aps : 0.0;
  int stall = 0;
  std::set<ActivationVector> tabu;
  ChbfEngine::Trace scratch, chosen_trace;

  for (int iter = 0; iter < max_iter; ++iter) {
    const auto neighbors = neighbor_set(n, current.sub_rates, rbar, tabu, budget.max_per_ap);
    if (neighbors.empty()) break;

    const ActivationVector* chosen = nullptr;
    double chosen_rate = -std::numeric_limits<double>::infinity();
    bool have_trace = false;
    for (const auto& m : neighbors) {
      double rate;
      bool fresh = false;
      if (auto it = seen.find(m); it != seen.end()) {
        rate = it->second;
      } else {
        rate = engine.evaluate(m, &current, &scratch).total_rate;
        seen.emplace(m, rate);
        ++trace.candidates_examined;
        fresh = true;
      }
      // Neighbors arrive in lexicographic order, so strict > keeps the smallest on ties.
      if (rate > chosen_rate) {
        chosen = &m;
        chosen_rate = rate;
        have_trace = fresh;
        if (fresh) std::swap(chosen_trace, scratch);
      }
    }
    // Only the state of a vector scored in an earlier iteration needs rebuilding.
    if (!have_trace) engine.evaluate(*chosen, &current, &chosen_trace);

    if (chosen_rate > best_rate) {
      best = *chosen;
      best_rate = chosen_rate;
      stall = 0;
    } else if (++stall > max_stall) {
      trace.rate_history.push_back(best_rate);
      break;
    }
    tabu.insert(n);
    n = *chosen;
    std::swap(current, chosen_trace);
    rbar = chosen_rate / num_aps;
    trace.rate_history.push_back(best_rate);
  }
  return centralized_result(channels, best, gamma, cb, std::move(trace));
}

ArfaResult fs_carfa(const ChannelRealization& channels, const ChainBudget& budget,
                    double gamma, const PhaseCodebook& cb) {
  check_budget(channels, budget);
  const int num_aps = channels.num_aps();
  const int cap = budget.max_per_ap;
  const ChbfEngine engine(channels, gamma, cb, cap);

  SearchTrace trace;
  ActivationVector n = ActivationVector::uniform(num_aps, budget.avg_per_ap);
  ChbfEngine::Trace current, next;
  const RateBreakdown first = engine.evaluate(n, nullptr, &current);
  trace.candidates_examined = 1;
  ActivationVector best = n;
  double best_rate = first.total_rate;
  trace.rate_history.push_back(best_rate);

  std::vector<int> order(num_aps);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return first.sub_rates[a] > first.sub_rates[b];
  });

  int i = 0;
  int k = num_aps - 1;
  while (i < k) {
    while (i < k && n[order[i]] == cap) ++i;
    while (k > i && n[order[k]] == 0) --k;
    if (i >= k) break;
    ++n[order[i]];
    --n[order[k]];
    const double rate = engine.evaluate(n, &current, &next).total_rate;
    std::swap(current, next);
    ++trace.candidates_examined;
    if (rate > best_rate) {
      best = n;
      best_rate = rate;
    }
    trace.rate_history.push_back(best_rate);
  }
  return centralized_result(channels, best, gamma, cb, std::move(trace));
}

ActivationVector sv_allocation(const std::vector<std::vector<double>>& singular_values,
                               int total) {
  struct Entry {
    double value;
    int ap;
    int pos;
  };
  std::vector<Entry> pool;
  for (std::size_t l = 0; l < singular_values.size(); ++l) {
    for (std::size_t i = 0; i < singular_values[l].size(); ++i)
      pool.push_back({singular_values[l][i], static_cast<int>(l), static_cast<int>(i)});
  }
  if (total < 0 || total > static_cast<int>(pool.size()))
    throw std::invalid_argument("sv_allocation: total exceeds the singular value pool");
  std::sort(pool.begin(), pool.end(), [](const Entry& a, const Entry& b) {
    if (a.value != b.value) return a.value > b.value;
    return std::tie(a.ap, a.pos) < std::tie(b.ap, b.pos);
  });
  std::vector<int> n(singular_values.size(), 0);
  for (int t = 0; t < total; ++t) ++n[pool[t].ap];
  return ActivationVector(std::move(n));
}

ArfaResult sv_scarfa(const ChannelRealization& channels, const ChainBudget& budget,
                     double gamma, const PhaseCodebook& cb) {
  check_budget(channels, budget);
  const auto sv = leading_singular_values(channels, budget.max_per_ap);
  const ActivationVector n = sv_allocation(sv, budget.total(channels.num_aps()));
  return semi_centralized_result(channels, n, gamma, cb);
}

ActivationVector pl_allocation(const std::vector<double>& alpha, const ChainBudget& budget) {
  const int num_aps = static_cast<int>(alpha.size());
  const int cap = budget.max_per_ap;
  const int total = budget.total(num_aps);
  if (cap < 1 || budget.avg_per_ap < 0 || budget.avg_per_ap > cap)
    throw std::invalid_argument("pl_allocation: invalid chain budget");
  for (double a : alpha) {
    if (!(a >= 0.0) || !std::isfinite(a))
      throw std::invalid_argument("pl_allocation: weights must be finite and non-negative");
  }
  const double sum_alpha = std::accumulate(alpha.begin(), alpha.end(), 0.0);

  std::vector<int> n(num_aps, 0);
  if (sum_alpha > 0.0) {
    for (int l = 0; l < num_aps; ++l) {
      const double share = std::round(total * alpha[l] / sum_alpha);  // halves away from zero
      n[l] = std::min(cap, static_cast<int>(share));
    }
  }

  std::vector<int> order(num_aps);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return alpha[a] > alpha[b]; });

  int sum = std::accumulate(n.begin(), n.end(), 0);
  const long guard = 10L * num_aps * cap;
  long passes = 0;
  for (int t = 0; sum != total; t = (t + 1) % num_aps) {
    if (++passes > guard) throw std::logic_error("pl_allocation: repair loop did not converge");
    if (sum < total && n[order[t]] < cap) {
      ++n[order[t]];
      ++sum;
    }
    if (sum > total && n[order[num_aps - 1 - t]] > 0) {
      --n[order[num_aps - 1 - t]];
      --sum;
    }
  }
  return ActivationVector(std::move(n));
}

std::vector<double> path_loss_weights(const ChannelRealization& channels) {
  std::vector<double> alpha(channels.num_aps(), 0.0);
  for (int l = 0; l < channels.num_aps(); ++l) {
    double beta = 0.0;
    for (int k = 0; k < channels.num_ues(); ++k) {
      const LinkState& s = channels.link_state(k, l);
      if (s.connected()) beta += s.beta_linear;
    }
    alpha[l] = beta > 0.0 ? 1.0 / beta : 0.0;
  }
  return alpha;
}

ArfaResult pl_scarfa(const ChannelRealization& channels, const ChainBudget& budget,
                     double gamma, const PhaseCodebook& cb) {
  check_budget(channels, budget);
  const ActivationVector n = pl_allocation(path_loss_weights(channels), budget);
  return semi_centralized_result(channels, n, gamma, cb);
}

ArfaResult exhaustive_arfa(const ChannelRealization& channels, const ChainBudget& budget,
                           double gamma, const PhaseCodebook& cb, std::int64_t guard) {
  check_budget(channels, budget);
  const int num_aps = channels.num_aps();
  const int total = budget.total(num_aps);
  const std::int64_t size = count_feasible(num_aps, budget.max_per_ap, total);
  if (size > guard)
    throw SearchSpaceError("exhaustive_arfa: feasible set has " + std::to_string(size) +
                           " members, above the guard of " + std::to_string(guard));
  const ChbfEngine engine(channels, gamma, cb, budget.max_per_ap);

  SearchTrace trace;
  ActivationVector best;
  double best_rate = -std::numeric_limits<double>::infinity();
  ChbfEngine::Trace previous, next;
  bool have_previous = false;
  enumerate_feasible(num_aps, budget.max_per_ap, total, [&](const ActivationVector& n) {
    const double rate = engine.evaluate(n, have_previous ? &previous : nullptr, &next).total_rate;
    std::swap(previous, next);
    have_previous = true;
    ++trace.candidates_examined;
    if (rate > best_rate) {
      best = n;
      best_rate = rate;
    }
    trace.rate_history.push_back(best_rate);
  });
  return centralized_result(channels, best, gamma, cb, std::move(trace));
}

ActivationVector aps_activation(const ChannelRealization& channels, const ChainBudget& budget) {
  check_budget(channels, budget);
  const int num_aps = channels.num_aps();
  const int selected = budget.total(num_aps) / budget.max_per_ap;
  std::vector<double> power(num_aps);
  for (int l = 0; l < num_aps; ++l) power[l] = channels.ap_channel(l).squaredNorm();
  std::vector<int> order(num_aps);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return power[a] > power[b]; });
  std::vector<int> n(num_aps, 0);
  for (int t = 0; t < selected; ++t) n[order[t]] = budget.max_per_ap;
  return ActivationVector(std::move(n));
}

}  // namespace cfmimo
