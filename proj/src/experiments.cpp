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

#include "cfmimo/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "json.hpp"

#include "cfmimo/arfa.hpp"
#include "cfmimo/channel.hpp"
#include "cfmimo/combining.hpp"

namespace cfmimo {

namespace {

struct SchemeEntry {
  Scheme scheme;
  const char* name;
};

constexpr std::array<SchemeEntry, 11> kSchemes{{
    {Scheme::ChbfFixedN, "chbf-fixed-N"},
    {Scheme::ChbfFixedNbar, "chbf-fixed-nbar"},
    {Scheme::Schbf, "schbf"},
    {Scheme::BeamSteering, "beam-steering"},
    {Scheme::TsCarfa, "ts-carfa"},
    {Scheme::FsCarfa, "fs-carfa"},
    {Scheme::SvScarfa, "sv-scarfa"},
    {Scheme::PlScarfa, "pl-scarfa"},
    {Scheme::Aps, "aps"},
    {Scheme::As, "as"},
    {Scheme::Exhaustive, "exhaustive"},
}};

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v); }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* scheme_name(Scheme s) {
  for (const auto& e : kSchemes)
    if (e.scheme == s) return e.name;
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  for (const auto& e : kSchemes)
    if (name == e.name) return e.scheme;
  throw ConfigError("unknown scheme '" + name + "'");
}

const std::vector<Scheme>& all_schemes() {
  static const std::vector<Scheme> list = [] {
    std::vector<Scheme> v;
    for (const auto& e : kSchemes) v.push_back(e.scheme);
    return v;
  }();
  return list;
}

const char* sweep_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::Rho: return "rho";
    case SweepVariable::NumAps: return "L";
    case SweepVariable::AvgChains: return "nbar";
  }
  return "unknown";
}

SweepVariable parse_sweep_variable(const std::string& name) {
  if (name == "rho") return SweepVariable::Rho;
  if (name == "L") return SweepVariable::NumAps;
  if (name == "nbar") return SweepVariable::AvgChains;
  throw ConfigError("unknown sweep variable '" + name + "' (expected rho, L or nbar)");
}

// ---------------------------------------------------------------- plan

std::vector<double> ExperimentPlan::sweep_values() const {
  if (sweep.values.empty() && sweep.variable == SweepVariable::Rho) return scenario.rho_dbm;
  return sweep.values;
}

ScenarioConfig ExperimentPlan::scenario_at(int index) const {
  const auto values = sweep_values();
  if (index < 0 || index >= static_cast<int>(values.size()))
    throw std::out_of_range("sweep index out of range");
  ScenarioConfig cfg = scenario;
  switch (sweep.variable) {
    case SweepVariable::Rho: cfg.rho_dbm = {values[index]}; break;
    case SweepVariable::NumAps: cfg.num_aps = static_cast<int>(values[index]); break;
    case SweepVariable::AvgChains: cfg.avg_active_chains = static_cast<int>(values[index]); break;
  }
  return cfg;
}

double ExperimentPlan::rho_at(int index) const {
  return scenario_at(index).rho_dbm.front();
}

void ExperimentPlan::validate() const {
  scenario.validate();
  try {
    power.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (schemes.empty()) throw ConfigError("plan: scheme list is empty");
  if (std::find(schemes.begin(), schemes.end(), Scheme::As) != schemes.end() &&
      scenario.as_antennas > scenario.rx_antennas)
    throw ConfigError("plan: as_antennas must not exceed rx_antennas");
  for (std::size_t i = 0; i < schemes.size(); ++i)
    for (std::size_t j = i + 1; j < schemes.size(); ++j)
      if (schemes[i] == schemes[j])
        throw ConfigError(std::string("plan: scheme listed twice: ") + scheme_name(schemes[i]));
  const auto values = sweep_values();
  if (values.empty()) throw ConfigError("plan: sweep has no values");
  if (sweep.variable != SweepVariable::Rho && scenario.rho_dbm.size() != 1)
    throw ConfigError("plan: sweeping L or nbar needs exactly one rho_dbm value");
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("plan: sweep values must be finite");
    if (sweep.variable != SweepVariable::Rho && !is_integral(v))
      throw ConfigError("plan: L and nbar sweep values must be integers");
  }
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    const ScenarioConfig cfg = scenario_at(i);
    cfg.validate();
    if (std::find(schemes.begin(), schemes.end(), Scheme::Exhaustive) != schemes.end()) {
      const auto size = count_feasible(cfg.num_aps, cfg.rf_chains, cfg.total_active());
      if (size > 1000000)
        throw ConfigError("plan: exhaustive search over " + std::to_string(size) +
                          " activation vectors exceeds the 1e6 guard");
    }
  }
}

std::uint64_t trial_seed(std::uint64_t master_seed, int sweep_index, int trial) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(sweep_index)));
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(trial)));
  return h;
}

FronthaulLoad fronthaul_load(Scheme scheme, const ScenarioConfig& cfg) {
  const std::int64_t nr = cfg.rx_antennas;
  const std::int64_t n = cfg.rf_chains;
  const std::int64_t nbar = cfg.avg_active_chains;
  const std::int64_t streams = static_cast<std::int64_t>(cfg.num_ues) * cfg.tx_antennas;
  switch (scheme) {
    case Scheme::ChbfFixedN: return {2 * nr * streams, nr * n};
    case Scheme::ChbfFixedNbar:
    case Scheme::TsCarfa:
    case Scheme::FsCarfa:
    case Scheme::Exhaustive: return {2 * nr * streams, nr * nbar};
    case Scheme::Schbf: return {2 * n * streams, 0};
    case Scheme::SvScarfa: return {2 * nbar * streams + n, 1};
    case Scheme::PlScarfa: return {2 * nbar * streams, 1};
    case Scheme::BeamSteering:
    case Scheme::Aps:
    case Scheme::As: break;
  }
  throw std::invalid_argument(std::string("fronthaul_load: no accounting for scheme ") +
                              scheme_name(scheme));
}

// ---------------------------------------------------------------- trials

std::vector<MetricsRecord> run_trial(const ExperimentPlan& plan, int sweep_index, int trial) {
  const ScenarioConfig cfg = plan.scenario_at(sweep_index);
  const double rho = cfg.rho_dbm.front();
  const double gamma = cfg.gamma(rho);
  const std::uint64_t seed = trial_seed(cfg.master_seed, sweep_index, trial);

  Rng rng(seed);
  const Topology topo = generate_topology(cfg, rng);
  const ChannelRealization channels = draw_channels(cfg, topo, cfg.path_loss, rng);
  const PhaseCodebook cb(cfg.phase_bits, cfg.rx_antennas);
  const ChainBudget budget{cfg.rf_chains, cfg.avg_active_chains};
  const int num_aps = cfg.num_aps;
  const int nr = cfg.rx_antennas;
  const PowerModel& pm = plan.power;

  std::vector<Scheme> order = plan.schemes;
  std::sort(order.begin(), order.end());

  std::vector<MetricsRecord> out;
  out.reserve(order.size());
  for (Scheme s : order) {
    MetricsRecord rec;
    rec.scheme = s;
    rec.sweep_variable = plan.sweep.variable;
    rec.sweep_value = plan.sweep_values()[sweep_index];
    rec.sweep_index = sweep_index;
    rec.trial = trial;
    rec.seed = seed;
    rec.degenerate_links = channels.degenerate_links();

    ActivationVector n;
    switch (s) {
      case Scheme::ChbfFixedN:
      case Scheme::ChbfFixedNbar: {
        const int per_ap = s == Scheme::ChbfFixedN ? cfg.rf_chains : cfg.avg_active_chains;
        n = ActivationVector::uniform(num_aps, per_ap);
        rec.rate = chbf(channels, n, gamma, cb).rates.total_rate;
        rec.power_mw = power_fixed(num_aps, per_ap, nr, pm);
        break;
      }
      case Scheme::Schbf: {
        n = ActivationVector::uniform(num_aps, cfg.rf_chains);
        rec.rate = achievable_rate(schbf(channels, n, cb), channels, gamma);
        rec.power_mw = power_fixed(num_aps, cfg.rf_chains, nr, pm);
        break;
      }
      case Scheme::BeamSteering: {
        n = ActivationVector::uniform(num_aps, cfg.rf_chains);
        const auto bs = beam_steering(channels, n, cfg.beam_grid, cfg.antenna_spacing, cb);
        rec.rate = achievable_rate(bs.combiner, channels, gamma);
        rec.power_mw = power_fixed(num_aps, cfg.rf_chains, nr, pm);
        break;
      }
      case Scheme::TsCarfa:
      case Scheme::FsCarfa:
      case Scheme::SvScarfa:
      case Scheme::PlScarfa:
      case Scheme::Exhaustive: {
        ArfaResult r;
        if (s == Scheme::TsCarfa) r = ts_carfa(channels, budget, gamma, cb);
        else if (s == Scheme::FsCarfa) r = fs_carfa(channels, budget, gamma, cb);
        else if (s == Scheme::SvScarfa) r = sv_scarfa(channels, budget, gamma, cb);
        else if (s == Scheme::PlScarfa) r = pl_scarfa(channels, budget, gamma, cb);
        else r = exhaustive_arfa(channels, budget, gamma, cb);
        n = r.n;
        rec.rate = r.rate;
        rec.power_mw = power_arfa(n, nr, pm);
        rec.candidates_examined = r.trace.candidates_examined;
        break;
      }
      case Scheme::Aps: {
        n = aps_activation(channels, budget);
        rec.rate = chbf(channels, n, gamma, cb).rates.total_rate;
        // Equals power_aps() whenever L nbar / N is an integer.
        rec.power_mw = power_arfa(n, nr, pm);
        break;
      }
      case Scheme::As: {
        rec.rate = antenna_selection(channels, cfg.as_antennas, gamma).rate;
        rec.power_mw = power_as(num_aps, nr, cfg.as_antennas, pm);
        n = ActivationVector::uniform(num_aps, cfg.as_antennas);
        break;
      }
    }
    rec.ee = energy_efficiency(rec.rate, rec.power_mw);
    rec.active_ap_count = n.active_aps();
    rec.active_chains = n.total();
    if (s != Scheme::BeamSteering && s != Scheme::Aps && s != Scheme::As) {
      const FronthaulLoad fh = fronthaul_load(s, cfg);
      rec.fronthaul_up = fh.uplink;
      rec.fronthaul_down = fh.downlink;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<MetricsRecord> run_plan(const ExperimentPlan& plan, int workers) {
  plan.validate();
  const int points = static_cast<int>(plan.sweep_values().size());
  const int trials = plan.scenario.trials;
  const int jobs = points * trials;
  std::vector<std::vector<MetricsRecord>> slots(jobs);

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int j = next++; j < jobs; j = next++) {
      try {
        slots[j] = run_trial(plan, j / trials, j % trials);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs;
      }
    }
  };
  const int threads = std::max(1, std::min(workers, jobs));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<MetricsRecord> records;
  records.reserve(static_cast<std::size_t>(jobs) * plan.schemes.size());
  for (auto& s : slots)
    for (auto& r : s) records.push_back(std::move(r));
  return records;
}

// ---------------------------------------------------------------- summary

std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");

  struct Acc {
    SweepVariable variable;
    double value;
    std::vector<double> rate, power, ee, cand;
  };
  std::map<std::pair<int, Scheme>, Acc> groups;
  for (const auto& r : records) {
    auto [it, inserted] = groups.try_emplace({r.sweep_index, r.scheme},
                                             Acc{r.sweep_variable, r.sweep_value, {}, {}, {}, {}});
    Acc& a = it->second;
    a.rate.push_back(r.rate);
    a.power.push_back(r.power_mw);
    a.ee.push_back(r.ee);
    a.cand.push_back(static_cast<double>(r.candidates_examined));
  }

  auto stat = [](const std::vector<double>& v) {
    Stat s;
    const double n = static_cast<double>(v.size());
    for (double x : v) s.mean += x;
    s.mean /= n;
    if (v.size() > 1) {
      double ss = 0.0;
      for (double x : v) ss += (x - s.mean) * (x - s.mean);
      s.stderr_ = std::sqrt(ss / (n - 1.0) / n);
    }
    return s;
  };

  std::vector<SummaryRow> rows;
  for (const auto& [key, a] : groups) {
    SummaryRow row;
    row.scheme = key.second;
    row.sweep_variable = a.variable;
    row.sweep_value = a.value;
    row.count = static_cast<int>(a.rate.size());
    row.rate = stat(a.rate);
    row.power_mw = stat(a.power);
    row.ee = stat(a.ee);
    row.candidates = stat(a.cand);
    rows.push_back(row);
  }
  for (auto& row : rows) {
    const SummaryRow* fixed = nullptr;
    const SummaryRow* ts = nullptr;
    for (const auto& other : rows) {
      if (other.sweep_value != row.sweep_value) continue;
      if (other.scheme == Scheme::ChbfFixedN) fixed = &other;
      if (other.scheme == Scheme::TsCarfa) ts = &other;
    }
    if (fixed != nullptr) {
      if (fixed->rate.mean > 0.0) row.rate_loss_pct = 100.0 * (1.0 - row.rate.mean / fixed->rate.mean);
      if (fixed->ee.mean > 0.0) row.ee_gain_pct = 100.0 * (row.ee.mean / fixed->ee.mean - 1.0);
    }
    if (row.scheme == Scheme::FsCarfa && ts != nullptr && ts->candidates.mean > 0.0)
      row.fs_ts_candidate_ratio = row.candidates.mean / ts->candidates.mean;
  }
  return rows;
}

// ---------------------------------------------------------------- writers

void write_csv(std::ostream& os, const std::vector<MetricsRecord>& records) {
  os << "scheme,sweep_var,sweep_value,trial,seed,rate,power_mw,ee,candidates_examined,"
        "active_ap_count,active_chains,fronthaul_up,fronthaul_down,degenerate_links\n";
  for (const auto& r : records) {
    os << scheme_name(r.scheme) << ',' << sweep_name(r.sweep_variable) << ','
       << format_double(r.sweep_value) << ',' << r.trial << ',' << r.seed << ','
       << format_double(r.rate) << ',' << format_double(r.power_mw) << ','
       << format_double(r.ee) << ',' << r.candidates_examined << ',' << r.active_ap_count << ','
       << r.active_chains << ',';
    if (r.fronthaul_up) os << *r.fronthaul_up;
    os << ',';
    if (r.fronthaul_down) os << *r.fronthaul_down;
    os << ',' << r.degenerate_links << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<MetricsRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json o;
    o["scheme"] = scheme_name(r.scheme);
    o["sweep_var"] = sweep_name(r.sweep_variable);
    o["sweep_value"] = r.sweep_value;
    o["trial"] = r.trial;
    o["seed"] = r.seed;
    o["rate"] = r.rate;
    o["power_mw"] = r.power_mw;
    o["ee"] = r.ee;
    o["candidates_examined"] = r.candidates_examined;
    o["active_ap_count"] = r.active_ap_count;
    o["active_chains"] = r.active_chains;
    o["fronthaul_up"] = r.fronthaul_up ? nlohmann::ordered_json(*r.fronthaul_up) : nullptr;
    o["fronthaul_down"] = r.fronthaul_down ? nlohmann::ordered_json(*r.fronthaul_down) : nullptr;
    o["degenerate_links"] = r.degenerate_links;
    arr.push_back(std::move(o));
  }
  os << arr.dump(2) << '\n';
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "scheme,sweep_var,sweep_value,trials,rate_mean,rate_stderr,power_mw_mean,"
        "power_mw_stderr,ee_mean,ee_stderr,candidates_mean,candidates_stderr,"
        "rate_loss_pct,ee_gain_pct,fs_ts_candidate_ratio\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : rows) {
    os << scheme_name(r.scheme) << ',' << sweep_name(r.sweep_variable) << ','
       << format_double(r.sweep_value) << ',' << r.count << ',' << format_double(r.rate.mean)
       << ',' << format_double(r.rate.stderr_) << ',' << format_double(r.power_mw.mean) << ','
       << format_double(r.power_mw.stderr_) << ',' << format_double(r.ee.mean) << ','
       << format_double(r.ee.stderr_) << ',' << format_double(r.candidates.mean) << ','
       << format_double(r.candidates.stderr_) << ',' << opt(r.rate_loss_pct) << ','
       << opt(r.ee_gain_pct) << ',' << opt(r.fs_ts_candidate_ratio) << '\n';
  }
}

}  // namespace cfmimo
