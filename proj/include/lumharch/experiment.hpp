// Copyright 2026 The lumharch Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

// Random multicast sessions and the LH-vs-LT batch harness.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lumharch/hierarchy.hpp"
#include "lumharch/network.hpp"
#include "lumharch/solver.hpp"
#include "lumharch/topologies.hpp"

namespace lumharch {

/// splitmix64. Small, fixed and fully specified, so seeds reproduce across
/// platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n) by rejection; n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      const std::uint64_t x = next();
      if (x < limit) return x % n;
    }
  }

 private:
  std::uint64_t state_;
};

/// `count` sessions: source uniform over V, destinations a uniform
/// `size`-subset of V \ {s} (partial Fisher-Yates over V \ {s} in index order).
/// With `distinct_sources` the source is drawn from the nodes not yet used as
/// a source.
inline std::vector<MulticastSession> generate_sessions(const Network& net, std::size_t size, std::size_t count,
                                                       std::uint64_t seed, bool distinct_sources = false) {
  if (size == 0) throw InputError("group size must be positive");
  if (size >= net.node_count())
    throw InputError("group size " + std::to_string(size) + " must be below the node count " +
                     std::to_string(net.node_count()));
  if (distinct_sources && count > net.node_count())
    throw InputError("cannot draw " + std::to_string(count) + " distinct sources from " +
                     std::to_string(net.node_count()) + " nodes");
  SplitMix64 rng(seed);
  std::vector<NodeId> unused;
  for (NodeId v = 0; v < net.node_count(); ++v) unused.push_back(v);
  std::vector<MulticastSession> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    NodeId s;
    if (distinct_sources) {
      const auto at = unused.begin() + static_cast<std::ptrdiff_t>(rng.below(unused.size()));
      s = *at;
      unused.erase(at);
    } else {
      s = static_cast<NodeId>(rng.below(net.node_count()));
    }
    std::vector<NodeId> pool;
    for (NodeId v = 0; v < net.node_count(); ++v)
      if (v != s) pool.push_back(v);
    for (std::size_t k = 0; k < size; ++k) std::swap(pool[k], pool[k + rng.below(pool.size() - k)]);
    pool.resize(size);
    out.push_back(make_session(net, s, pool));
  }
  return out;
}

/// A built-in name (fig3, fig5, nsf, cost239) or a network file path.
inline Network load_topology(const std::string& name_or_path) {
  if (topology_from_name(name_or_path)) return builtin_topology(name_or_path);
  std::ifstream in(name_or_path, std::ios::binary);
  if (!in) throw InputError("cannot open topology '" + name_or_path + "' (not a built-in name or readable file)");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_network(text.str());
}

struct ExperimentConfig {
  std::string topology = "nsf";
  std::vector<std::string> splitters;
  std::size_t group_size = 2;
  std::size_t session_count = 100;
  std::uint64_t seed = 1;
  bool distinct_sources = false;
  std::optional<std::size_t> wavelengths;
  std::vector<Mode> modes{Mode::LH, Mode::LT};
  /// When non-empty, used instead of generated sessions.
  std::vector<MulticastSession> sessions;
  SolveOptions solve;
  /// Adds wall-clock ms to the CSV, which makes it run-dependent.
  bool record_timing = false;
  /// 0 = LUMHARCH_THREADS, else hardware concurrency.
  std::size_t threads = 0;
};

struct SessionOutcome {
  std::size_t session_id = 0;
  MulticastSession session;
  Mode mode = Mode::LH;
  SolveStatus status = SolveStatus::Infeasible;
  bool has_solution = false;
  std::int64_t cost = 0;
  std::int64_t wavelengths = 0;
  bool cps_used = false;
  std::uint64_t nodes_explored = 0;
  double ms = 0;
};

struct ModeTotals {
  std::int64_t cost = 0;
  std::int64_t wavelengths = 0;
};

/// Aggregates over the sessions solved to optimality in every requested mode.
struct MetricsRow {
  std::size_t group_size = 0;
  std::size_t sessions = 0;
  std::size_t counted = 0;
  std::size_t excluded = 0;
  std::map<Mode, ModeTotals> totals;
  /// (LT - LH) / LT * 100, when both modes ran.
  std::optional<double> cost_saving_percent;
  /// Counted sessions whose LH solution switches at an MI node.
  std::optional<std::size_t> r_cps;
};

struct ExperimentResult {
  Network net;
  std::vector<MulticastSession> sessions;
  std::vector<SessionOutcome> outcomes;  // session-major, then cfg.modes order
  MetricsRow metrics;
};

namespace detail {

inline std::size_t thread_budget(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LUMHARCH_THREADS")) {
    if (auto v = parse_int(env); v && *v > 0) return static_cast<std::size_t>(*v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline SessionOutcome run_one(const Network& net, const MulticastSession& ms, std::size_t id, Mode mode,
                              const SolveOptions& opts) {
  const auto started = std::chrono::steady_clock::now();
  const auto r = solve_session(net, ms, mode, opts);
  SessionOutcome o;
  o.session_id = id;
  o.session = ms;
  o.mode = mode;
  o.status = r.report.status;
  o.nodes_explored = r.report.nodes_explored;
  if (r.structures) {
    o.has_solution = true;
    o.cost = r.cost();
    o.wavelengths = r.wavelengths();
    o.cps_used = uses_cps(net, *r.structures);
  }
  o.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return o;
}

}  // namespace detail

inline MetricsRow aggregate(const ExperimentConfig& cfg, const std::vector<MulticastSession>& sessions,
                            const std::vector<SessionOutcome>& outcomes) {
  MetricsRow m;
  m.group_size = sessions.empty() ? cfg.group_size : sessions.front().destinations.size();
  m.sessions = sessions.size();
  for (Mode mode : cfg.modes) m.totals[mode] = {};
  const std::size_t per = cfg.modes.size();
  const bool has_lh = std::find(cfg.modes.begin(), cfg.modes.end(), Mode::LH) != cfg.modes.end();
  if (has_lh) m.r_cps = 0;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    bool all = true;
    for (std::size_t j = 0; j < per; ++j) all = all && outcomes[i * per + j].status == SolveStatus::Optimal;
    if (!all) {
      ++m.excluded;
      continue;
    }
    ++m.counted;
    for (std::size_t j = 0; j < per; ++j) {
      const auto& o = outcomes[i * per + j];
      m.totals[o.mode].cost += o.cost;
      m.totals[o.mode].wavelengths += o.wavelengths;
      if (o.mode == Mode::LH && o.cps_used) ++*m.r_cps;
    }
  }
  if (m.totals.count(Mode::LH) && m.totals.count(Mode::LT) && m.totals[Mode::LT].cost > 0) {
    const double lt = static_cast<double>(m.totals[Mode::LT].cost);
    m.cost_saving_percent = (lt - static_cast<double>(m.totals[Mode::LH].cost)) / lt * 100.0;
  }
  return m;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.modes.empty()) throw InputError("at least one mode is required");
  Network net = load_topology(cfg.topology).with_splitters(cfg.splitters);
  if (cfg.wavelengths) net = net.with_wavelengths(*cfg.wavelengths);
  if (cfg.sessions.empty() && cfg.session_count == 0) throw InputError("session count must be at least 1");

  ExperimentResult res{net, cfg.sessions, {}, {}};
  if (res.sessions.empty()) res.sessions = generate_sessions(net, cfg.group_size, cfg.session_count, cfg.seed, cfg.distinct_sources);

  const std::size_t jobs = res.sessions.size() * cfg.modes.size();
  res.outcomes.resize(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job; (job = next.fetch_add(1)) < jobs;) {
      const std::size_t i = job / cfg.modes.size();
      res.outcomes[job] = detail::run_one(net, res.sessions[i], i, cfg.modes[job % cfg.modes.size()], cfg.solve);
    }
  };
  const std::size_t threads = std::min(detail::thread_budget(cfg.threads), std::max<std::size_t>(jobs, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  res.metrics = aggregate(cfg, res.sessions, res.outcomes);
  return res;
}

inline constexpr std::string_view kCsvHeader =
    "session_id,source,destinations,mode,cost,wavelengths,cps_used,solve_status,nodes_explored,ms";

/// One row per (session, mode); destinations are ';'-separated. `cost`,
/// `wavelengths` and `cps_used` are blank without a solution, `ms` without
/// timing.
inline std::string format_csv(const ExperimentResult& res, bool timing) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& o : res.outcomes) {
    os << o.session_id << ',' << res.net.name(o.session.source) << ','
       << format_destinations(res.net, o.session, ';') << ',' << to_string(o.mode) << ',';
    if (o.has_solution)
      os << o.cost << ',' << o.wavelengths << ',' << (o.cps_used ? "true" : "false");
    else
      os << ",,";
    os << ',' << to_string(o.status) << ',' << o.nodes_explored << ',';
    if (timing) os << std::fixed << std::setprecision(3) << o.ms << std::defaultfloat;
    os << '\n';
  }
  return os.str();
}

inline std::string format_metrics(const MetricsRow& m) {
  std::ostringstream os;
  os << "group_size " << m.group_size << "\nsessions " << m.sessions << " (counted " << m.counted << ", excluded "
     << m.excluded << ")\n";
  for (const auto& [mode, t] : m.totals)
    os << to_string(mode) << " total_cost " << t.cost << " wavelengths " << t.wavelengths << '\n';
  os << "cost_saving_percent ";
  if (m.cost_saving_percent)
    os << std::fixed << std::setprecision(2) << *m.cost_saving_percent << std::defaultfloat;
  else
    os << '-';
  os << "\nr_cps ";
  if (m.r_cps)
    os << *m.r_cps;
  else
    os << '-';
  os << '\n';
  return os.str();
}

}  // namespace lumharch
