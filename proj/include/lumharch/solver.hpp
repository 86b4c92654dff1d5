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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "lumharch/detail/flow.hpp"
#include "lumharch/hierarchy.hpp"
#include "lumharch/model.hpp"
#include "lumharch/simplex.hpp"

namespace lumharch {

enum class BranchRule { MostFractional };

struct SolveOptions {
  std::uint64_t node_limit = 1'000'000;
  std::optional<std::chrono::milliseconds> time_limit;
  BranchRule branch_rule = BranchRule::MostFractional;
  int verbosity = 0;
  /// Seed the incumbent with shortest-path constructions when they are feasible.
  bool greedy_incumbent = true;
  SimplexOptions simplex;
};

enum class SolveStatus { Optimal, Infeasible, LimitReached };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::LimitReached: return "limit";
  }
  return "?";
}

struct SolveReport {
  SolveStatus status = SolveStatus::Infeasible;
  std::int64_t objective = 0;
  /// Set when status is Optimal, or on LimitReached with an incumbent.
  std::optional<Assignment> assignment;
  std::uint64_t nodes_explored = 0;
  std::uint64_t lp_iterations = 0;
  /// LP nodes abandoned because the simplex failed numerically.
  std::uint64_t numerical_failures = 0;
  double root_bound = 0;

  friend bool operator==(const SolveReport&, const SolveReport&) = default;
};

/// Continuous relaxation of `model` under the given bounds (defaults to the
/// model's own bounds).
inline LpSolution lp_relax(const IlpModel& model, const SimplexOptions& opts = {}) {
  return solve_lp(relaxation(model), opts);
}

/// Replaces the F values of `a` by an integral commodity flow over the links
/// with L = 1. Returns nullopt when no such flow exists, i.e. the link
/// pattern cannot deliver one unit to every destination.
inline std::optional<Assignment> integralize_flows(const IlpModel& model, const Assignment& a) {
  Assignment out = a;
  if (!model.connectivity) return out;
  const std::size_t n = model.node_count;
  const std::size_t W = model.wavelengths;
  const auto demand = static_cast<std::int64_t>(model.destinations.size());

  detail::Circulation flow(n * W);
  const std::size_t source = flow.add_node();
  const std::size_t sink = flow.add_node();
  std::vector<std::pair<std::size_t, std::size_t>> arc_var;  // (arc, F var)
  for (std::size_t k = 0; k < W; ++k) {
    for (LinkId l = 0; l < model.links.size(); ++l) {
      const auto f = *model.flow_var(l, k);
      out.values[f] = 0;
      if (a.values.at(model.link_var(l, k)) != 1) continue;
      const auto& link = model.links[l];
      arc_var.emplace_back(flow.add_arc(k * n + link.from, k * n + link.to, 1, demand), f);
    }
    flow.add_arc(source, k * n + model.source, 0, demand);
  }
  for (NodeId d : model.destinations) {
    const std::size_t absorb = flow.add_node();
    for (std::size_t k = 0; k < W; ++k) flow.add_arc(k * n + d, absorb, 0, 1);
    flow.add_arc(absorb, sink, 1, 1);
  }
  flow.add_arc(sink, source, demand, demand);

  auto solution = flow.solve();
  if (!solution) return std::nullopt;
  for (const auto& [arc, var] : arc_var) out.values[var] = (*solution)[arc];
  return out;
}

namespace detail {

// Shortest-path constructions used to seed the incumbent. Each candidate is
// kept only if it passes check_feasible, so they never affect correctness.
inline std::vector<Assignment> greedy_candidates(const IlpModel& model) {
  const std::size_t n = model.node_count;
  std::vector<std::int64_t> link_cost(model.links.size(), 0);
  for (const auto& t : model.objective)
    if (model.vars[t.var].kind == VarKind::Link && model.vars[t.var].wavelength == 0)
      link_cost[model.vars[t.var].link] = t.coef / model.delta;

  // Dijkstra from the source; ties resolved by canonical link order.
  constexpr auto kInf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> dist(n, kInf);
  std::vector<LinkId> via(n, model.links.size());
  std::vector<std::vector<LinkId>> out(n);
  for (LinkId l = 0; l < model.links.size(); ++l) out[model.links[l].from].push_back(l);
  using Item = std::pair<std::int64_t, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[model.source] = 0;
  pq.push({0, model.source});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du != dist[u]) continue;
    for (LinkId l : out[u]) {
      const NodeId v = model.links[l].to;
      if (v == model.source) continue;
      if (du + link_cost[l] < dist[v]) {
        dist[v] = du + link_cost[l];
        via[v] = l;
        pq.push({dist[v], v});
      }
    }
  }
  auto path_to = [&](NodeId d) {
    std::vector<LinkId> path;
    for (NodeId v = d; v != model.source && via[v] < model.links.size(); v = model.links[via[v]].from)
      path.push_back(via[v]);
    return path;
  };

  std::vector<Assignment> candidates;
  // Union of shortest paths on the first wavelength.
  {
    Assignment a{std::vector<std::int64_t>(model.vars.size(), 0)};
    a.values[model.wavelength_var(0)] = 1;
    for (NodeId d : model.destinations)
      for (LinkId l : path_to(d)) a.values[model.link_var(l, 0)] = 1;
    candidates.push_back(std::move(a));
  }
  // One shortest path per destination, each on its own wavelength.
  if (model.destinations.size() <= model.wavelengths) {
    Assignment a{std::vector<std::int64_t>(model.vars.size(), 0)};
    for (std::size_t i = 0; i < model.destinations.size(); ++i) {
      a.values[model.wavelength_var(i)] = 1;
      for (LinkId l : path_to(model.destinations[i])) a.values[model.link_var(l, i)] = 1;
    }
    candidates.push_back(std::move(a));
  }
  std::vector<Assignment> feasible;
  for (auto& c : candidates) {
    auto with_flow = integralize_flows(model, c);
    if (with_flow && check_feasible(model, *with_flow).ok()) feasible.push_back(std::move(*with_flow));
  }
  return feasible;
}

}  // namespace detail

/// Exact best-first branch-and-bound over the LP relaxation. Branches only on
/// L and w; once those are integral the flow part is a network-flow system
/// with integral vertices, so F is made integral by `integralize_flows`.
inline SolveReport solve(const IlpModel& model, const SolveOptions& opts = {}) {
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  SolveReport report;

  const LinearProgram base = relaxation(model);
  std::optional<Assignment> incumbent;
  std::int64_t incumbent_value = std::numeric_limits<std::int64_t>::max();

  if (opts.greedy_incumbent) {
    for (auto& a : detail::greedy_candidates(model)) {
      const auto v = objective_value(model, a);
      if (v < incumbent_value) {
        incumbent_value = v;
        incumbent = std::move(a);
      }
    }
  }

  struct Node {
    std::vector<std::pair<std::size_t, std::int64_t>> fixings;
    double bound;
    std::uint64_t seq;
  };
  struct Later {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Node, std::vector<Node>, Later> open;
  std::uint64_t seq = 0;
  open.push({{}, -std::numeric_limits<double>::infinity(), seq++});

  auto prunable = [&](double bound) {
    // Objectives are integers, so a bound within tolerance of k means >= k.
    return incumbent && std::ceil(bound - 1e-6) >= static_cast<double>(incumbent_value);
  };

  bool limited = false;
  LinearProgram lp = base;
  while (!open.empty()) {
    if (report.nodes_explored >= opts.node_limit ||
        (opts.time_limit && Clock::now() - started >= *opts.time_limit)) {
      limited = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (prunable(node.bound)) continue;

    lp.lower = base.lower;
    lp.upper = base.upper;
    for (const auto& [var, value] : node.fixings) lp.lower[var] = lp.upper[var] = static_cast<double>(value);
    const LpSolution sol = solve_lp(lp, opts.simplex);
    ++report.nodes_explored;
    report.lp_iterations += sol.iterations;
    if (node.fixings.empty()) report.root_bound = sol.status == LpStatus::Optimal ? sol.value : 0;

    if (sol.status == LpStatus::Infeasible) continue;
    if (sol.status != LpStatus::Optimal) {
      ++report.numerical_failures;
      continue;
    }
    if (prunable(sol.value)) continue;

    std::size_t branch = model.vars.size();
    double best_frac = 1e-6;
    for (std::size_t j = 0; j < model.vars.size(); ++j) {
      if (!model.is_structural(j)) continue;
      const double x = sol.x[j];
      const double frac = std::min(x - std::floor(x), std::ceil(x) - x);
      if (frac > best_frac + 1e-9) {
        best_frac = frac;
        branch = j;
      }
    }

    if (branch == model.vars.size()) {
      Assignment a{std::vector<std::int64_t>(model.vars.size(), 0)};
      for (std::size_t j = 0; j < model.vars.size(); ++j) a.values[j] = static_cast<std::int64_t>(std::llround(sol.x[j]));
      auto integral = integralize_flows(model, a);
      if (!integral) continue;
      if (!check_feasible(model, *integral).ok()) {
        ++report.numerical_failures;
        continue;
      }
      const auto value = objective_value(model, *integral);
      if (value < incumbent_value) {
        incumbent_value = value;
        incumbent = std::move(*integral);
        if (opts.verbosity > 0)
          std::clog << "[bnb] node " << report.nodes_explored << " incumbent " << incumbent_value << '\n';
      }
      continue;
    }

    // The 1-branch is created first so it wins bound ties.
    for (std::int64_t value : {std::int64_t{1}, std::int64_t{0}}) {
      Node child{node.fixings, sol.value, seq++};
      child.fixings.emplace_back(branch, value);
      open.push(std::move(child));
    }
  }

  if (incumbent) {
    report.objective = incumbent_value;
    report.assignment = std::move(incumbent);
  }
  if (limited || report.numerical_failures > 0) {
    report.status = SolveStatus::LimitReached;
  } else {
    report.status = report.assignment ? SolveStatus::Optimal : SolveStatus::Infeasible;
  }
  return report;
}

/// A solved session: the solver report plus the extracted structures and
/// their full validation (connectivity included, even when the model
/// dropped the flow constraints).
struct SessionResult {
  IlpModel model;
  SolveReport report;
  std::optional<LightStructureSet> structures;
  ValidationReport validation;

  bool optimal() const { return report.status == SolveStatus::Optimal; }
  std::int64_t cost() const { return split_objective(model, report.objective).cost; }
  std::int64_t wavelengths() const { return split_objective(model, report.objective).wavelengths; }
};

inline SessionResult solve_session(const Network& net, const MulticastSession& ms, Mode mode,
                                   const SolveOptions& opts = {}, bool connectivity = true) {
  SessionResult r{build_model(net, ms, mode, connectivity), {}, std::nullopt, {}};
  r.report = solve(r.model, opts);
  if (r.report.assignment) {
    r.structures = extract_structures(r.model, *r.report.assignment, net, ms);
    r.validation = validate(net, *r.structures);
  }
  return r;
}

}  // namespace lumharch
