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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

namespace lumharch::detail {

/// Integral circulation with lower and upper arc bounds. Feasibility reduces
/// to one max-flow (Dinic) between a super source and a super sink carrying
/// the imbalance induced by the lower bounds.
class Circulation {
 public:
  static constexpr std::int64_t kInfinite = std::numeric_limits<std::int64_t>::max() / 4;

  explicit Circulation(std::size_t nodes) : nodes_(nodes) {}

  std::size_t add_node() { return nodes_++; }

  std::size_t add_arc(std::size_t from, std::size_t to, std::int64_t lower, std::int64_t upper) {
    arcs_.push_back({from, to, lower, upper});
    return arcs_.size() - 1;
  }

  std::size_t node_count() const { return nodes_; }
  std::size_t arc_count() const { return arcs_.size(); }

  /// Flow per arc (in insertion order) if a feasible circulation exists.
  std::optional<std::vector<std::int64_t>> solve() const {
    for (const auto& a : arcs_)
      if (a.lower > a.upper) return std::nullopt;

    const std::size_t source = nodes_;
    const std::size_t sink = nodes_ + 1;
    Dinic g(nodes_ + 2);
    std::vector<std::int64_t> balance(nodes_, 0);
    std::vector<std::size_t> handle(arcs_.size());
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      const auto& a = arcs_[i];
      handle[i] = g.add(a.from, a.to, a.upper - a.lower);
      balance[a.to] += a.lower;
      balance[a.from] -= a.lower;
    }
    std::int64_t required = 0;
    for (std::size_t v = 0; v < nodes_; ++v) {
      if (balance[v] > 0) {
        g.add(source, v, balance[v]);
        required += balance[v];
      } else if (balance[v] < 0) {
        g.add(v, sink, -balance[v]);
      }
    }
    if (g.max_flow(source, sink) != required) return std::nullopt;
    std::vector<std::int64_t> flow(arcs_.size());
    for (std::size_t i = 0; i < arcs_.size(); ++i) flow[i] = arcs_[i].lower + g.flow(handle[i]);
    return flow;
  }

 private:
  struct Arc {
    std::size_t from;
    std::size_t to;
    std::int64_t lower;
    std::int64_t upper;
  };

  class Dinic {
   public:
    explicit Dinic(std::size_t n) : adj_(n), level_(n), next_(n) {}

    std::size_t add(std::size_t u, std::size_t v, std::int64_t cap) {
      const std::size_t id = to_.size();
      to_.push_back(v);
      cap_.push_back(cap);
      original_.push_back(cap);
      adj_[u].push_back(id);
      to_.push_back(u);
      cap_.push_back(0);
      original_.push_back(0);
      adj_[v].push_back(id + 1);
      return id;
    }

    std::int64_t flow(std::size_t id) const { return original_[id] - cap_[id]; }

    std::int64_t max_flow(std::size_t s, std::size_t t) {
      std::int64_t total = 0;
      while (bfs(s, t)) {
        std::fill(next_.begin(), next_.end(), 0);
        while (std::int64_t pushed = dfs(s, t, kInfinite)) total += pushed;
      }
      return total;
    }

   private:
    bool bfs(std::size_t s, std::size_t t) {
      std::fill(level_.begin(), level_.end(), -1);
      std::queue<std::size_t> q;
      level_[s] = 0;
      q.push(s);
      while (!q.empty()) {
        auto u = q.front();
        q.pop();
        for (auto id : adj_[u]) {
          if (cap_[id] > 0 && level_[to_[id]] < 0) {
            level_[to_[id]] = level_[u] + 1;
            q.push(to_[id]);
          }
        }
      }
      return level_[t] >= 0;
    }

    std::int64_t dfs(std::size_t u, std::size_t t, std::int64_t limit) {
      if (u == t) return limit;
      for (auto& i = next_[u]; i < adj_[u].size(); ++i) {
        auto id = adj_[u][i];
        auto v = to_[id];
        if (cap_[id] <= 0 || level_[v] != level_[u] + 1) continue;
        if (std::int64_t pushed = dfs(v, t, std::min(limit, cap_[id]))) {
          cap_[id] -= pushed;
          cap_[id ^ 1] += pushed;
          return pushed;
        }
      }
      return 0;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::size_t> to_;
    std::vector<std::int64_t> cap_;
    std::vector<std::int64_t> original_;
    std::vector<int> level_;
    std::vector<std::size_t> next_;
  };

  std::size_t nodes_;
  std::vector<Arc> arcs_;
};

}  // namespace lumharch::detail
