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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lumharch/experiment.hpp"
#include "lumharch/hierarchy.hpp"
#include "lumharch/network.hpp"
#include "lumharch/topologies.hpp"

namespace lumharch::testing {

// MC node 1 splits towards 2 and 3; both copies pass MI node 4.
inline constexpr std::string_view kFig4a = R"(NODE s MI
NODE 1 MC
NODE 2 MI
NODE 3 MI
NODE 4 MI
NODE d1 MI
NODE d2 MI
EDGE s 1 1
EDGE 1 2 1
EDGE 1 3 1
EDGE 2 4 1
EDGE 3 4 1
EDGE 4 d1 1
EDGE 4 d2 1
WAVELENGTHS 2
)";

// Round trip 2 -> d1 -> 2, then on to d2.
inline constexpr std::string_view kFig4b = R"(NODE s MI
NODE 1 MI
NODE 2 MI
NODE d1 MI
NODE d2 MI
EDGE s 1 1
EDGE 1 2 1
EDGE 2 d1 1
EDGE 2 d2 1
WAVELENGTHS 2
)";

inline constexpr std::string_view kFig4aStructure = "(s(l_s1,1(l_12,2(l_24,4(l_4d1,d1)),l_13,3(l_34,4(l_4d2,d2)))))";

// The hierarchy drawn for fig3: s-1-2-3-5-d1-4-3-d2.
inline constexpr std::string_view kFig3DrawnHierarchy =
    "λ0: (s(l_s1,1(l_12,2(l_23,3(l_35,5(l_5d1,d1(l_d14,4(l_43,3(l_3d2,d2)))))))))\n";
inline constexpr std::string_view kFig3LightTrees =
    "λ0: (s(l_s1,1(l_12,2(l_23,3(l_35,5(l_5d1,d1))))))\n"
    "λ1: (s(l_s1,1(l_12,2(l_23,3(l_3d2,d2)))))\n";

struct CorpusCase {
  std::string name;
  std::string topology;  // built-in name, fig4a or fig4b
  std::string source;
  std::vector<std::string> dests;
  std::string dump;
  std::optional<Rule> expected;  // nullopt: must validate
};

inline Network corpus_network(std::string_view name) {
  if (name == "fig4a") return parse_network(kFig4a);
  if (name == "fig4b") return parse_network(kFig4b);
  return builtin_topology(name);
}

// One case per hierarchy character plus reference structures.
inline std::vector<CorpusCase> validator_corpus() {
  return {
      {"a: link used twice", "fig3", "s", {"d2"},
       "λ0: (s(l_s1,1(l_12,2(l_23,3(l_3d2,d2)))),s(l_s1,1))\n", Rule::LinkOnce},
      {"b: link without predecessor", "fig3", "s", {"d2"},
       "λ0: (s(l_s1,1(l_12,2(l_23,3(l_3d2,d2)))),4(l_4d1,d1))\n", Rule::Predecessor},
      {"c: cycle through node 3 is allowed", "fig3", "s", {"d1", "d2"},
       "λ0: (s(l_s1,1(l_12,2(l_23,3(l_34,4(l_4d1,d1(l_d15,5(l_53,3(l_3d2,d2)))))))))\n", std::nullopt},
      {"d: two structures on one wavelength", "fig3", "s", {"d1", "d2"},
       "λ0: (s(l_s1,1(l_12,2(l_23,3(l_35,5(l_5d1,d1))))))\nλ0: (s(l_s1,1(l_12,2(l_23,3(l_3d2,d2)))))\n",
       Rule::SingleWavelength},
      {"e: same direction twice between a pair", "fig4b", "s", {"d1"},
       "λ0: (s(l_s1,1(l_12,2(l_2d1,d1))),2(l_2d1,d1(l_d12,2)))\n", Rule::LinkPair},
      {"f: MI node splits", "fig3", "s", {"d1", "d2"},
       "λ0: (s(l_s1,1(l_12,2(l_23,3(l_34,4(l_4d1,d1),l_3d2,d2)))))\n", Rule::NodeDegree},
      {"fig4a: MC split, CPS at 4", "fig4a", "s", {"d1", "d2"}, "λ0: " + std::string(kFig4aStructure) + "\n",
       std::nullopt},
      {"fig4b: round trip on 2-d1", "fig4b", "s", {"d1", "d2"},
       "λ0: (s(l_s1,1(l_12,2(l_2d1,d1(l_d12,2(l_2d2,d2))))))\n", std::nullopt},
      {"fig3 hierarchy", "fig3", "s", {"d1", "d2"}, std::string(kFig3DrawnHierarchy), std::nullopt},
      {"fig3 light-tree pair", "fig3", "s", {"d1", "d2"}, std::string(kFig3LightTrees), std::nullopt},
      {"floating cycle", "fig5", "s", {"d1", "d2", "d3"},
       "λ0: (s(l_sd1,d1),d2(l_d2d3,d3(l_d3d2,d2)))\n", Rule::Connectivity},
      {"unicast path", "fig5", "s", {"d3"}, "λ0: (s(l_sd1,d1(l_d1d2,d2(l_d2d3,d3))))\n", std::nullopt},
  };
}

struct Instance {
  Network net;
  MulticastSession session;
};

// Connected graph on 3..max_nodes nodes, unit costs, MI/MC at random, 1-2
// wavelengths, 1-3 destinations. Node names are "n0".."n<k>".
inline Instance random_instance(SplitMix64& rng, std::size_t max_nodes = 7) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(rng.below(hi - lo + 1)); };
  const std::size_t n = pick(3, max_nodes);
  std::vector<Network::NodeSpec> nodes;
  for (std::size_t i = 0; i < n; ++i)
    nodes.push_back({"n" + std::to_string(i), pick(0, 9) < 3 ? NodeKind::MC : NodeKind::MI});
  std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
  std::vector<Network::EdgeSpec> edges;
  auto add = [&](std::size_t u, std::size_t v) {
    if (u == v || has[u][v]) return;
    has[u][v] = has[v][u] = 1;
    edges.push_back({nodes[u].name, nodes[v].name, 1});
  };
  for (std::size_t i = 1; i < n; ++i) add(i, pick(0, i - 1));
  const std::size_t extra = pick(0, n);
  for (std::size_t e = 0; e < extra; ++e) add(pick(0, n - 1), pick(0, n - 1));
  Network net(nodes, edges, pick(1, 2));

  const std::size_t dcount = pick(1, std::min<std::size_t>(3, n - 1));
  std::vector<NodeId> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[pick(0, i)]);
  std::vector<NodeId> dests(order.begin() + 1, order.begin() + 1 + static_cast<std::ptrdiff_t>(dcount));
  auto ms = make_session(net, order[0], dests);
  return {std::move(net), std::move(ms)};
}

}  // namespace lumharch::testing
