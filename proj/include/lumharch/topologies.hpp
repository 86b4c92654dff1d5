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

#include <array>
#include <string>
#include <string_view>

#include "lumharch/network.hpp"

namespace lumharch {

enum class Topology { Fig3, Fig5, Nsf, Cost239 };

namespace detail {

// Eight-node example for ms(s, {d1, d2}): light-trees need cost 9, while a
// light-hierarchy switching two passes through MI node 3 gets by with less.
inline constexpr std::string_view kFig3 = R"(# Cross Pair Switching example, MI node 3 has degree 4
NODE s MI
NODE 1 MI
NODE 2 MI
NODE 3 MI
NODE 4 MI
NODE 5 MI
NODE d1 MI
NODE d2 MI
EDGE s 1 1
EDGE 1 2 1
EDGE 2 3 1
EDGE 3 4 1
EDGE 3 5 1
EDGE 4 d1 1
EDGE 5 d1 1
EDGE 3 d2 1
WAVELENGTHS 2
)";

// Chain s - d1 - d2 - d3. The costly middle edge makes the detached cycle
// d2 <-> d3 (cost 3 with s->d1) cheaper than the real path (cost 5) when only
// the structure constraints are applied.
inline constexpr std::string_view kFig5 = R"(# disconnection pathology
NODE s MI
NODE d1 MI
NODE d2 MI
NODE d3 MI
EDGE s d1 1
EDGE d1 d2 3
EDGE d2 d3 1
WAVELENGTHS 2
)";

// 14-node / 21-link NSFNET backbone, unit costs.
inline constexpr std::string_view kNsf = R"(# NSFNET, unit costs
NODE 1 MI
NODE 2 MI
NODE 3 MI
NODE 4 MI
NODE 5 MI
NODE 6 MI
NODE 7 MI
NODE 8 MI
NODE 9 MI
NODE 10 MI
NODE 11 MI
NODE 12 MI
NODE 13 MI
NODE 14 MI
EDGE 1 2 1
EDGE 1 3 1
EDGE 1 8 1
EDGE 2 3 1
EDGE 2 4 1
EDGE 3 6 1
EDGE 4 5 1
EDGE 4 11 1
EDGE 5 6 1
EDGE 5 7 1
EDGE 6 10 1
EDGE 6 14 1
EDGE 7 8 1
EDGE 8 9 1
EDGE 9 10 1
EDGE 9 12 1
EDGE 9 13 1
EDGE 11 12 1
EDGE 11 13 1
EDGE 12 14 1
EDGE 13 14 1
WAVELENGTHS 2
)";

// 11-node / 26-link pan-European COST 239, unit costs.
// 1 Copenhagen, 2 London, 3 Amsterdam, 4 Berlin, 5 Brussels, 6 Luxembourg,
// 7 Prague, 8 Paris, 9 Zurich, 10 Vienna, 11 Milan.
inline constexpr std::string_view kCost239 = R"(# COST 239, unit costs
NODE 1 MI
NODE 2 MI
NODE 3 MI
NODE 4 MI
NODE 5 MI
NODE 6 MI
NODE 7 MI
NODE 8 MI
NODE 9 MI
NODE 10 MI
NODE 11 MI
EDGE 1 2 1
EDGE 1 3 1
EDGE 1 4 1
EDGE 1 7 1
EDGE 2 3 1
EDGE 2 5 1
EDGE 2 8 1
EDGE 3 4 1
EDGE 3 5 1
EDGE 3 6 1
EDGE 4 7 1
EDGE 4 8 1
EDGE 4 10 1
EDGE 5 6 1
EDGE 5 8 1
EDGE 5 11 1
EDGE 6 7 1
EDGE 6 8 1
EDGE 6 9 1
EDGE 7 9 1
EDGE 7 10 1
EDGE 8 9 1
EDGE 8 11 1
EDGE 9 10 1
EDGE 9 11 1
EDGE 10 11 1
WAVELENGTHS 2
)";

}  // namespace detail

inline std::string_view topology_text(Topology t) {
  switch (t) {
    case Topology::Fig3: return detail::kFig3;
    case Topology::Fig5: return detail::kFig5;
    case Topology::Nsf: return detail::kNsf;
    case Topology::Cost239: return detail::kCost239;
  }
  return {};
}

inline Network builtin_topology(Topology t) { return parse_network(topology_text(t)); }

inline std::optional<Topology> topology_from_name(std::string_view name) {
  if (name == "fig3") return Topology::Fig3;
  if (name == "fig5") return Topology::Fig5;
  if (name == "nsf") return Topology::Nsf;
  if (name == "cost239") return Topology::Cost239;
  return std::nullopt;
}

inline Network builtin_topology(std::string_view name) {
  if (auto t = topology_from_name(name)) return builtin_topology(*t);
  throw InputError("unknown built-in topology '" + std::string(name) +
                   "' (expected fig3, fig5, nsf or cost239)");
}

}  // namespace lumharch
