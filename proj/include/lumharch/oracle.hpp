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

// Exhaustive reference optimum for tiny instances. Works only through the
// hierarchy rules (validate / is_light_tree); it never touches the ILP.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lumharch/hierarchy.hpp"
#include "lumharch/model.hpp"
#include "lumharch/network.hpp"

namespace lumharch {

struct OracleOptions {
  /// false: structure rules only (no reachability / flow), which admits the
  /// detached-cycle solutions the connectivity constraints exist to forbid.
  bool connectivity = true;
  /// false: plain enumeration of every link subset on every wavelength.
  bool prune = true;
};

struct OracleResult {
  bool feasible = false;
  std::int64_t best_cost = 0;
  std::int64_t best_wavelengths = 0;
  LightStructureSet witness;
  std::uint64_t explored = 0;
};

inline constexpr std::size_t kOracleMaxNodes = 8;
inline constexpr std::size_t kOracleMaxWavelengths = 2;
inline constexpr std::size_t kOracleMaxDestinations = 3;
/// Bit budget (links x wavelengths) of the unpruned enumeration.
inline constexpr std::size_t kOracleMaxRawBits = 22;

namespace detail {

class OracleSearch {
 public:
  OracleSearch(const Network& net, const MulticastSession& ms, Mode mode, const OracleOptions& opts)
      : net_(net), ms_(ms), mode_(mode), opts_(opts) {}

  OracleResult run() {
    if (!opts_.connectivity || !opts_.prune) return raw();
    return pruned();
  }

 private:
  // Lexicographic (cost, wavelengths, encoding) improvement test.
  void offer(const LightStructureSet& set) {
    const auto c = cost(net_, set);
    const auto k = static_cast<std::int64_t>(set.structures.size());
    if (best_.feasible) {
      if (c > best_.best_cost) return;
      if (c == best_.best_cost && k > best_.best_wavelengths) return;
      if (c == best_.best_cost && k == best_.best_wavelengths && dump(net_, set) >= best_encoding_) return;
    }
    best_.feasible = true;
    best_.best_cost = c;
    best_.best_wavelengths = k;
    best_.witness = set;
    best_encoding_ = dump(net_, set);
  }

  bool accepts(const LightStructureSet& set) {
    ++best_.explored;
    if (mode_ == Mode::LT)
      for (const auto& ls : set.structures)
        if (!is_light_tree(ls)) return false;
    return opts_.connectivity ? validate(net_, set).ok() : check_structure_rules(net_, set).ok();
  }

  // Every assignment of a link subset to every wavelength.
  OracleResult raw() {
    const std::size_t nl = net_.link_count();
    const std::size_t W = net_.wavelengths();
    if (nl * W > kOracleMaxRawBits)
      throw InputError("instance too large for unpruned enumeration (" + std::to_string(nl * W) + " link bits)");
    const std::uint64_t per = std::uint64_t{1} << nl;
    std::vector<std::uint64_t> masks(W, 0);
    for (;;) {
      LightStructureSet set{ms_, {}};
      for (std::size_t k = 0; k < W; ++k) {
        if (masks[k] == 0) continue;
        LightStructure ls{k, ms_.source, {}};
        for (LinkId l = 0; l < nl; ++l)
          if (masks[k] >> l & 1) ls.links.push_back(net_.link(l));
        set.structures.push_back(std::move(ls));
      }
      if (!set.structures.empty() && accepts(set)) offer(normalized(set));
      std::size_t k = 0;
      while (k < W && ++masks[k] == per) masks[k++] = 0;
      if (k == W) break;
    }
    return best_;
  }

  // Wavelengths are interchangeable: relabel structures 0..k-1 in order.
  static LightStructureSet normalized(LightStructureSet set) {
    for (std::size_t i = 0; i < set.structures.size(); ++i) set.structures[i].wavelength = i;
    return set;
  }

  // Root-connected link sets per wavelength, then combinations of up to
  // min(|W|, |D|) of them, under a growing cost budget.
  OracleResult pruned() {
    std::int64_t total = 0;
    for (const auto& e : net_.edges()) total += 2 * e.cost;
    const std::int64_t cap = total * static_cast<std::int64_t>(net_.wavelengths());
    std::int64_t budget = 1;
    for (;;) {
      budget = std::min(budget, cap);
      search_within(budget);
      if (best_.feasible || budget >= cap) return best_;
      budget *= 2;
    }
  }

  void search_within(std::int64_t budget) {
    budget_ = budget;
    candidates_.clear();
    std::vector<LinkId> chosen;
    std::vector<char> reached(net_.node_count(), 0);
    reached[ms_.source] = 1;
    std::vector<LinkId> ext(net_.out_links(ms_.source).begin(), net_.out_links(ms_.source).end());
    grow(chosen, 0, ext, reached);

    std::sort(candidates_.begin(), candidates_.end(),
              [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });

    const std::size_t max_k = std::min(net_.wavelengths(), ms_.destinations.size());
    for (const auto& c : candidates_) {
      if (c.cost > budget_) break;
      LightStructureSet set{ms_, {c.structure}};
      if (accepts(set)) offer(set);
    }
    if (max_k < 2) return;
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
      for (std::size_t j = i + 1; j < candidates_.size(); ++j) {
        const auto c = candidates_[i].cost + candidates_[j].cost;
        if (c > budget_) break;
        if (best_.feasible && c >= best_.best_cost) break;  // two wavelengths never win a cost tie
        LightStructureSet set{ms_, {candidates_[i].structure, candidates_[j].structure}};
        set.structures[1].wavelength = 1;
        if (!covers(set)) continue;
        if (accepts(set)) offer(set);
      }
    }
  }

  bool covers(const LightStructureSet& set) const {
    std::vector<char> hit(net_.node_count(), 0);
    for (const auto& ls : set.structures)
      for (const auto& l : ls.links) hit[l.to] = 1;
    return std::all_of(ms_.destinations.begin(), ms_.destinations.end(), [&](NodeId d) { return hit[d]; });
  }

  // Enumerates each root-connected link set once: the i-th frontier link is
  // taken with frontier links 0..i-1 excluded for the rest of that branch.
  void grow(std::vector<LinkId>& chosen, std::int64_t spent, const std::vector<LinkId>& ext,
            std::vector<char>& reached) {
    if (!chosen.empty()) consider(chosen, spent);
    for (std::size_t i = 0; i < ext.size(); ++i) {
      const LinkId e = ext[i];
      const auto c = net_.link_cost(e);
      if (spent + c > budget_) continue;
      const NodeId head = net_.link(e).to;
      // Links that can only make the structure invalid, whatever follows.
      if (head == ms_.source) continue;
      if (reached[head] && (mode_ == Mode::LT || net_.kind(head) == NodeKind::MC)) continue;

      std::vector<LinkId> next(ext.begin() + static_cast<std::ptrdiff_t>(i) + 1, ext.end());
      const bool fresh = !reached[head];
      if (fresh) {
        reached[head] = 1;
        for (LinkId l : net_.out_links(head)) next.push_back(l);
      }
      chosen.push_back(e);
      grow(chosen, spent + c, next, reached);
      chosen.pop_back();
      if (fresh) reached[head] = 0;
    }
  }

  void consider(const std::vector<LinkId>& chosen, std::int64_t spent) {
    ++best_.explored;
    LightStructure ls{0, ms_.source, {}};
    for (LinkId l : chosen) ls.links.push_back(net_.link(l));
    std::sort(ls.links.begin(), ls.links.end());
    if (mode_ == Mode::LT && !is_light_tree(ls)) return;
    ValidationReport r;
    check_structure(net_, ms_, ls, r);
    if (!r.ok()) return;
    // Per-structure share of the session-wide fan-out / fan-in limits.
    const std::size_t dcount = ms_.destinations.size();
    std::size_t source_out = 0;
    for (const auto& l : ls.links) source_out += l.from == ms_.source;
    if (source_out > dcount) return;
    if (dcount >= 2)
      for (NodeId d : ms_.destinations) {
        std::size_t in = 0;
        for (const auto& l : ls.links) in += l.to == d;
        if (in > dcount - 1) return;
      }
    candidates_.push_back({std::move(ls), spent});
  }

  struct Candidate {
    LightStructure structure;
    std::int64_t cost;
  };

  const Network& net_;
  const MulticastSession& ms_;
  Mode mode_;
  OracleOptions opts_;
  OracleResult best_;
  std::string best_encoding_;
  std::int64_t budget_ = 0;
  std::vector<Candidate> candidates_;
};

}  // namespace detail

/// Lexicographic (cost, wavelength count) optimum by exhaustive search.
/// Refuses instances beyond 8 nodes, 2 wavelengths or 3 destinations.
inline OracleResult enumerate_optimal(const Network& net, const MulticastSession& ms, Mode mode,
                                      const OracleOptions& opts = {}) {
  if (net.node_count() > kOracleMaxNodes || net.wavelengths() > kOracleMaxWavelengths ||
      ms.destinations.size() > kOracleMaxDestinations)
    throw InputError("instance too large for the oracle (limits: 8 nodes, 2 wavelengths, 3 destinations)");
  return detail::OracleSearch(net, ms, mode, opts).run();
}

}  // namespace lumharch
