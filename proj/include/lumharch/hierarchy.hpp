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
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lumharch/detail/flow.hpp"
#include "lumharch/network.hpp"

namespace lumharch {

/// The links one session occupies on a single wavelength.
struct LightStructure {
  std::size_t wavelength = 0;
  NodeId root = 0;
  std::vector<Link> links;

  friend bool operator==(const LightStructure&, const LightStructure&) = default;
};

/// All structures serving one session, one per wavelength.
struct LightStructureSet {
  MulticastSession session;
  std::vector<LightStructure> structures;

  friend bool operator==(const LightStructureSet&, const LightStructureSet&) = default;
};

/// Structural rules a light-hierarchy must satisfy. Letters follow the usual
/// enumeration of light-hierarchy characters; cycles (c) are always allowed,
/// so there is no rule for them.
enum class Rule {
  LinkOnce,          // (a) a directed fiber link is used at most once
  Predecessor,       // (b) every link not leaving the root follows a link into its tail
  SingleWavelength,  // (d) one wavelength per structure, distinct across the set
  LinkPair,          // (e) at most the two opposite links between a node pair
  NodeDegree,        // (f) in/out link counts allowed by the node's splitting capability
  Connectivity,      // links and destinations reachable, commodity flow exists
  Service,           // session-level counts: source fan-out, destination fan-in, |set|
};

inline std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::LinkOnce: return "a";
    case Rule::Predecessor: return "b";
    case Rule::SingleWavelength: return "d";
    case Rule::LinkPair: return "e";
    case Rule::NodeDegree: return "f";
    case Rule::Connectivity: return "connectivity";
    case Rule::Service: return "service";
  }
  return "?";
}

struct Violation {
  Rule rule;
  std::string where;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  bool has(Rule r) const {
    return std::any_of(violations.begin(), violations.end(),
                       [r](const Violation& v) { return v.rule == r; });
  }

  std::set<Rule> rules() const {
    std::set<Rule> out;
    for (const auto& v : violations) out.insert(v.rule);
    return out;
  }

  void add(Rule r, std::string where, std::string message) {
    violations.push_back({r, std::move(where), std::move(message)});
  }
};

inline std::ostream& operator<<(std::ostream& os, const ValidationReport& report) {
  if (report.ok()) return os << "ok\n";
  for (const auto& v : report.violations)
    os << "[" << to_string(v.rule) << "] " << v.where << ": " << v.message << '\n';
  return os;
}

namespace detail {

inline std::string link_label(const Network& net, const Link& l) {
  return net.name(l.from) + "->" + net.name(l.to);
}

struct Degrees {
  std::vector<std::size_t> in;
  std::vector<std::size_t> out;
};

inline Degrees degrees(std::size_t nodes, const std::vector<Link>& links) {
  Degrees d{std::vector<std::size_t>(nodes, 0), std::vector<std::size_t>(nodes, 0)};
  for (const auto& l : links) {
    if (l.from < nodes) ++d.out[l.from];
    if (l.to < nodes) ++d.in[l.to];
  }
  return d;
}

inline std::vector<char> reachable_nodes(std::size_t nodes, NodeId root, const std::vector<Link>& links) {
  std::vector<std::vector<NodeId>> adj(nodes);
  for (const auto& l : links)
    if (l.from < nodes && l.to < nodes) adj[l.from].push_back(l.to);
  std::vector<char> seen(nodes, 0);
  if (root >= nodes) return seen;
  std::vector<NodeId> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    for (NodeId m : adj[n])
      if (!seen[m]) {
        seen[m] = 1;
        stack.push_back(m);
      }
  }
  return seen;
}

// Per-wavelength rules (a), (b), (d range), (e), (f) plus the root/emptiness
// checks of a single structure.
inline void check_structure(const Network& net, const MulticastSession& ms, const LightStructure& ls,
                            ValidationReport& report) {
  const std::string tag = "λ" + std::to_string(ls.wavelength);
  const std::size_t n = net.node_count();

  if (ls.wavelength >= net.wavelengths())
    report.add(Rule::SingleWavelength, tag,
               "wavelength index outside [0, " + std::to_string(net.wavelengths()) + ")");
  if (ls.root != ms.source)
    report.add(Rule::Service, tag, "structure is not rooted at the session source");
  if (ls.links.empty()) report.add(Rule::Service, tag, "structure carries no links");

  std::map<Link, std::size_t> uses;
  for (const auto& l : ls.links) {
    if (l.from >= n || l.to >= n || !net.link_id(l.from, l.to)) {
      report.add(Rule::LinkOnce, tag, "link is not a fiber of the network");
      continue;
    }
    ++uses[l];
  }
  for (const auto& [l, count] : uses)
    if (count > 1)
      report.add(Rule::LinkOnce, tag + " " + link_label(net, l),
                 "link used " + std::to_string(count) + " times");

  std::map<std::pair<NodeId, NodeId>, std::size_t> pair_count;
  for (const auto& [l, count] : uses) pair_count[{std::min(l.from, l.to), std::max(l.from, l.to)}] += count;
  for (const auto& [pair, count] : pair_count) {
    const std::size_t forward = uses.count({pair.first, pair.second}) ? uses.at({pair.first, pair.second}) : 0;
    const std::size_t backward = uses.count({pair.second, pair.first}) ? uses.at({pair.second, pair.first}) : 0;
    if (count > 2 || forward > 1 || backward > 1)
      report.add(Rule::LinkPair, tag + " " + net.name(pair.first) + "-" + net.name(pair.second),
                 "more than one link per direction between the pair");
  }

  const auto deg = degrees(n, ls.links);
  for (NodeId v = 0; v < n; ++v) {
    const auto in = deg.in[v];
    const auto out = deg.out[v];
    const std::string where = tag + " node " + net.name(v);
    if (v == ls.root) {
      if (in > 0) report.add(Rule::NodeDegree, where, "root has incoming links");
      continue;
    }
    if (out > 0 && in == 0) report.add(Rule::Predecessor, where, "outgoing links without an incoming link");
    const bool member = ms.is_destination(v);
    if (net.kind(v) == NodeKind::MC) {
      if (in > 1) report.add(Rule::NodeDegree, where, "MC node with more than one incoming link");
      if (!member && out < in) report.add(Rule::NodeDegree, where, "non-member MC node is a leaf");
    } else if (member) {
      if (out > in) report.add(Rule::NodeDegree, where, "MI destination emits more links than it receives");
    } else if (out != in) {
      report.add(Rule::NodeDegree, where, "MI node must pair every incoming link with one outgoing link");
    }
  }
}

// Eq.-13..18-style commodity flow across all structures: the source emits |D|
// units, every destination absorbs exactly one unit on exactly one
// wavelength, every used link carries between 1 and |D| units.
inline bool commodity_flow_exists(const Network& net, const LightStructureSet& set) {
  const std::size_t n = net.node_count();
  const std::size_t k = set.structures.size();
  const auto demand = static_cast<std::int64_t>(set.session.destinations.size());
  Circulation flow(n * k);
  const std::size_t super_source = flow.add_node();
  const std::size_t super_sink = flow.add_node();
  for (std::size_t i = 0; i < k; ++i) {
    std::set<Link> distinct;
    for (const auto& l : set.structures[i].links)
      if (l.from < n && l.to < n && net.link_id(l.from, l.to)) distinct.insert(l);
    for (const auto& l : distinct) flow.add_arc(i * n + l.from, i * n + l.to, 1, demand);
    flow.add_arc(super_source, i * n + set.session.source, 0, demand);
  }
  for (NodeId d : set.session.destinations) {
    const std::size_t absorb = flow.add_node();
    for (std::size_t i = 0; i < k; ++i) flow.add_arc(i * n + d, absorb, 0, 1);
    flow.add_arc(absorb, super_sink, 1, 1);
  }
  flow.add_arc(super_sink, super_source, demand, demand);
  return flow.solve().has_value();
}

}  // namespace detail

/// Per-structure and session-count rules only; no reachability or flow.
inline ValidationReport check_structure_rules(const Network& net, const LightStructureSet& set) {
  ValidationReport report;
  const auto& ms = set.session;
  const std::size_t k = set.structures.size();
  const std::size_t dcount = ms.destinations.size();

  if (k == 0) report.add(Rule::Service, "set", "no light-structure");
  if (k > dcount)
    report.add(Rule::Service, "set", "more light-structures (" + std::to_string(k) + ") than destinations");

  std::map<std::size_t, std::size_t> per_wavelength;
  for (const auto& ls : set.structures) ++per_wavelength[ls.wavelength];
  for (const auto& [w, count] : per_wavelength)
    if (count > 1)
      report.add(Rule::SingleWavelength, "λ" + std::to_string(w), "wavelength shared by several structures");

  for (const auto& ls : set.structures) detail::check_structure(net, ms, ls, report);

  std::size_t source_out = 0;
  std::vector<std::size_t> dest_in(dcount, 0);
  for (const auto& ls : set.structures) {
    for (const auto& l : ls.links) {
      if (l.from == ms.source) ++source_out;
      auto it = std::lower_bound(ms.destinations.begin(), ms.destinations.end(), l.to);
      if (it != ms.destinations.end() && *it == l.to) ++dest_in[it - ms.destinations.begin()];
    }
  }
  if (source_out < 1 || source_out > dcount)
    report.add(Rule::Service, "source " + net.name(ms.source),
               "emits " + std::to_string(source_out) + " links, expected 1.." + std::to_string(dcount));
  for (std::size_t i = 0; i < dcount; ++i) {
    const std::string where = "destination " + net.name(ms.destinations[i]);
    if (dest_in[i] < 1) report.add(Rule::Service, where, "not spanned by any structure");
    if (dcount >= 2 && dest_in[i] > dcount - 1)
      report.add(Rule::Service, where,
                 "spanned by " + std::to_string(dest_in[i]) + " incoming links, at most " +
                     std::to_string(dcount - 1) + " allowed");
  }
  return report;
}

/// Full light-hierarchy validation. Violations are data; nothing throws for
/// ids that resolve in `net`.
inline ValidationReport validate(const Network& net, const LightStructureSet& set) {
  ValidationReport report = check_structure_rules(net, set);
  const auto& ms = set.session;
  const std::size_t n = net.node_count();

  std::vector<char> reached(n, 0);
  for (const auto& ls : set.structures) {
    const auto seen = detail::reachable_nodes(n, ls.root, ls.links);
    const std::string tag = "λ" + std::to_string(ls.wavelength);
    for (const auto& l : ls.links) {
      if (l.from >= n || l.to >= n) continue;
      if (!seen[l.from])
        report.add(Rule::Connectivity, tag + " " + detail::link_label(net, l), "link unreachable from the root");
      else
        reached[l.to] = 1;
    }
  }
  for (NodeId d : ms.destinations)
    if (!reached[d]) report.add(Rule::Connectivity, "destination " + net.name(d), "not reachable from the source");

  if (!set.structures.empty() && !detail::commodity_flow_exists(net, set))
    report.add(Rule::Connectivity, "set", "no commodity flow delivers one unit to every destination");
  return report;
}

inline std::int64_t cost(const Network& net, const LightStructure& ls) {
  std::int64_t total = 0;
  for (const auto& l : ls.links) {
    auto id = net.link_id(l.from, l.to);
    if (!id) throw InputError("link " + detail::link_label(net, l) + " is not a fiber of the network");
    total += net.link_cost(*id);
  }
  return total;
}

inline std::int64_t cost(const Network& net, const LightStructureSet& set) {
  std::int64_t total = 0;
  for (const auto& ls : set.structures) total += cost(net, ls);
  return total;
}

/// True when no node is entered twice: a light-tree.
inline bool is_light_tree(const LightStructure& ls) {
  std::map<NodeId, std::size_t> in;
  for (const auto& l : ls.links)
    if (++in[l.to] > 1) return false;
  return true;
}

/// MI nodes entered by two or more links: the Cross Pair Switching points.
inline std::vector<NodeId> cps_nodes(const Network& net, const LightStructure& ls) {
  std::map<NodeId, std::size_t> in;
  for (const auto& l : ls.links) ++in[l.to];
  std::vector<NodeId> out;
  for (const auto& [node, count] : in)
    if (count >= 2 && node < net.node_count() && net.kind(node) == NodeKind::MI) out.push_back(node);
  return out;
}

inline bool uses_cps(const Network& net, const LightStructureSet& set) {
  return std::any_of(set.structures.begin(), set.structures.end(),
                     [&](const LightStructure& ls) { return !cps_nodes(net, ls).empty(); });
}

namespace detail {

// Writes a structure as nested node/link enumeration. Each visit of a node
// lists the links that leave it on that visit. A node entered once (or any MC
// node) lists all of its remaining links on the first visit; an MI node
// entered several times forwards at most one link per visit, mirroring port
// pairing. Pairings are searched in canonical order until every reachable
// link is written exactly once.
class StructureWriter {
 public:
  StructureWriter(const Network& net, const LightStructure& ls) : net_(net), ls_(ls) {
    const std::size_t n = net.node_count();
    in_count_.assign(n, 0);
    for (const auto& l : ls.links) ++in_count_[l.to];
  }

  std::string write() {
    std::vector<std::size_t> choices;
    std::vector<std::size_t> options;
    std::string best;
    bool have_best = false;
    for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
      options.clear();
      std::string text;
      bool complete = run(choices, options, text);
      if (!have_best) {
        best = text;
        have_best = true;
      }
      if (complete) return text;
      // Odometer step over the decision points seen in this run.
      choices.resize(options.size(), 0);
      std::size_t last = options.size();
      while (last > 0 && choices[last - 1] + 1 >= options[last - 1]) --last;
      if (last == 0) return best;
      choices.resize(last);
      ++choices[last - 1];
    }
    return best;
  }

 private:
  static constexpr std::size_t kMaxAttempts = 20000;

  // Builds the text for one pairing. Returns true when every link reachable
  // from the root was written.
  bool run(const std::vector<std::size_t>& choices, std::vector<std::size_t>& options, std::string& text) {
    const std::size_t n = net_.node_count();
    remaining_.assign(n, {});
    for (const auto& l : ls_.links)
      if (l.from < n && l.to < n) remaining_[l.from].push_back(l.to);
    for (auto& r : remaining_) std::sort(r.begin(), r.end());
    decision_ = 0;
    choices_ = &choices;
    options_ = &options;

    std::ostringstream os;
    os << '(';
    visit(ls_.root, os);
    const auto seen = reachable_nodes(n, ls_.root, ls_.links);
    bool complete = true;
    for (NodeId v = 0; v < n; ++v)
      if (seen[v] && !remaining_[v].empty()) complete = false;
    // Whatever the root cannot reach is written as extra top-level groups.
    for (;;) {
      NodeId start = n;
      for (NodeId v = 0; v < n && start == n; ++v)
        if (!remaining_[v].empty()) start = v;
      if (start == n) break;
      os << ',';
      visit(start, os, /*take_all=*/true);
    }
    os << ')';
    text = os.str();
    return complete;
  }

  void visit(NodeId v, std::ostringstream& os, bool take_all = false) {
    os << net_.name(v);
    auto& rem = remaining_[v];
    if (rem.empty()) return;
    std::vector<NodeId> taken;
    if (take_all || v == ls_.root || in_count_[v] <= 1 || net_.kind(v) == NodeKind::MC) {
      taken.swap(rem);
    } else {
      // One forwarded link per visit, or none (the last option).
      std::vector<NodeId> distinct = rem;
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      const std::size_t count = distinct.size() + 1;
      std::size_t pick = decision_ < choices_->size() ? (*choices_)[decision_] : 0;
      options_->push_back(count);
      ++decision_;
      if (pick >= count) pick = 0;
      if (pick < distinct.size()) {
        taken.push_back(distinct[pick]);
        rem.erase(std::find(rem.begin(), rem.end(), distinct[pick]));
      }
    }
    if (taken.empty()) return;
    os << '(';
    for (std::size_t i = 0; i < taken.size(); ++i) {
      if (i) os << ',';
      os << "l_" << net_.name(v) << net_.name(taken[i]) << ',';
      visit(taken[i], os);
    }
    os << ')';
  }

  const Network& net_;
  const LightStructure& ls_;
  std::vector<std::size_t> in_count_;
  std::vector<std::vector<NodeId>> remaining_;
  std::size_t decision_ = 0;
  const std::vector<std::size_t>* choices_ = nullptr;
  std::vector<std::size_t>* options_ = nullptr;
};

class StructureReader {
 public:
  StructureReader(const Network& net, std::string_view text, std::size_t line)
      : net_(net), text_(text), line_(line) {}

  LightStructure read(std::size_t wavelength) {
    LightStructure ls;
    ls.wavelength = wavelength;
    expect('(');
    ls.root = node(ls.links);
    while (peek() == ',') {
      ++pos_;
      node(ls.links);
    }
    expect(')');
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return ls;
  }

 private:
  NodeId node(std::vector<Link>& links) {
    NodeId v = resolve(token());
    if (peek() == '(') {
      ++pos_;
      for (;;) {
        std::string label(token());
        expect(',');
        NodeId child = node(links);
        const std::string want = "l_" + net_.name(v) + net_.name(child);
        if (label != want) fail("link label '" + label + "' does not match '" + want + "'");
        if (!net_.link_id(v, child)) fail("no fiber between '" + net_.name(v) + "' and '" + net_.name(child) + "'");
        links.push_back({v, child});
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
    }
    return v;
  }

  NodeId resolve(std::string_view id) {
    auto n = net_.find(id);
    if (!n) fail("unknown node '" + std::string(id) + "'");
    return *n;
  }

  std::string_view token() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ',' &&
           text_[pos_] != ' ' && text_[pos_] != '\t')
      ++pos_;
    if (start == pos_) fail("expected an identifier");
    return text_.substr(start, pos_ - start);
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw InputError(what + " at column " + std::to_string(pos_ + 1), line_);
  }

  const Network& net_;
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Nested enumeration, e.g. "(s(l_s1,1(l_12,2)))". Children are ordered by
/// canonical node index. Links the root cannot reach follow as extra
/// comma-separated top-level groups.
inline std::string serialize(const Network& net, const LightStructure& ls) {
  return detail::StructureWriter(net, ls).write();
}

inline LightStructure parse_structure(const Network& net, std::string_view text, std::size_t wavelength = 0,
                                      std::size_t line = 0) {
  return detail::StructureReader(net, text, line).read(wavelength);
}

/// One line per structure: "λ<k>: <enumeration>".
inline std::string dump(const Network& net, const LightStructureSet& set) {
  std::string out;
  for (const auto& ls : set.structures)
    out += "λ" + std::to_string(ls.wavelength) + ": " + serialize(net, ls) + "\n";
  return out;
}

/// Reads a dump written by `dump`. Lines may also start with an ASCII 'L'
/// instead of 'λ'; '#' starts a comment.
inline LightStructureSet parse_dump(const Network& net, const MulticastSession& ms, std::string_view text) {
  LightStructureSet set{ms, {}};
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) line.remove_suffix(1);
    if (line.empty()) continue;
    constexpr std::string_view lambda = "λ";
    if (line.starts_with(lambda)) line.remove_prefix(lambda.size());
    else if (line.front() == 'L') line.remove_prefix(1);
    else throw InputError("expected 'λ<k>: <structure>'", line_no);
    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw InputError("missing ':' after wavelength", line_no);
    auto k = detail::parse_int(line.substr(0, colon));
    if (!k || *k < 0) throw InputError("bad wavelength index", line_no);
    set.structures.push_back(
        parse_structure(net, line.substr(colon + 1), static_cast<std::size_t>(*k), line_no));
  }
  return set;
}

}  // namespace lumharch
