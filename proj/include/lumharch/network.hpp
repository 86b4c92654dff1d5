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
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lumharch {

using NodeId = std::size_t;
using LinkId = std::size_t;

/// Raised for malformed user input: network files, structure dumps, solution
/// files, unknown names. `line()` is 1-based, or 0 when no line applies.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class NodeKind { MI, MC };

inline std::string_view to_string(NodeKind kind) { return kind == NodeKind::MI ? "MI" : "MC"; }

struct Edge {
  NodeId u;
  NodeId v;
  std::int64_t cost;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A directed fiber link.
struct Link {
  NodeId from;
  NodeId to;

  friend auto operator<=>(const Link&, const Link&) = default;
};

namespace detail {

inline bool valid_node_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
           return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
         });
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  if (s.empty() || s.size() > 18) return std::nullopt;
  std::int64_t value = 0;
  std::size_t i = 0;
  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    i = 1;
    if (s.size() == 1) return std::nullopt;
  }
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    value = value * 10 + (s[i] - '0');
  }
  return negative ? -value : value;
}

}  // namespace detail

/// Undirected sparse-splitting WDM topology. Every edge i carries two directed
/// links: link 2i runs u->v and link 2i+1 runs v->u, both at the edge cost.
/// Node and edge order are canonical and drive every dense index downstream.
class Network {
 public:
  struct NodeSpec {
    std::string name;
    NodeKind kind = NodeKind::MI;
  };

  struct EdgeSpec {
    std::string u;
    std::string v;
    std::int64_t cost = 1;
  };

  Network() = default;

  /// Validating constructor. `node_lines`/`edge_lines`, when given, map each
  /// node/edge to its source line so errors can point at it.
  Network(std::vector<NodeSpec> nodes, std::vector<EdgeSpec> edges, std::size_t wavelengths,
          std::vector<std::size_t> node_lines = {}, std::vector<std::size_t> edge_lines = {},
          std::size_t wavelength_line = 0) {
    auto node_line = [&](std::size_t i) { return i < node_lines.size() ? node_lines[i] : 0; };
    auto edge_line = [&](std::size_t i) { return i < edge_lines.size() ? edge_lines[i] : 0; };

    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!detail::valid_node_name(nodes[i].name))
        throw InputError("invalid node id '" + nodes[i].name + "' (use letters and digits)",
                         node_line(i));
      if (!index_.emplace(nodes[i].name, i).second)
        throw InputError("duplicate node id '" + nodes[i].name + "'", node_line(i));
      names_.push_back(nodes[i].name);
      kinds_.push_back(nodes[i].kind);
    }
    if (names_.size() < 2) throw InputError("network needs at least two nodes");
    if (wavelengths == 0) throw InputError("wavelength count must be positive", wavelength_line);
    wavelengths_ = wavelengths;

    out_.assign(names_.size(), {});
    in_.assign(names_.size(), {});
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto& e = edges[i];
      auto u = index_.find(e.u);
      auto v = index_.find(e.v);
      if (u == index_.end()) throw InputError("edge endpoint '" + e.u + "' is not a declared node", edge_line(i));
      if (v == index_.end()) throw InputError("edge endpoint '" + e.v + "' is not a declared node", edge_line(i));
      if (u->second == v->second) throw InputError("self-loop on '" + e.u + "'", edge_line(i));
      if (e.cost <= 0) throw InputError("edge cost must be a positive integer", edge_line(i));
      if (link_id(u->second, v->second))
        throw InputError("duplicate edge between '" + e.u + "' and '" + e.v + "'", edge_line(i));
      const LinkId forward = links_.size();
      edges_.push_back({u->second, v->second, e.cost});
      links_.push_back({u->second, v->second});
      links_.push_back({v->second, u->second});
      out_[u->second].push_back(forward);
      in_[v->second].push_back(forward);
      out_[v->second].push_back(forward + 1);
      in_[u->second].push_back(forward + 1);
      link_index_.emplace(key(u->second, v->second), forward);
      link_index_.emplace(key(v->second, u->second), forward + 1);
    }
    if (!connected()) throw InputError("network is not connected");
  }

  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t link_count() const { return links_.size(); }
  std::size_t wavelengths() const { return wavelengths_; }

  const std::string& name(NodeId n) const { return names_.at(n); }
  NodeKind kind(NodeId n) const { return kinds_.at(n); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkId id) const { return links_.at(id); }
  std::int64_t link_cost(LinkId id) const { return edges_.at(id / 2).cost; }

  std::optional<NodeId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  NodeId index_of(std::string_view name) const {
    if (auto n = find(name)) return *n;
    throw InputError("unknown node '" + std::string(name) + "'");
  }

  std::optional<LinkId> link_id(NodeId from, NodeId to) const {
    auto it = link_index_.find(key(from, to));
    if (it == link_index_.end()) return std::nullopt;
    return it->second;
  }

  /// Outgoing / incoming link ids of `n`, in canonical link order.
  const std::vector<LinkId>& out_links(NodeId n) const { return out_.at(n); }
  const std::vector<LinkId>& in_links(NodeId n) const { return in_.at(n); }

  std::size_t degree(NodeId n) const { return out_.at(n).size(); }
  std::size_t degree(std::string_view name) const { return degree(index_of(name)); }

  /// Copy with the given nodes switched to MC; every other node keeps its kind.
  Network with_splitters(const std::vector<std::string>& splitters) const {
    Network copy = *this;
    for (const auto& s : splitters) copy.kinds_[index_of(s)] = NodeKind::MC;
    return copy;
  }

  Network with_wavelengths(std::size_t wavelengths) const {
    if (wavelengths == 0) throw InputError("wavelength count must be positive");
    Network copy = *this;
    copy.wavelengths_ = wavelengths;
    return copy;
  }

  friend bool operator==(const Network& a, const Network& b) {
    return a.names_ == b.names_ && a.kinds_ == b.kinds_ && a.edges_ == b.edges_ &&
           a.wavelengths_ == b.wavelengths_;
  }

 private:
  static std::uint64_t key(NodeId a, NodeId b) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
  }

  bool connected() const {
    std::vector<char> seen(names_.size(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      NodeId n = stack.back();
      stack.pop_back();
      for (LinkId l : out_[n]) {
        NodeId m = links_[l].to;
        if (!seen[m]) {
          seen[m] = 1;
          ++count;
          stack.push_back(m);
        }
      }
    }
    return count == names_.size();
  }

  std::vector<std::string> names_;
  std::vector<NodeKind> kinds_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Edge> edges_;
  std::vector<Link> links_;
  std::unordered_map<std::uint64_t, LinkId> link_index_;
  std::vector<std::vector<LinkId>> out_;
  std::vector<std::vector<LinkId>> in_;
  std::size_t wavelengths_ = 1;
};

/// Parses the line-oriented topology format:
///
///     # comment
///     NODE <id> MI|MC
///     EDGE <id> <id> <positive cost>
///     WAVELENGTHS <positive count>
///
/// NODE lines may appear anywhere before the EDGE lines that use them.
inline Network parse_network(std::string_view text) {
  std::vector<Network::NodeSpec> nodes;
  std::vector<Network::EdgeSpec> edges;
  std::vector<std::size_t> node_lines;
  std::vector<std::size_t> edge_lines;
  std::optional<std::size_t> wavelengths;
  std::size_t wavelength_line = 0;
  std::unordered_map<std::string, std::size_t> declared;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = detail::split_ws(line);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (tok[0] == "NODE") {
      if (tok.size() != 3) throw InputError("expected 'NODE <id> MI|MC'", line_no);
      NodeKind kind;
      if (tok[2] == "MI") kind = NodeKind::MI;
      else if (tok[2] == "MC") kind = NodeKind::MC;
      else throw InputError("node kind must be MI or MC", line_no);
      std::string id(tok[1]);
      if (!declared.emplace(id, line_no).second) throw InputError("duplicate node id '" + id + "'", line_no);
      nodes.push_back({id, kind});
      node_lines.push_back(line_no);
    } else if (tok[0] == "EDGE") {
      if (tok.size() != 4) throw InputError("expected 'EDGE <id> <id> <cost>'", line_no);
      for (int k = 1; k <= 2; ++k)
        if (!declared.count(std::string(tok[k])))
          throw InputError("edge endpoint '" + std::string(tok[k]) + "' is not a declared node", line_no);
      auto cost = detail::parse_int(tok[3]);
      if (!cost || *cost <= 0) throw InputError("edge cost must be a positive integer", line_no);
      edges.push_back({std::string(tok[1]), std::string(tok[2]), *cost});
      edge_lines.push_back(line_no);
    } else if (tok[0] == "WAVELENGTHS") {
      if (tok.size() != 2) throw InputError("expected 'WAVELENGTHS <count>'", line_no);
      if (wavelengths) throw InputError("WAVELENGTHS given twice", line_no);
      auto w = detail::parse_int(tok[1]);
      if (!w || *w <= 0) throw InputError("wavelength count must be a positive integer", line_no);
      wavelengths = static_cast<std::size_t>(*w);
      wavelength_line = line_no;
    } else {
      throw InputError("unknown directive '" + std::string(tok[0]) + "'", line_no);
    }
    if (end == text.size()) break;
  }
  if (!wavelengths) throw InputError("missing WAVELENGTHS line");
  return Network(std::move(nodes), std::move(edges), *wavelengths, std::move(node_lines),
                 std::move(edge_lines), wavelength_line);
}

inline std::string serialize_network(const Network& net) {
  std::ostringstream os;
  for (NodeId n = 0; n < net.node_count(); ++n)
    os << "NODE " << net.name(n) << ' ' << to_string(net.kind(n)) << '\n';
  for (const auto& e : net.edges())
    os << "EDGE " << net.name(e.u) << ' ' << net.name(e.v) << ' ' << e.cost << '\n';
  os << "WAVELENGTHS " << net.wavelengths() << '\n';
  return os.str();
}

/// ms(s, D). Destinations are kept sorted by canonical index.
struct MulticastSession {
  NodeId source = 0;
  std::vector<NodeId> destinations;

  bool is_destination(NodeId n) const {
    return std::binary_search(destinations.begin(), destinations.end(), n);
  }

  friend bool operator==(const MulticastSession&, const MulticastSession&) = default;
};

inline MulticastSession make_session(const Network& net, NodeId source, std::vector<NodeId> dests) {
  if (source >= net.node_count()) throw InputError("source is not a node of the network");
  std::sort(dests.begin(), dests.end());
  if (std::adjacent_find(dests.begin(), dests.end()) != dests.end())
    throw InputError("duplicate destination");
  if (dests.empty()) throw InputError("session needs at least one destination");
  for (NodeId d : dests) {
    if (d >= net.node_count()) throw InputError("destination is not a node of the network");
    if (d == source) throw InputError("source '" + net.name(source) + "' cannot be a destination");
  }
  return {source, std::move(dests)};
}

inline MulticastSession make_session(const Network& net, std::string_view source,
                                     const std::vector<std::string>& dests) {
  std::vector<NodeId> ids;
  for (const auto& d : dests) ids.push_back(net.index_of(d));
  return make_session(net, net.index_of(source), std::move(ids));
}

inline std::string format_destinations(const Network& net, const MulticastSession& ms,
                                       char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < ms.destinations.size(); ++i) {
    if (i) out += sep;
    out += net.name(ms.destinations[i]);
  }
  return out;
}

}  // namespace lumharch
