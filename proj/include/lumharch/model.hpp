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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lumharch/hierarchy.hpp"
#include "lumharch/network.hpp"

namespace lumharch {

/// LH: light-hierarchies (Cross Pair Switching allowed).
/// LT: light-trees (every node entered at most once per wavelength).
enum class Mode { LH, LT };

inline std::string_view to_string(Mode m) { return m == Mode::LH ? "LH" : "LT"; }

inline std::optional<Mode> mode_from_name(std::string_view s) {
  if (s == "lh" || s == "LH") return Mode::LH;
  if (s == "lt" || s == "LT") return Mode::LT;
  return std::nullopt;
}

enum class VarKind { Link, Flow, Wavelength };

struct Variable {
  VarKind kind;
  LinkId link = 0;  // unused for Wavelength
  std::size_t wavelength = 0;
  std::int64_t lower = 0;
  std::int64_t upper = 1;
  std::string name;
};

enum class Sense { LessEqual, GreaterEqual, Equal };

/// Constraint families, named by what they enforce.
enum class Family {
  SourceNoInput,        // nothing enters the source
  SourceFanOut,         // 1 <= links leaving the source <= |D|
  DestinationFanIn,     // 1 <= links entering a destination (<= |D|-1 when |D| >= 2)
  SplitterInput,        // MC node: at most one incoming link per wavelength
  SplitterOutput,       // MC node: outgoing only when entered
  TapContinue,          // MI node: outgoing <= incoming per wavelength
  NoStrayLeaf,          // non-member: outgoing >= incoming per wavelength
  LinkNeedsWavelength,  // w(k) >= L(m,n,k)
  WavelengthNeedsLink,  // w(k) <= sum L(., ., k)
  TreeInput,            // LT: at most one incoming link per node and wavelength
  TreeOutput,           // LT: MI node forwards at most one link per wavelength
  FlowSource,           // source emits |D| units of commodity
  FlowDestination,      // each destination absorbs exactly one unit overall
  FlowDestinationWave,  // ... and at most one unit on any single wavelength
  FlowConservation,     // non-members pass flow unchanged
  FlowNeedsLink,        // F >= L
  LinkCarriesFlow,      // F <= |D| L
};

inline bool is_flow_family(Family f) {
  return f == Family::FlowSource || f == Family::FlowDestination || f == Family::FlowDestinationWave ||
         f == Family::FlowConservation || f == Family::FlowNeedsLink || f == Family::LinkCarriesFlow;
}

struct Term {
  std::size_t var;
  std::int64_t coef;

  friend bool operator==(const Term&, const Term&) = default;
};

struct Constraint {
  std::string name;
  Family family;
  std::vector<Term> terms;
  Sense sense;
  std::int64_t rhs;
};

/// Integer linear program for one (network, session, mode) instance.
/// Variable order: all L(link, k) wavelength-major, then F(link, k) in the
/// same order when connectivity is on, then w(k).
struct IlpModel {
  Mode mode = Mode::LH;
  bool connectivity = true;
  std::int64_t delta = 2;
  std::size_t wavelengths = 1;
  std::size_t node_count = 0;
  std::vector<Link> links;
  NodeId source = 0;
  std::vector<NodeId> destinations;

  std::vector<Variable> vars;
  std::vector<Constraint> constraints;
  std::vector<Term> objective;

  std::size_t link_var(LinkId l, std::size_t k) const { return k * links.size() + l; }

  std::optional<std::size_t> flow_var(LinkId l, std::size_t k) const {
    if (!connectivity) return std::nullopt;
    return wavelengths * links.size() + k * links.size() + l;
  }

  std::size_t wavelength_var(std::size_t k) const {
    return wavelengths * links.size() * (connectivity ? 2 : 1) + k;
  }

  /// True for the variables branch-and-bound must make integral (L and w).
  bool is_structural(std::size_t var) const { return vars[var].kind != VarKind::Flow; }
};

struct Assignment {
  std::vector<std::int64_t> values;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

namespace detail {

class ModelBuilder {
 public:
  ModelBuilder(const Network& net, const MulticastSession& ms, Mode mode, bool connectivity)
      : net_(net), ms_(ms) {
    m_.mode = mode;
    m_.connectivity = connectivity;
    m_.wavelengths = net.wavelengths();
    m_.delta = static_cast<std::int64_t>(net.wavelengths()) + 1;
    m_.node_count = net.node_count();
    m_.links = net.links();
    m_.source = ms.source;
    m_.destinations = ms.destinations;
  }

  IlpModel build() {
    declare_variables();
    objective();
    structure_constraints();
    if (m_.mode == Mode::LT) tree_constraints();
    if (m_.connectivity) flow_constraints();
    return std::move(m_);
  }

 private:
  std::string node(NodeId n) const { return net_.name(n); }
  std::string link_suffix(LinkId l) const { return node(m_.links[l].from) + "_" + node(m_.links[l].to); }
  std::size_t W() const { return m_.wavelengths; }
  std::int64_t D() const { return static_cast<std::int64_t>(ms_.destinations.size()); }

  void declare_variables() {
    const std::size_t nl = m_.links.size();
    for (std::size_t k = 0; k < W(); ++k)
      for (LinkId l = 0; l < nl; ++l)
        m_.vars.push_back({VarKind::Link, l, k, 0, 1, "L_" + link_suffix(l) + "_" + std::to_string(k)});
    if (m_.connectivity)
      for (std::size_t k = 0; k < W(); ++k)
        for (LinkId l = 0; l < nl; ++l)
          m_.vars.push_back({VarKind::Flow, l, k, 0, D(), "F_" + link_suffix(l) + "_" + std::to_string(k)});
    for (std::size_t k = 0; k < W(); ++k)
      m_.vars.push_back({VarKind::Wavelength, 0, k, 0, 1, "w_" + std::to_string(k)});
  }

  void objective() {
    for (std::size_t k = 0; k < W(); ++k)
      for (LinkId l = 0; l < m_.links.size(); ++l)
        m_.objective.push_back({m_.link_var(l, k), m_.delta * net_.link_cost(l)});
    for (std::size_t k = 0; k < W(); ++k) m_.objective.push_back({m_.wavelength_var(k), 1});
  }

  // Adds coef * (sum of var(l, k) over the given links).
  template <typename VarOf>
  static void add_sum(std::vector<Term>& terms, const std::vector<LinkId>& links, std::int64_t coef, VarOf var) {
    for (LinkId l : links) terms.push_back({var(l), coef});
  }

  void add(std::string name, Family family, std::vector<Term> terms, Sense sense, std::int64_t rhs) {
    m_.constraints.push_back({std::move(name), family, std::move(terms), sense, rhs});
  }

  auto L(std::size_t k) const {
    return [this, k](LinkId l) { return m_.link_var(l, k); };
  }
  auto F(std::size_t k) const {
    return [this, k](LinkId l) { return *m_.flow_var(l, k); };
  }

  void structure_constraints() {
    const NodeId s = ms_.source;
    const auto& out_s = net_.out_links(s);
    const auto& in_s = net_.in_links(s);

    std::vector<Term> t;
    for (std::size_t k = 0; k < W(); ++k) add_sum(t, in_s, 1, L(k));
    add("src_in", Family::SourceNoInput, t, Sense::Equal, 0);

    t.clear();
    for (std::size_t k = 0; k < W(); ++k) add_sum(t, out_s, 1, L(k));
    add("src_out_min", Family::SourceFanOut, t, Sense::GreaterEqual, 1);
    add("src_out_max", Family::SourceFanOut, t, Sense::LessEqual, D());

    for (NodeId d : ms_.destinations) {
      t.clear();
      for (std::size_t k = 0; k < W(); ++k) add_sum(t, net_.in_links(d), 1, L(k));
      add("dst_in_min_" + node(d), Family::DestinationFanIn, t, Sense::GreaterEqual, 1);
      // With a single destination the upper bound |D|-1 = 0 would contradict
      // the lower bound, so it is only imposed for |D| >= 2.
      if (D() >= 2) add("dst_in_max_" + node(d), Family::DestinationFanIn, t, Sense::LessEqual, D() - 1);
    }

    for (NodeId m = 0; m < net_.node_count(); ++m) {
      if (m == s) continue;
      const auto& in = net_.in_links(m);
      const auto& out = net_.out_links(m);
      const auto deg = static_cast<std::int64_t>(net_.degree(m));
      for (std::size_t k = 0; k < W(); ++k) {
        const std::string suffix = node(m) + "_" + std::to_string(k);
        if (net_.kind(m) == NodeKind::MC) {
          t.clear();
          add_sum(t, in, 1, L(k));
          add("mc_in_" + suffix, Family::SplitterInput, t, Sense::LessEqual, 1);
          t.clear();
          add_sum(t, out, 1, L(k));
          add_sum(t, in, -deg, L(k));
          add("mc_out_" + suffix, Family::SplitterOutput, t, Sense::LessEqual, 0);
        } else {
          t.clear();
          add_sum(t, out, 1, L(k));
          add_sum(t, in, -1, L(k));
          add("mi_out_" + suffix, Family::TapContinue, t, Sense::LessEqual, 0);
        }
        if (!ms_.is_destination(m)) {
          t.clear();
          add_sum(t, out, 1, L(k));
          add_sum(t, in, -1, L(k));
          add("leaf_" + suffix, Family::NoStrayLeaf, t, Sense::GreaterEqual, 0);
        }
      }
    }

    for (std::size_t k = 0; k < W(); ++k) {
      for (LinkId l = 0; l < m_.links.size(); ++l)
        add("use_" + link_suffix(l) + "_" + std::to_string(k), Family::LinkNeedsWavelength,
            {{m_.wavelength_var(k), 1}, {m_.link_var(l, k), -1}}, Sense::GreaterEqual, 0);
      t.clear();
      t.push_back({m_.wavelength_var(k), 1});
      for (LinkId l = 0; l < m_.links.size(); ++l) t.push_back({m_.link_var(l, k), -1});
      add("any_" + std::to_string(k), Family::WavelengthNeedsLink, t, Sense::LessEqual, 0);
    }
  }

  void tree_constraints() {
    std::vector<Term> t;
    for (NodeId m = 0; m < net_.node_count(); ++m) {
      if (m == ms_.source) continue;
      for (std::size_t k = 0; k < W(); ++k) {
        const std::string suffix = node(m) + "_" + std::to_string(k);
        t.clear();
        add_sum(t, net_.in_links(m), 1, L(k));
        add("tree_in_" + suffix, Family::TreeInput, t, Sense::LessEqual, 1);
        if (net_.kind(m) == NodeKind::MI) {
          t.clear();
          add_sum(t, net_.out_links(m), 1, L(k));
          add("tree_out_" + suffix, Family::TreeOutput, t, Sense::LessEqual, 1);
        }
      }
    }
  }

  void flow_constraints() {
    const NodeId s = ms_.source;
    std::vector<Term> t;
    for (std::size_t k = 0; k < W(); ++k) add_sum(t, net_.out_links(s), 1, F(k));
    add("flow_src", Family::FlowSource, t, Sense::Equal, D());

    for (NodeId d : ms_.destinations) {
      t.clear();
      for (std::size_t k = 0; k < W(); ++k) {
        add_sum(t, net_.in_links(d), 1, F(k));
        add_sum(t, net_.out_links(d), -1, F(k));
      }
      add("flow_dst_" + node(d), Family::FlowDestination, t, Sense::Equal, 1);
      for (std::size_t k = 0; k < W(); ++k) {
        t.clear();
        add_sum(t, net_.out_links(d), 1, F(k));
        add_sum(t, net_.in_links(d), -1, F(k));
        const std::string suffix = node(d) + "_" + std::to_string(k);
        add("flow_dst_lo_" + suffix, Family::FlowDestinationWave, t, Sense::GreaterEqual, -1);
        add("flow_dst_hi_" + suffix, Family::FlowDestinationWave, t, Sense::LessEqual, 0);
      }
    }

    for (NodeId m = 0; m < net_.node_count(); ++m) {
      if (m == s || ms_.is_destination(m)) continue;
      for (std::size_t k = 0; k < W(); ++k) {
        t.clear();
        add_sum(t, net_.in_links(m), 1, F(k));
        add_sum(t, net_.out_links(m), -1, F(k));
        add("flow_cons_" + node(m) + "_" + std::to_string(k), Family::FlowConservation, t, Sense::Equal, 0);
      }
    }

    for (std::size_t k = 0; k < W(); ++k) {
      for (LinkId l = 0; l < m_.links.size(); ++l) {
        const std::string suffix = link_suffix(l) + "_" + std::to_string(k);
        const auto f = *m_.flow_var(l, k);
        const auto x = m_.link_var(l, k);
        add("flow_min_" + suffix, Family::FlowNeedsLink, {{f, 1}, {x, -1}}, Sense::GreaterEqual, 0);
        add("flow_max_" + suffix, Family::LinkCarriesFlow, {{f, 1}, {x, -D()}}, Sense::LessEqual, 0);
      }
    }
  }

  const Network& net_;
  const MulticastSession& ms_;
  IlpModel m_;
};

}  // namespace detail

/// Builds the ILP for `ms` on `net` using every wavelength of `net`.
/// Objective: delta * (total link cost) + (wavelengths used), delta = |W| + 1.
inline IlpModel build_model(const Network& net, const MulticastSession& ms, Mode mode, bool connectivity = true) {
  return detail::ModelBuilder(net, ms, mode, connectivity).build();
}

inline std::int64_t evaluate(const std::vector<Term>& terms, const Assignment& a) {
  std::int64_t total = 0;
  for (const auto& t : terms) total += t.coef * a.values.at(t.var);
  return total;
}

inline std::int64_t objective_value(const IlpModel& model, const Assignment& a) {
  return evaluate(model.objective, a);
}

/// (total link cost, wavelengths used) recovered from an objective value.
struct ObjectiveParts {
  std::int64_t cost;
  std::int64_t wavelengths;
};

inline ObjectiveParts split_objective(const IlpModel& model, std::int64_t objective) {
  return {objective / model.delta, objective % model.delta};
}

struct ConstraintViolation {
  std::size_t index;  // into constraints, or vars for bound violations
  std::string name;
  bool bound = false;
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  std::int64_t slack = 0;  // signed amount by which the constraint is missed
};

struct FeasibilityReport {
  std::vector<ConstraintViolation> violations;

  bool ok() const { return violations.empty(); }

  bool violates(const IlpModel& model, Family family) const {
    for (const auto& v : violations)
      if (!v.bound && model.constraints[v.index].family == family) return true;
    return false;
  }
};

/// Evaluates every bound and constraint exactly.
inline FeasibilityReport check_feasible(const IlpModel& model, const Assignment& a) {
  FeasibilityReport report;
  if (a.values.size() != model.vars.size())
    throw InputError("assignment covers " + std::to_string(a.values.size()) + " of " +
                     std::to_string(model.vars.size()) + " variables");
  for (std::size_t i = 0; i < model.vars.size(); ++i) {
    const auto& v = model.vars[i];
    const auto x = a.values[i];
    if (x < v.lower) report.violations.push_back({i, v.name, true, x, v.lower, v.lower - x});
    if (x > v.upper) report.violations.push_back({i, v.name, true, x, v.upper, x - v.upper});
  }
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    const auto& c = model.constraints[i];
    const auto lhs = evaluate(c.terms, a);
    std::int64_t miss = 0;
    switch (c.sense) {
      case Sense::LessEqual: miss = lhs > c.rhs ? lhs - c.rhs : 0; break;
      case Sense::GreaterEqual: miss = lhs < c.rhs ? c.rhs - lhs : 0; break;
      case Sense::Equal: miss = lhs - c.rhs; break;
    }
    if (miss != 0) report.violations.push_back({i, c.name, false, lhs, c.rhs, miss});
  }
  return report;
}

/// One structure per wavelength k with w(k) = 1, holding the links with
/// L(., ., k) = 1, rooted at the session source.
inline LightStructureSet extract_structures(const IlpModel& model, const Assignment& a, const Network& net,
                                            const MulticastSession& ms) {
  (void)net;
  LightStructureSet set{ms, {}};
  for (std::size_t k = 0; k < model.wavelengths; ++k) {
    if (a.values.at(model.wavelength_var(k)) != 1) continue;
    LightStructure ls{k, ms.source, {}};
    for (LinkId l = 0; l < model.links.size(); ++l)
      if (a.values.at(model.link_var(l, k)) == 1) ls.links.push_back(model.links[l]);
    set.structures.push_back(std::move(ls));
  }
  return set;
}

/// L and w values of a structure set; flow variables are left at zero.
inline Assignment assignment_from_structures(const IlpModel& model, const Network& net, const LightStructureSet& set) {
  Assignment a{std::vector<std::int64_t>(model.vars.size(), 0)};
  for (const auto& ls : set.structures) {
    if (ls.wavelength >= model.wavelengths) throw InputError("structure wavelength outside the model");
    a.values[model.wavelength_var(ls.wavelength)] = 1;
    for (const auto& l : ls.links) {
      auto id = net.link_id(l.from, l.to);
      if (!id) throw InputError("structure uses a link that is not in the network");
      a.values[model.link_var(*id, ls.wavelength)] = 1;
    }
  }
  return a;
}

}  // namespace lumharch
