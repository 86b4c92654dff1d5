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

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>

#include "lumharch/hierarchy.hpp"
#include "lumharch/topologies.hpp"
#include "support.hpp"

using namespace lumharch;
using lumharch::testing::corpus_network;

namespace {

LightStructureSet load(const Network& net, std::string_view src, std::vector<std::string> dests,
                       std::string_view text) {
  return parse_dump(net, make_session(net, src, dests), text);
}

std::vector<Link> sorted(std::vector<Link> links) {
  std::sort(links.begin(), links.end());
  return links;
}

}  // namespace

TEST_CASE("validator corpus", "[hierarchy]") {
  for (const auto& c : testing::validator_corpus()) {
    DYNAMIC_SECTION(c.name) {
      auto net = corpus_network(c.topology);
      auto set = load(net, c.source, c.dests, c.dump);
      auto report = validate(net, set);
      INFO(report);
      if (c.expected) {
        CHECK_FALSE(report.ok());
        CHECK(report.has(*c.expected));
      } else {
        CHECK(report.ok());
      }
    }
  }
}

TEST_CASE("floating cycle passes the structure rules alone", "[hierarchy]") {
  auto net = builtin_topology("fig5");
  auto set = load(net, "s", {"d1", "d2", "d3"}, "λ0: (s(l_sd1,d1),d2(l_d2d3,d3(l_d3d2,d2)))\n");
  CHECK(check_structure_rules(net, set).ok());
  auto report = validate(net, set);
  CHECK(report.rules() == std::set<Rule>{Rule::Connectivity});
  CHECK(cost(net, set) == 3);
}

TEST_CASE("node rules", "[hierarchy]") {
  auto net = builtin_topology("fig3");
  SECTION("MC node accepts one input only") {
    auto mc = net.with_splitters({"3"});
    auto set = load(mc, "s", {"d1", "d2"}, testing::kFig3DrawnHierarchy);
    CHECK(validate(mc, set).has(Rule::NodeDegree));
  }
  SECTION("MC node may split") {
    auto mc = net.with_splitters({"3"});
    auto set = load(mc, "s", {"d1", "d2"}, "λ0: (s(l_s1,1(l_12,2(l_23,3(l_34,4(l_4d1,d1),l_3d2,d2)))))\n");
    CHECK(validate(mc, set).ok());
  }
  SECTION("root takes no input") {
    auto set = load(net, "s", {"d1"}, "λ0: (s(l_s1,1(l_1s,s,l_12,2(l_23,3(l_34,4(l_4d1,d1))))))\n");
    CHECK(validate(net, set).has(Rule::NodeDegree));
  }
  SECTION("non-member leaf is rejected") {
    auto set = load(net, "s", {"d2"}, "λ0: (s(l_s1,1(l_12,2(l_23,3(l_3d2,d2)))))\nλ1: (s(l_s1,1))\n");
    CHECK(validate(net, set).has(Rule::NodeDegree));
  }
  SECTION("MI destination may forward no more than it receives") {
    auto set = load(net, "s", {"d1", "d2"},
                    "λ0: (s(l_s1,1(l_12,2(l_23,3(l_3d2,d2(l_d23,3(l_34,4(l_4d1,d1))))))))\n");
    CHECK(validate(net, set).ok());
  }
  SECTION("wavelength beyond the network's count") {
    auto set = load(net, "s", {"d2"}, "λ2: (s(l_s1,1(l_12,2(l_23,3(l_3d2,d2)))))\n");
    CHECK(validate(net, set).has(Rule::SingleWavelength));
  }
}

TEST_CASE("session-level service rules", "[hierarchy]") {
  auto net = builtin_topology("fig3");
  SECTION("missing destination") {
    auto set = load(net, "s", {"d1", "d2"}, "λ0: (s(l_s1,1(l_12,2(l_23,3(l_3d2,d2)))))\n");
    CHECK(validate(net, set).has(Rule::Service));
  }
  SECTION("destination entered twice") {
    auto set = load(net, "s", {"d1", "d2"},
                    "λ0: (s(l_s1,1(l_12,2(l_23,3(l_34,4(l_4d1,d1(l_d15,5(l_53,3(l_3d2,d2)))))))))\n"
                    "λ1: (s(l_s1,1(l_12,2(l_23,3(l_35,5(l_5d1,d1))))))\n");
    CHECK(validate(net, set).has(Rule::Service));
  }
  SECTION("empty set") {
    LightStructureSet set{make_session(net, "s", {"d1"}), {}};
    CHECK(validate(net, set).has(Rule::Service));
  }
}

TEST_CASE("cost", "[hierarchy]") {
  auto net = builtin_topology("fig3");
  CHECK(cost(net, load(net, "s", {"d1", "d2"}, testing::kFig3DrawnHierarchy)) == 8);
  CHECK(cost(net, load(net, "s", {"d1", "d2"}, testing::kFig3LightTrees)) == 9);
  auto two = parse_network("NODE s MI\nNODE d MI\nEDGE s d 1\nWAVELENGTHS 1\n");
  CHECK(cost(two, load(two, "s", {"d"}, "λ0: (s(l_sd,d))\n")) == 1);

  auto fig5 = builtin_topology("fig5");
  CHECK(cost(fig5, load(fig5, "s", {"d3"}, "λ0: (s(l_sd1,d1(l_d1d2,d2(l_d2d3,d3))))\n")) == 5);
}

TEST_CASE("light-tree test and CPS detection", "[hierarchy]") {
  auto fig3 = builtin_topology("fig3");
  auto lh = load(fig3, "s", {"d1", "d2"}, testing::kFig3DrawnHierarchy).structures.at(0);
  auto trees = load(fig3, "s", {"d1", "d2"}, testing::kFig3LightTrees);
  CHECK_FALSE(is_light_tree(lh));
  CHECK(cps_nodes(fig3, lh) == std::vector<NodeId>{fig3.index_of("3")});
  for (const auto& t : trees.structures) {
    CHECK(is_light_tree(t));
    CHECK(cps_nodes(fig3, t).empty());
  }
  CHECK_FALSE(uses_cps(fig3, trees));

  auto fig4b = corpus_network("fig4b");
  auto rt = parse_structure(fig4b, "(s(l_s1,1(l_12,2(l_2d1,d1(l_d12,2(l_2d2,d2))))))");
  CHECK(cps_nodes(fig4b, rt) == std::vector<NodeId>{fig4b.index_of("2")});

  auto fig4a = corpus_network("fig4a");
  auto split = parse_structure(fig4a, testing::kFig4aStructure);
  CHECK(cps_nodes(fig4a, split) == std::vector<NodeId>{fig4a.index_of("4")});

  auto two = parse_network("NODE s MI\nNODE d MI\nEDGE s d 1\nWAVELENGTHS 1\n");
  CHECK(is_light_tree(parse_structure(two, "(s(l_sd,d))")));
}

TEST_CASE("serialize", "[hierarchy]") {
  auto fig4a = corpus_network("fig4a");
  auto ls = parse_structure(fig4a, testing::kFig4aStructure);
  CHECK(serialize(fig4a, ls) == testing::kFig4aStructure);

  auto two = parse_network("NODE s MI\nNODE d MI\nEDGE s d 1\nWAVELENGTHS 1\n");
  LightStructure single{0, 0, {Link{0, 1}}};
  CHECK(serialize(two, single) == "(s(l_sd,d))");

  auto fig4b = corpus_network("fig4b");
  const auto s1 = fig4b.index_of("s"), n1 = fig4b.index_of("1"), n2 = fig4b.index_of("2");
  const auto d1 = fig4b.index_of("d1"), d2 = fig4b.index_of("d2");
  LightStructure rt{0, s1, {{s1, n1}, {n1, n2}, {n2, d1}, {d1, n2}, {n2, d2}}};
  const auto text = serialize(fig4b, rt);
  CHECK_THAT(text, Catch::Matchers::ContainsSubstring("l_2d1"));
  CHECK_THAT(text, Catch::Matchers::ContainsSubstring("l_d12"));
  CHECK(sorted(parse_structure(fig4b, text).links) == sorted(rt.links));

  auto fig3 = builtin_topology("fig3");
  auto lh = load(fig3, "s", {"d1", "d2"}, testing::kFig3DrawnHierarchy);
  CHECK(parse_dump(fig3, lh.session, dump(fig3, lh)) == lh);
}

TEST_CASE("structure parse errors", "[hierarchy]") {
  auto fig3 = builtin_topology("fig3");
  CHECK_THROWS_AS(parse_structure(fig3, "(s(l_s2,2))"), InputError);   // no such fiber
  CHECK_THROWS_AS(parse_structure(fig3, "(s(l_s2,1))"), InputError);   // label does not match
  CHECK_THROWS_AS(parse_structure(fig3, "(s(l_s1,1)"), InputError);    // unbalanced
  CHECK_THROWS_AS(parse_structure(fig3, "(s(l_sq,q))"), InputError);   // unknown node
  CHECK_THROWS_AS(parse_structure(fig3, "(s(l_s2,2),"), InputError);
  CHECK_THROWS_AS(parse_dump(fig3, make_session(fig3, "s", {"d1"}), "x0: (s)\n"), InputError);
  CHECK_THROWS_AS(parse_dump(fig3, make_session(fig3, "s", {"d1"}), "λ0 (s(l_s1,1))\n"), InputError);
  CHECK(parse_dump(fig3, make_session(fig3, "s", {"d1"}), "# nothing\nL1: (s(l_s1,1))\n").structures.at(0).wavelength ==
        1);
}

TEST_CASE("property: serialize/parse round trip on arbitrary link sets", "[hierarchy][property]") {
  SplitMix64 rng(5);
  for (int i = 0; i < 300; ++i) {
    auto inst = testing::random_instance(rng, 7);
    const auto& net = inst.net;
    LightStructure ls{0, inst.session.source, {}};
    for (LinkId l = 0; l < net.link_count(); ++l)
      if (rng.below(3) == 0) ls.links.push_back(net.link(l));
    if (ls.links.empty()) continue;
    const auto text = serialize(net, ls);
    INFO(text);
    CHECK(sorted(parse_structure(net, text).links) == sorted(ls.links));
  }
}

TEST_CASE("property: light-trees have no CPS; cost is additive", "[hierarchy][property]") {
  SplitMix64 rng(6);
  for (int i = 0; i < 300; ++i) {
    auto inst = testing::random_instance(rng, 7);
    const auto& net = inst.net;
    LightStructureSet a{inst.session, {}}, b{inst.session, {}}, both{inst.session, {}};
    for (std::size_t k = 0; k < 2; ++k) {
      LightStructure ls{k, inst.session.source, {}};
      for (LinkId l = 0; l < net.link_count(); ++l)
        if (rng.below(2) == 0) ls.links.push_back(net.link(l));
      if (is_light_tree(ls)) CHECK(cps_nodes(net, ls).empty());
      (k == 0 ? a : b).structures.push_back(ls);
      both.structures.push_back(ls);
    }
    CHECK(cost(net, both) == cost(net, a) + cost(net, b));
  }
}
