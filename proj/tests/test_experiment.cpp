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

#include <set>

#include "lumharch/experiment.hpp"

using namespace lumharch;
using Catch::Matchers::ContainsSubstring;

namespace {

std::string describe(const Network& net, const std::vector<MulticastSession>& sessions) {
  std::string out;
  for (const auto& ms : sessions) out += std::string(net.name(ms.source)) + ":" + format_destinations(net, ms) + "\n";
  return out;
}

}  // namespace

TEST_CASE("splitmix64 reference values", "[experiment]") {
  // First outputs for seed 0 of the reference implementation.
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
}

TEST_CASE("below stays in range and hits every value", "[experiment]") {
  SplitMix64 rng(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("generate_sessions contract", "[experiment]") {
  auto net = builtin_topology("nsf");
  auto sessions = generate_sessions(net, 6, 50, 9);
  REQUIRE(sessions.size() == 50);
  for (const auto& ms : sessions) {
    CHECK(ms.destinations.size() == 6);
    std::set<NodeId> d(ms.destinations.begin(), ms.destinations.end());
    CHECK(d.size() == 6);
    CHECK_FALSE(d.count(ms.source));
  }
  CHECK(generate_sessions(net, 6, 50, 9) == sessions);
  CHECK(generate_sessions(net, 6, 50, 10) != sessions);
  CHECK(generate_sessions(net, 13, 1, 1).front().destinations.size() == 13);

  auto distinct = generate_sessions(net, 2, 14, 9, true);
  std::set<NodeId> sources;
  for (const auto& ms : distinct) sources.insert(ms.source);
  CHECK(sources.size() == 14);
  CHECK_THROWS_AS(generate_sessions(net, 2, 15, 9, true), InputError);

  CHECK_THROWS_AS(generate_sessions(net, 14, 1, 1), InputError);
  CHECK_THROWS_AS(generate_sessions(net, 0, 1, 1), InputError);
}

TEST_CASE("generate_sessions golden output", "[experiment]") {
  // Pinned from an independent reimplementation of the generator.
  auto net = builtin_topology("nsf");
  const auto a = describe(net, generate_sessions(net, 6, 3, 1));
  const auto b = describe(net, generate_sessions(net, 6, 3, 2));
  CHECK(a == "10:3,5,7,8,11,12\n4:1,5,8,9,11,13\n11:1,2,4,5,8,13\n");
  CHECK(b == "5:3,6,11,12,13,14\n6:2,4,8,10,11,13\n14:1,4,7,8,10,12\n");
}

TEST_CASE("forced fig3 session", "[experiment]") {
  ExperimentConfig cfg;
  cfg.topology = "fig3";
  auto net = builtin_topology("fig3");
  cfg.sessions = {make_session(net, "s", {"d1", "d2"})};
  cfg.threads = 1;
  auto res = run_experiment(cfg);
  REQUIRE(res.outcomes.size() == 2);
  CHECK(res.outcomes[0].mode == Mode::LH);
  CHECK(res.outcomes[0].cost == 7);
  CHECK(res.outcomes[0].cps_used);
  CHECK(res.outcomes[1].mode == Mode::LT);
  CHECK(res.outcomes[1].cost == 9);
  CHECK_FALSE(res.outcomes[1].cps_used);
  CHECK(res.metrics.counted == 1);
  CHECK(res.metrics.r_cps == 1u);
  REQUIRE(res.metrics.cost_saving_percent);
  CHECK(*res.metrics.cost_saving_percent == Catch::Approx(200.0 / 9));

  const auto csv = format_csv(res, false);
  CHECK(csv ==
        std::string(kCsvHeader) + "\n"
        "0,s,d1;d2,LH,7,1,true,optimal," + std::to_string(res.outcomes[0].nodes_explored) + ",\n"
        "0,s,d1;d2,LT,9,2,false,optimal," + std::to_string(res.outcomes[1].nodes_explored) + ",\n");
  CHECK_THAT(format_metrics(res.metrics), ContainsSubstring("cost_saving_percent 22.22"));
}

TEST_CASE("single mode leaves the saving blank", "[experiment]") {
  ExperimentConfig cfg;
  cfg.topology = "fig3";
  cfg.modes = {Mode::LH};
  cfg.group_size = 2;
  cfg.session_count = 4;
  auto res = run_experiment(cfg);
  CHECK(res.outcomes.size() == 4);
  for (const auto& o : res.outcomes) CHECK(o.mode == Mode::LH);
  CHECK_FALSE(res.metrics.cost_saving_percent);
  CHECK_FALSE(res.metrics.totals.count(Mode::LT));
  CHECK_THAT(format_metrics(res.metrics), ContainsSubstring("cost_saving_percent -"));

  cfg.modes = {};
  CHECK_THROWS_AS(run_experiment(cfg), InputError);
}

TEST_CASE("excluded sessions and blank CSV cells", "[experiment]") {
  ExperimentConfig cfg;
  cfg.topology = "fig3";
  cfg.wavelengths = 1;
  auto net = builtin_topology("fig3");
  cfg.sessions = {make_session(net, "s", {"d1", "d2"}), make_session(net, "s", {"d1"})};
  auto res = run_experiment(cfg);
  // One wavelength: LT needs two trees for the first session.
  CHECK(res.outcomes[1].status == SolveStatus::Infeasible);
  CHECK(res.metrics.counted == 1);
  CHECK(res.metrics.excluded == 1);
  CHECK_THAT(format_csv(res, false), ContainsSubstring("0,s,d1;d2,LT,,,,infeasible,"));
}

TEST_CASE("batch CSV is byte-identical across runs and thread counts", "[experiment]") {
  ExperimentConfig cfg;
  cfg.topology = "nsf";
  cfg.group_size = 3;
  cfg.session_count = 12;
  cfg.seed = 77;
  cfg.threads = 1;
  const auto one = format_csv(run_experiment(cfg), false);
  cfg.threads = 4;
  const auto four = format_csv(run_experiment(cfg), false);
  CHECK(one == four);
  CHECK(one == format_csv(run_experiment(cfg), false));
  CHECK(one.starts_with(std::string(kCsvHeader) + "\n"));
}

TEST_CASE("LH never costs more than LT on nsf", "[experiment]") {
  ExperimentConfig cfg;
  cfg.topology = "nsf";
  cfg.group_size = 3;
  cfg.session_count = 10;
  cfg.seed = 3;
  auto res = run_experiment(cfg);
  for (std::size_t i = 0; i < res.sessions.size(); ++i) {
    const auto& lh = res.outcomes[2 * i];
    const auto& lt = res.outcomes[2 * i + 1];
    if (lh.status != SolveStatus::Optimal || lt.status != SolveStatus::Optimal) continue;
    CHECK(lh.cost <= lt.cost);
    if (lh.cost < lt.cost) CHECK(lh.cps_used);
  }
  CHECK(res.metrics.totals[Mode::LH].cost <= res.metrics.totals[Mode::LT].cost);
}

TEST_CASE("load_topology", "[experiment]") {
  CHECK(load_topology("cost239").node_count() == 11);
  CHECK_THROWS_AS(load_topology("/nonexistent/net.txt"), InputError);
}
