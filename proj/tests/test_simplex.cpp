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

#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "lumharch/experiment.hpp"
#include "lumharch/simplex.hpp"

using namespace lumharch;
using Catch::Approx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solves a small dense system; nullopt when singular.
std::optional<std::vector<double>> gauss(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (std::abs(a[p][c]) < 1e-9) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Minimum over all basic solutions of a boxed LP (every vertex is a choice
// of n tight constraints among rows and bounds).
std::optional<double> vertex_minimum(const LinearProgram& lp) {
  const std::size_t n = lp.cols();
  struct Tight {
    std::vector<double> a;
    double b;
  };
  std::vector<Tight> cand;
  for (const auto& r : lp.rows) {
    Tight t{std::vector<double>(n, 0), r.rhs};
    for (auto [j, v] : r.coefs) t.a[j] += v;
    cand.push_back(t);
  }
  for (std::size_t j = 0; j < n; ++j) {
    Tight lo{std::vector<double>(n, 0), lp.lower[j]};
    lo.a[j] = 1;
    Tight hi = lo;
    hi.b = lp.upper[j];
    cand.push_back(lo);
    cand.push_back(hi);
  }
  auto feasible = [&](const std::vector<double>& x) {
    for (std::size_t j = 0; j < n; ++j)
      if (x[j] < lp.lower[j] - 1e-7 || x[j] > lp.upper[j] + 1e-7) return false;
    for (const auto& r : lp.rows) {
      double lhs = 0;
      for (auto [j, v] : r.coefs) lhs += v * x[j];
      if (r.sense == Sense::LessEqual && lhs > r.rhs + 1e-7) return false;
      if (r.sense == Sense::GreaterEqual && lhs < r.rhs - 1e-7) return false;
      if (r.sense == Sense::Equal && std::abs(lhs - r.rhs) > 1e-7) return false;
    }
    return true;
  };
  std::optional<double> best;
  std::vector<std::size_t> pick(n);
  // All n-subsets of the candidate constraints.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == n) {
      std::vector<std::vector<double>> a;
      std::vector<double> b;
      for (auto i : pick) a.push_back(cand[i].a), b.push_back(cand[i].b);
      auto x = gauss(a, b);
      if (!x || !feasible(*x)) return;
      double v = 0;
      for (std::size_t j = 0; j < n; ++j) v += lp.cost[j] * (*x)[j];
      if (!best || v < *best) best = v;
      return;
    }
    for (std::size_t i = start; i < cand.size(); ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("small LPs", "[simplex]") {
  SECTION("textbook maximum") {
    // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18
    LinearProgram lp{{-3, -5}, {0, 0}, {kInf, kInf}, {}};
    lp.rows.push_back({{{0, 1}}, Sense::LessEqual, 4});
    lp.rows.push_back({{{1, 2}}, Sense::LessEqual, 12});
    lp.rows.push_back({{{0, 3}, {1, 2}}, Sense::LessEqual, 18});
    auto s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.value == Approx(-36));
    CHECK(s.x[0] == Approx(2));
    CHECK(s.x[1] == Approx(6));
  }
  SECTION("equality and >= rows need phase one") {
    LinearProgram lp{{1, 1, 1}, {0, 0, 0}, {10, 10, 10}, {}};
    lp.rows.push_back({{{0, 1}, {1, 1}}, Sense::GreaterEqual, 3});
    lp.rows.push_back({{{1, 1}, {2, 1}}, Sense::Equal, 4});
    auto s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.value == Approx(4));
  }
  SECTION("infeasible") {
    LinearProgram lp{{1}, {0}, {1}, {}};
    lp.rows.push_back({{{0, 1}}, Sense::GreaterEqual, 2});
    CHECK(solve_lp(lp).status == LpStatus::Infeasible);
  }
  SECTION("unbounded") {
    LinearProgram lp{{-1, 0}, {0, 0}, {kInf, kInf}, {}};
    lp.rows.push_back({{{0, 1}, {1, -1}}, Sense::LessEqual, 1});
    CHECK(solve_lp(lp).status == LpStatus::Unbounded);
  }
  SECTION("fixed variables") {
    LinearProgram lp{{1, 2}, {3, 0}, {3, 5}, {}};
    lp.rows.push_back({{{0, 1}, {1, 1}}, Sense::GreaterEqual, 4});
    auto s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.x[0] == 3);
    CHECK(s.value == Approx(5));
  }
  SECTION("Beale's cycling example terminates") {
    LinearProgram lp{{-0.75, 150, -0.02, 6}, {0, 0, 0, 0}, {kInf, kInf, kInf, kInf}, {}};
    lp.rows.push_back({{{0, 0.25}, {1, -60}, {2, -0.04}, {3, 9}}, Sense::LessEqual, 0});
    lp.rows.push_back({{{0, 0.5}, {1, -90}, {2, -0.02}, {3, 3}}, Sense::LessEqual, 0});
    lp.rows.push_back({{{2, 1}}, Sense::LessEqual, 1});
    auto s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.value == Approx(-0.05));
  }
}

TEST_CASE("property: simplex matches vertex enumeration", "[simplex][property]") {
  SplitMix64 rng(17);
  int solved = 0, infeasible = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.below(3);
    const std::size_t m = rng.below(4);
    LinearProgram lp;
    for (std::size_t j = 0; j < n; ++j) {
      lp.cost.push_back(static_cast<double>(rng.below(9)) - 4);
      const double lo = static_cast<double>(rng.below(5)) - 2;
      lp.lower.push_back(lo);
      lp.upper.push_back(lo + static_cast<double>(rng.below(5)));
    }
    for (std::size_t i = 0; i < m; ++i) {
      LinearProgram::Row r;
      for (std::size_t j = 0; j < n; ++j)
        if (auto c = static_cast<double>(rng.below(7)) - 3; c != 0) r.coefs.push_back({j, c});
      r.sense = static_cast<Sense>(rng.below(3));
      r.rhs = static_cast<double>(rng.below(11)) - 4;
      lp.rows.push_back(r);
    }
    const auto expect = vertex_minimum(lp);
    const auto got = solve_lp(lp);
    if (expect) {
      ++solved;
      REQUIRE(got.status == LpStatus::Optimal);
      CHECK(got.value == Approx(*expect).margin(1e-6));
    } else {
      ++infeasible;
      CHECK(got.status == LpStatus::Infeasible);
    }
  }
  CHECK(solved > 100);
  CHECK(infeasible > 10);
}

TEST_CASE("degenerate limit forces Bland pricing without changing the optimum", "[simplex]") {
  SplitMix64 rng(18);
  SimplexOptions bland;
  bland.degenerate_limit = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.below(3);
    LinearProgram lp;
    for (std::size_t j = 0; j < n; ++j) {
      lp.cost.push_back(static_cast<double>(rng.below(9)) - 4);
      lp.lower.push_back(0);
      lp.upper.push_back(1 + static_cast<double>(rng.below(3)));
    }
    for (std::size_t i = 0; i < 3; ++i) {
      LinearProgram::Row r;
      for (std::size_t j = 0; j < n; ++j) r.coefs.push_back({j, static_cast<double>(rng.below(5)) - 1});
      r.sense = Sense::LessEqual;
      r.rhs = static_cast<double>(rng.below(4));
      lp.rows.push_back(r);
    }
    const auto a = solve_lp(lp);
    const auto b = solve_lp(lp, bland);
    REQUIRE(a.status == b.status);
    if (a.status == LpStatus::Optimal) CHECK(a.value == Approx(b.value).margin(1e-9));
  }
}
