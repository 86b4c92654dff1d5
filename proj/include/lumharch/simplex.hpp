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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "lumharch/model.hpp"

namespace lumharch {

/// min cost.x  s.t.  rows, lower <= x <= upper. Lower bounds must be finite.
struct LinearProgram {
  struct Row {
    std::vector<std::pair<std::size_t, double>> coefs;
    Sense sense = Sense::Equal;
    double rhs = 0;
  };

  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  std::size_t cols() const { return cost.size(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure, IterationLimit };

inline std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::NumericalFailure: return "numerical failure";
    case LpStatus::IterationLimit: return "iteration limit";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  double value = 0;
  std::vector<double> x;
  std::uint64_t iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  std::uint64_t degenerate_limit = 1000;
  std::uint64_t iteration_limit = 500000;
  /// Tolerance of the final residual check against the original rows.
  double verify_tol = 1e-6;
};

namespace detail {

// Dense-tableau bounded-variable primal simplex. Columns are the non-fixed
// structural variables followed by one slack per inequality row. Phase one
// starts from a slack/artificial basis; artificial columns are never stored
// because a leaving artificial never re-enters.
class DenseSimplex {
 public:
  DenseSimplex(const LinearProgram& lp, const SimplexOptions& opts) : lp_(lp), opts_(opts) {}

  LpSolution solve() {
    LpSolution out;
    setup();
    auto status = iterate(/*phase_one=*/true);
    out.iterations = iterations_;
    if (status != LpStatus::Optimal) {
      out.status = status;
      return out;
    }
    double infeasibility = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (is_artificial(basis_[i])) infeasibility += beta_[i];
    if (infeasibility > 1e-7 * (1.0 + rhs_scale_)) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    drive_out_artificials();
    phase_two_costs();
    status = iterate(/*phase_one=*/false);
    out.iterations = iterations_;
    if (status != LpStatus::Optimal) {
      out.status = status;
      return out;
    }
    out.x = primal();
    if (!verify(out.x)) {
      out.status = LpStatus::NumericalFailure;
      return out;
    }
    out.value = 0;
    for (std::size_t j = 0; j < lp_.cols(); ++j) out.value += lp_.cost[j] * out.x[j];
    out.status = LpStatus::Optimal;
    return out;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  enum class State : unsigned char { Basic, AtLower, AtUpper };

  bool is_artificial(std::size_t col) const { return col >= n_; }

  void setup() {
    m_ = lp_.rows.size();
    // Structural columns that can move.
    col_of_var_.assign(lp_.cols(), kNone);
    for (std::size_t j = 0; j < lp_.cols(); ++j) {
      if (lp_.upper[j] - lp_.lower[j] > opts_.feasibility_tol) {
        col_of_var_[j] = var_of_col_.size();
        var_of_col_.push_back(j);
      }
    }
    structural_ = var_of_col_.size();
    slack_of_row_.assign(m_, kNone);
    n_ = structural_;
    for (std::size_t i = 0; i < m_; ++i)
      if (lp_.rows[i].sense != Sense::Equal) slack_of_row_[i] = n_++;

    lb_.assign(n_, 0);
    ub_.assign(n_, kInf);
    for (std::size_t c = 0; c < structural_; ++c) {
      lb_[c] = lp_.lower[var_of_col_[c]];
      ub_[c] = lp_.upper[var_of_col_[c]];
    }
    state_.assign(n_, State::AtLower);

    tab_.assign(m_ * n_, 0.0);
    beta_.assign(m_, 0.0);
    basis_.assign(m_, 0);
    rhs_scale_ = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& row = lp_.rows[i];
      double residual = row.rhs;
      double* t = &tab_[i * n_];
      for (const auto& [var, a] : row.coefs) {
        const std::size_t c = col_of_var_[var];
        if (c == kNone) {
          residual -= a * lp_.lower[var];  // fixed variable
        } else {
          t[c] += a;
          residual -= a * lb_[c];
        }
      }
      rhs_scale_ = std::max(rhs_scale_, std::abs(row.rhs));
      const std::size_t s = slack_of_row_[i];
      const double slack_coef = row.sense == Sense::LessEqual ? 1.0 : -1.0;
      if (s != kNone) t[s] = slack_coef;

      double multiplier;
      if (s != kNone && row.sense == Sense::LessEqual && residual >= 0) {
        multiplier = 1.0;
        basis_[i] = s;
      } else if (s != kNone && row.sense == Sense::GreaterEqual && residual <= 0) {
        multiplier = -1.0;
        basis_[i] = s;
      } else {
        multiplier = residual >= 0 ? 1.0 : -1.0;
        basis_[i] = n_ + i;
      }
      if (multiplier < 0)
        for (std::size_t c = 0; c < n_; ++c) t[c] = -t[c];
      beta_[i] = std::abs(residual);
      if (basis_[i] < n_) state_[basis_[i]] = State::Basic;
    }

    // Phase-one reduced costs: minimise the sum of artificials.
    d_.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      const double* t = &tab_[i * n_];
      for (std::size_t c = 0; c < n_; ++c) d_[c] -= t[c];
    }
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) d_[basis_[i]] = 0;
  }

  void phase_two_costs() {
    d_.assign(n_, 0.0);
    for (std::size_t c = 0; c < structural_; ++c) d_[c] = lp_.cost[var_of_col_[c]];
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t b = basis_[i];
      if (is_artificial(b)) continue;
      const double cb = b < structural_ ? lp_.cost[var_of_col_[b]] : 0.0;
      if (cb == 0.0) continue;
      const double* t = &tab_[i * n_];
      for (std::size_t c = 0; c < n_; ++c) d_[c] -= cb * t[c];
    }
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) d_[basis_[i]] = 0;
  }

  double basic_lower(std::size_t i) const { return is_artificial(basis_[i]) ? 0.0 : lb_[basis_[i]]; }

  double basic_upper(std::size_t i, bool phase_one) const {
    if (is_artificial(basis_[i])) return phase_one ? kInf : 0.0;
    return ub_[basis_[i]];
  }

  LpStatus iterate(bool phase_one) {
    std::uint64_t degenerate_run = 0;
    bool bland = false;
    for (;;) {
      if (iterations_ >= opts_.iteration_limit) return LpStatus::IterationLimit;

      // Pricing.
      std::size_t enter = kNone;
      double best = 0;
      for (std::size_t c = 0; c < n_; ++c) {
        if (state_[c] == State::Basic) continue;
        const double dc = d_[c];
        const bool improving = (state_[c] == State::AtLower && dc < -opts_.optimality_tol) ||
                               (state_[c] == State::AtUpper && dc > opts_.optimality_tol);
        if (!improving) continue;
        if (bland) {
          enter = c;
          break;
        }
        if (std::abs(dc) > best) {
          best = std::abs(dc);
          enter = c;
        }
      }
      if (enter == kNone) return LpStatus::Optimal;
      ++iterations_;

      const double dir = state_[enter] == State::AtLower ? 1.0 : -1.0;

      // Ratio test.
      double step = ub_[enter] - lb_[enter];
      std::size_t leave = kNone;
      double leave_alpha = 0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double alpha = tab_[i * n_ + enter] * dir;
        if (std::abs(alpha) <= opts_.pivot_tol) continue;
        double limit;
        if (alpha > 0) {
          limit = (beta_[i] - basic_lower(i)) / alpha;
        } else {
          const double ub = basic_upper(i, phase_one);
          if (ub == kInf) continue;
          limit = (ub - beta_[i]) / -alpha;
        }
        if (limit < 0) limit = 0;
        bool take = limit < step - 1e-12;
        if (!take && leave != kNone && limit <= step + 1e-12) {
          // Tie between rows: Bland takes the lowest basic index, otherwise
          // the larger pivot wins for stability.
          const double a = std::abs(alpha);
          const double b = std::abs(leave_alpha);
          take = bland ? basis_[i] < basis_[leave]
                       : (a > b + 1e-12 || (a >= b - 1e-12 && basis_[i] < basis_[leave]));
        }
        if (take) {
          step = std::min(step, limit);
          leave = i;
          leave_alpha = alpha;
        }
      }
      if (step == kInf) return LpStatus::Unbounded;

      if (step <= 1e-12) {
        if (++degenerate_run >= opts_.degenerate_limit) bland = true;
      } else {
        degenerate_run = 0;
      }

      for (std::size_t i = 0; i < m_; ++i) {
        const double alpha = tab_[i * n_ + enter] * dir;
        if (alpha != 0.0) beta_[i] -= alpha * step;
      }

      if (leave == kNone) {
        // Bound flip: the entering variable crosses to its other bound.
        state_[enter] = state_[enter] == State::AtLower ? State::AtUpper : State::AtLower;
        continue;
      }

      const double entering_value = (state_[enter] == State::AtLower ? lb_[enter] : ub_[enter]) + dir * step;
      const std::size_t leaving = basis_[leave];
      if (!is_artificial(leaving)) state_[leaving] = leave_alpha > 0 ? State::AtLower : State::AtUpper;
      pivot(leave, enter);
      beta_[leave] = entering_value;
      basis_[leave] = enter;
      state_[enter] = State::Basic;
    }
  }

  void pivot(std::size_t r, std::size_t q) {
    double* pr = &tab_[r * n_];
    const double inv = 1.0 / pr[q];
    for (std::size_t c = 0; c < n_; ++c) pr[c] *= inv;
    pr[q] = 1.0;
    nonzero_.clear();
    for (std::size_t c = 0; c < n_; ++c)
      if (pr[c] != 0.0) nonzero_.push_back(c);
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* pi = &tab_[i * n_];
      const double f = pi[q];
      if (f == 0.0) continue;
      for (std::size_t c : nonzero_) pi[c] -= f * pr[c];
      pi[q] = 0.0;
    }
    const double f = d_[q];
    if (f != 0.0) {
      for (std::size_t c : nonzero_) d_[c] -= f * pr[c];
      d_[q] = 0.0;
    }
  }

  // Replaces basic artificials (all at zero after a feasible phase one) by
  // structural or slack columns where the row allows it.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (!is_artificial(basis_[r])) continue;
      const double* t = &tab_[r * n_];
      std::size_t q = kNone;
      double best = 1e-7;
      for (std::size_t c = 0; c < n_; ++c) {
        if (state_[c] == State::Basic) continue;
        if (std::abs(t[c]) > best) {
          best = std::abs(t[c]);
          q = c;
        }
      }
      if (q == kNone) continue;  // redundant row; the artificial stays pinned at zero
      const double value = state_[q] == State::AtLower ? lb_[q] : ub_[q];
      pivot(r, q);
      beta_[r] = value;
      basis_[r] = q;
      state_[q] = State::Basic;
    }
  }

  std::vector<double> primal() const {
    std::vector<double> x(lp_.cols());
    for (std::size_t j = 0; j < lp_.cols(); ++j) x[j] = lp_.lower[j];
    std::vector<double> col_value(n_);
    for (std::size_t c = 0; c < n_; ++c) col_value[c] = state_[c] == State::AtUpper ? ub_[c] : lb_[c];
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) col_value[basis_[i]] = beta_[i];
    for (std::size_t c = 0; c < structural_; ++c) {
      double v = col_value[c];
      // Snap to bounds within tolerance.
      if (std::abs(v - lb_[c]) < 1e-9) v = lb_[c];
      if (std::abs(v - ub_[c]) < 1e-9) v = ub_[c];
      x[var_of_col_[c]] = v;
    }
    return x;
  }

  bool verify(const std::vector<double>& x) const {
    const double tol = opts_.verify_tol;
    for (std::size_t j = 0; j < lp_.cols(); ++j)
      if (x[j] < lp_.lower[j] - tol || x[j] > lp_.upper[j] + tol) return false;
    for (const auto& row : lp_.rows) {
      double lhs = 0;
      for (const auto& [var, a] : row.coefs) lhs += a * x[var];
      switch (row.sense) {
        case Sense::LessEqual:
          if (lhs > row.rhs + tol) return false;
          break;
        case Sense::GreaterEqual:
          if (lhs < row.rhs - tol) return false;
          break;
        case Sense::Equal:
          if (std::abs(lhs - row.rhs) > tol) return false;
          break;
      }
    }
    return true;
  }

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  const LinearProgram& lp_;
  const SimplexOptions& opts_;
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::size_t structural_ = 0;
  std::vector<std::size_t> col_of_var_;
  std::vector<std::size_t> var_of_col_;
  std::vector<std::size_t> slack_of_row_;
  std::vector<double> lb_;
  std::vector<double> ub_;
  std::vector<State> state_;
  std::vector<double> tab_;
  std::vector<double> beta_;
  std::vector<std::size_t> basis_;
  std::vector<double> d_;
  std::vector<std::size_t> nonzero_;
  double rhs_scale_ = 0;
  std::uint64_t iterations_ = 0;
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {}) {
  for (std::size_t j = 0; j < lp.cols(); ++j)
    if (lp.lower[j] > lp.upper[j] + opts.feasibility_tol) return {LpStatus::Infeasible, 0, {}, 0};
  return detail::DenseSimplex(lp, opts).solve();
}

/// Continuous relaxation of an ILP model.
inline LinearProgram relaxation(const IlpModel& model) {
  LinearProgram lp;
  const std::size_t n = model.vars.size();
  lp.cost.assign(n, 0.0);
  lp.lower.resize(n);
  lp.upper.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    lp.lower[j] = static_cast<double>(model.vars[j].lower);
    lp.upper[j] = static_cast<double>(model.vars[j].upper);
  }
  for (const auto& t : model.objective) lp.cost[t.var] += static_cast<double>(t.coef);
  lp.rows.reserve(model.constraints.size());
  for (const auto& c : model.constraints) {
    LinearProgram::Row row;
    row.sense = c.sense;
    row.rhs = static_cast<double>(c.rhs);
    for (const auto& t : c.terms) row.coefs.emplace_back(t.var, static_cast<double>(t.coef));
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

}  // namespace lumharch
