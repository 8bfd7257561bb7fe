#include "iva/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace iva {

void LinearProgram::validate() const {
  require(!objective.empty(), "LP needs at least one variable");
  require(non_negative.size() == objective.size(), "sign flags must cover all variables");
  require(constraints.size() == bounds.size(), "one bound per constraint row");
  for (const auto& row : constraints) {
    require(row.size() == objective.size(), "constraint rows must cover all variables");
  }
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr int kMaxIterations = 20000;

// Dense tableau over structural + slack + artificial columns, objective row
// last. Bland's rule everywhere: smallest eligible entering index, leaving
// ties broken by smallest basic variable index. No cycling, no stalls.
class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& rows, const std::vector<double>& rhs,
          int structural)
      : m_(static_cast<int>(rows.size())), structural_(structural) {
    artificial_start_ = structural_ + m_;
    cols_ = structural_ + m_;  // slacks; artificials appended on demand
    basis_.resize(static_cast<std::size_t>(m_));
    table_.assign(static_cast<std::size_t>(m_),
                  std::vector<double>(static_cast<std::size_t>(cols_) + 1, 0.0));
    std::vector<int> artificial_rows;
    for (int r = 0; r < m_; ++r) {
      const double sign = rhs[static_cast<std::size_t>(r)] < 0 ? -1.0 : 1.0;
      for (int c = 0; c < structural_; ++c) {
        table_[r][static_cast<std::size_t>(c)] =
            sign * rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      }
      table_[r][static_cast<std::size_t>(structural_ + r)] = sign;  // slack
      table_[r].back() = sign * rhs[static_cast<std::size_t>(r)];
      if (sign < 0) {
        artificial_rows.push_back(r);
      } else {
        basis_[static_cast<std::size_t>(r)] = structural_ + r;
      }
    }
    for (int r : artificial_rows) {
      for (auto& row : table_) row.insert(row.end() - 1, 0.0);
      table_[r][static_cast<std::size_t>(cols_)] = 1.0;
      basis_[static_cast<std::size_t>(r)] = cols_;
      ++cols_;
    }
    blocked_.assign(static_cast<std::size_t>(cols_), false);
  }

  bool needs_phase1() const { return cols_ > artificial_start_; }

  // Phase 1: maximize z = -(sum of artificials). Returns false when the
  // optimum stays below zero, i.e. the original constraints are infeasible.
  bool phase1() {
    std::vector<double> reduced(static_cast<std::size_t>(cols_), 0.0);
    double z = 0;
    for (int r = 0; r < m_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < artificial_start_) continue;
      for (int c = 0; c < cols_; ++c) reduced[static_cast<std::size_t>(c)] += table_[r][static_cast<std::size_t>(c)];
      z -= table_[r].back();
    }
    for (int c = artificial_start_; c < cols_; ++c) reduced[static_cast<std::size_t>(c)] = 0.0;
    LpStatus status = optimize(reduced, z);
    if (status == LpStatus::kUnbounded) {
      throw std::logic_error("phase-1 objective cannot be unbounded");
    }
    if (z < -1e-7) return false;
    // drive leftover artificials out of the basis, drop redundant rows' columns
    for (int r = 0; r < m_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < artificial_start_) continue;
      int entering = -1;
      for (int c = 0; c < artificial_start_; ++c) {
        if (std::abs(table_[r][static_cast<std::size_t>(c)]) > kPivotTol) {
          entering = c;
          break;
        }
      }
      if (entering >= 0) pivot(r, entering);
    }
    for (int c = artificial_start_; c < cols_; ++c) blocked_[static_cast<std::size_t>(c)] = true;
    return true;
  }

  LpStatus phase2(const std::vector<double>& objective) {
    // price out the objective over the current basis
    std::vector<double> reduced(static_cast<std::size_t>(cols_), 0.0);
    for (int c = 0; c < structural_; ++c) reduced[static_cast<std::size_t>(c)] = objective[static_cast<std::size_t>(c)];
    double value = 0;
    for (int r = 0; r < m_; ++r) {
      const int b = basis_[static_cast<std::size_t>(r)];
      if (b >= structural_) continue;
      const double coef = objective[static_cast<std::size_t>(b)];
      if (coef == 0) continue;
      for (int c = 0; c < cols_; ++c) reduced[static_cast<std::size_t>(c)] -= coef * table_[r][static_cast<std::size_t>(c)];
      value += coef * table_[r].back();
    }
    return optimize(reduced, value);
  }

  std::vector<double> extract(int structural) const {
    std::vector<double> x(static_cast<std::size_t>(structural), 0.0);
    for (int r = 0; r < m_; ++r) {
      const int b = basis_[static_cast<std::size_t>(r)];
      if (b < structural) x[static_cast<std::size_t>(b)] = table_[r].back();
    }
    return x;
  }

 private:
  // maximize over the tableau; `reduced` holds current reduced costs (a
  // positive entry improves the objective)
  LpStatus optimize(std::vector<double>& reduced, double& value) {
    for (int iteration = 0; iteration < kMaxIterations; ++iteration) {
      int entering = -1;
      for (int c = 0; c < cols_; ++c) {
        if (blocked_[static_cast<std::size_t>(c)]) continue;
        if (reduced[static_cast<std::size_t>(c)] > kPivotTol) {
          entering = c;  // Bland: smallest improving index
          break;
        }
      }
      if (entering < 0) return LpStatus::kOptimal;
      int leaving = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        const double coef = table_[r][static_cast<std::size_t>(entering)];
        if (coef <= kPivotTol) continue;
        const double ratio = table_[r].back() / coef;
        if (ratio < best_ratio - kPivotTol ||
            (ratio < best_ratio + kPivotTol &&
             (leaving < 0 || basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leaving)]))) {
          best_ratio = ratio;
          leaving = r;
        }
      }
      if (leaving < 0) return LpStatus::kUnbounded;
      const double coef = reduced[static_cast<std::size_t>(entering)];
      pivot(leaving, entering);
      // update reduced costs against the fresh pivot row
      value += coef * table_[leaving].back();
      for (int c = 0; c < cols_; ++c) {
        reduced[static_cast<std::size_t>(c)] -= coef * table_[leaving][static_cast<std::size_t>(c)];
      }
      reduced[static_cast<std::size_t>(entering)] = 0.0;
    }
    throw std::runtime_error("simplex iteration guard exceeded (cycling?)");
  }

  void pivot(int row, int col) {
    auto& pivot_row = table_[static_cast<std::size_t>(row)];
    const double p = pivot_row[static_cast<std::size_t>(col)];
    for (double& x : pivot_row) x /= p;
    pivot_row[static_cast<std::size_t>(col)] = 1.0;
    for (int r = 0; r < m_; ++r) {
      if (r == row) continue;
      auto& other = table_[static_cast<std::size_t>(r)];
      const double factor = other[static_cast<std::size_t>(col)];
      if (factor == 0) continue;
      for (std::size_t c = 0; c < other.size(); ++c) other[c] -= factor * pivot_row[c];
      other[static_cast<std::size_t>(col)] = 0.0;
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  int m_ = 0;
  int structural_ = 0;
  int artificial_start_ = 0;
  int cols_ = 0;
  std::vector<std::vector<double>> table_;  // m rows, cols_ + rhs
  std::vector<int> basis_;
  std::vector<bool> blocked_;
};

}  // namespace

SimplexResult simplex_solve(const LinearProgram& lp) {
  lp.validate();
  // split free variables x = u - u'
  const int n = lp.num_vars();
  std::vector<int> positive_col(static_cast<std::size_t>(n));
  std::vector<int> negative_col(static_cast<std::size_t>(n), -1);
  int structural = 0;
  for (int j = 0; j < n; ++j) {
    positive_col[static_cast<std::size_t>(j)] = structural++;
    if (!lp.non_negative[static_cast<std::size_t>(j)]) negative_col[static_cast<std::size_t>(j)] = structural++;
  }
  std::vector<std::vector<double>> rows(lp.constraints.size(),
                                        std::vector<double>(static_cast<std::size_t>(structural), 0.0));
  std::vector<double> objective(static_cast<std::size_t>(structural), 0.0);
  for (int j = 0; j < n; ++j) {
    objective[static_cast<std::size_t>(positive_col[static_cast<std::size_t>(j)])] = lp.objective[static_cast<std::size_t>(j)];
    if (negative_col[static_cast<std::size_t>(j)] >= 0) {
      objective[static_cast<std::size_t>(negative_col[static_cast<std::size_t>(j)])] = -lp.objective[static_cast<std::size_t>(j)];
    }
  }
  for (std::size_t r = 0; r < lp.constraints.size(); ++r) {
    for (int j = 0; j < n; ++j) {
      const double a = lp.constraints[r][static_cast<std::size_t>(j)];
      rows[r][static_cast<std::size_t>(positive_col[static_cast<std::size_t>(j)])] = a;
      if (negative_col[static_cast<std::size_t>(j)] >= 0) {
        rows[r][static_cast<std::size_t>(negative_col[static_cast<std::size_t>(j)])] = -a;
      }
    }
  }

  Tableau tableau(rows, lp.bounds, structural);
  SimplexResult result;
  if (tableau.needs_phase1() && !tableau.phase1()) {
    result.status = LpStatus::kInfeasible;
    return result;
  }
  result.status = tableau.phase2(objective);
  if (result.status != LpStatus::kOptimal) return result;

  const std::vector<double> split = tableau.extract(structural);
  result.solution.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    double x = split[static_cast<std::size_t>(positive_col[static_cast<std::size_t>(j)])];
    if (negative_col[static_cast<std::size_t>(j)] >= 0) {
      x -= split[static_cast<std::size_t>(negative_col[static_cast<std::size_t>(j)])];
    }
    result.solution[static_cast<std::size_t>(j)] = x;
  }
  result.value = lp.objective_offset;
  for (int j = 0; j < n; ++j) {
    result.value += lp.objective[static_cast<std::size_t>(j)] * result.solution[static_cast<std::size_t>(j)];
  }
  return result;
}

std::optional<LinearProgram> make_share_lp(const WeightFunction& w, int i) {
  require(i >= 0 && i < static_cast<int>(w.size()), "bidder out of range");
  for (double x : w) require(std::isfinite(x) && x >= 0, "weights must be finite, non-negative");
  if (w[static_cast<std::size_t>(i)] <= 0) return std::nullopt;  // share pinned to 0

  // variables: y_j for every positive-weight bidder, i first for convenience
  std::vector<int> vars{i};
  for (int j = 0; j < static_cast<int>(w.size()); ++j) {
    if (j != i && w[static_cast<std::size_t>(j)] > 0) vars.push_back(j);
  }
  const int k = static_cast<int>(vars.size());
  LinearProgram lp;
  lp.objective.assign(static_cast<std::size_t>(k), 0.0);
  lp.objective[0] = 1.0;
  lp.non_negative.assign(static_cast<std::size_t>(k), true);
  for (int idx = 1; idx < k; ++idx) {
    // y_i - y_j <= ln w(i) - ln w(j)
    std::vector<double> row(static_cast<std::size_t>(k), 0.0);
    row[0] = 1.0;
    row[static_cast<std::size_t>(idx)] = -1.0;
    lp.constraints.push_back(std::move(row));
    lp.bounds.push_back(std::log(w[static_cast<std::size_t>(i)]) -
                        std::log(w[static_cast<std::size_t>(vars[static_cast<std::size_t>(idx)])]));
  }
  lp.constraints.emplace_back(static_cast<std::size_t>(k), 1.0);
  lp.bounds.push_back(1.0);
  return lp;
}

std::optional<LinearProgram> make_time_lp(const WeightFunction& w, int i) {
  require(i >= 0 && i < static_cast<int>(w.size()), "bidder out of range");
  for (double x : w) require(std::isfinite(x) && x >= 0, "weights must be finite, non-negative");
  if (w[static_cast<std::size_t>(i)] <= 0) return std::nullopt;

  std::vector<int> vars;
  for (int j = 0; j < static_cast<int>(w.size()); ++j) {
    if (w[static_cast<std::size_t>(j)] > 0) vars.push_back(j);
  }
  const int k = static_cast<int>(vars.size());
  LinearProgram lp;  // variable 0 is the free stopping time t, then z_j
  lp.objective.assign(static_cast<std::size_t>(k) + 1, 0.0);
  lp.objective[0] = 1.0;
  lp.objective_offset = std::log(w[static_cast<std::size_t>(i)]);
  lp.non_negative.assign(static_cast<std::size_t>(k) + 1, true);
  lp.non_negative[0] = false;
  for (int idx = 0; idx < k; ++idx) {
    // t - z_j <= -ln w(j)
    std::vector<double> row(static_cast<std::size_t>(k) + 1, 0.0);
    row[0] = 1.0;
    row[static_cast<std::size_t>(idx) + 1] = -1.0;
    lp.constraints.push_back(std::move(row));
    lp.bounds.push_back(-std::log(w[static_cast<std::size_t>(vars[static_cast<std::size_t>(idx)])]));
  }
  std::vector<double> sum_row(static_cast<std::size_t>(k) + 1, 1.0);
  sum_row[0] = 0.0;
  lp.constraints.push_back(std::move(sum_row));
  lp.bounds.push_back(1.0);
  return lp;
}

double lp_share(const WeightFunction& w, int i) {
  auto lp = make_share_lp(w, i);
  if (!lp) return 0.0;
  SimplexResult result = simplex_solve(*lp);
  if (result.status == LpStatus::kInfeasible) return 0.0;
  if (result.status != LpStatus::kOptimal) {
    throw std::runtime_error("share LP cannot be unbounded");
  }
  return result.value;
}

}  // namespace iva
