// Copyright 2026 The epsdc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "epsdc/errors.hpp"
#include "epsdc/vec.hpp"

// Dense two-phase primal simplex.
//
//   minimize   <c, z>
//   subject to A z  = b
//              G z <= g
//              lower_j <= z_j <= upper_j   (either side optional)
//
// Bounded variables are shifted/reflected onto z' >= 0, free variables are
// split, finite upper bounds on doubly-bounded variables become rows. Phase 1
// starts from slacks where possible and artificials elsewhere. Pivoting is
// Dantzig's rule until the objective stalls, then Bland's rule for the rest
// of the phase. On optimality the basic solution is recomputed from the
// original columns by a fresh LU solve, so residuals do not carry the
// accumulated tableau error.

namespace epsdc::lp {

enum class Status { Optimal, Infeasible, Unbounded };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
  }
  return "?";
}

struct LpProblem {
  Vec objective;
  std::vector<Vec> eq_matrix;
  Vec eq_rhs;
  std::vector<Vec> ineq_matrix;
  Vec ineq_rhs;
  // Empty means "no bound" for every variable.
  std::vector<std::optional<double>> lower;
  std::vector<std::optional<double>> upper;

  std::size_t num_vars() const noexcept { return objective.size(); }
};

struct LpSolution {
  Status status = Status::Infeasible;
  std::optional<Vec> z;
  std::optional<double> objective_value;
  std::size_t pivots = 0;

  bool optimal() const noexcept { return status == Status::Optimal; }
};

inline constexpr double kFeasTol = 1e-9;
inline constexpr double kOptTol = 1e-9;
inline constexpr double kPivotTol = 1e-9;
inline constexpr std::size_t kStallLimit = 1000;

// 1 + ||b||_inf + ||g||_inf; the scale of the feasibility tolerance.
inline double rhs_scale(const LpProblem& p) {
  return 1.0 + norm(p.eq_rhs, Norm::Linf) + norm(p.ineq_rhs, Norm::Linf);
}

// Largest violation of any constraint or bound at z.
inline double max_violation(const LpProblem& p, const Vec& z) {
  double v = 0.0;
  for (std::size_t r = 0; r < p.eq_matrix.size(); ++r) {
    v = std::max(v, std::fabs(dot(p.eq_matrix[r], z) - p.eq_rhs[r]));
  }
  for (std::size_t r = 0; r < p.ineq_matrix.size(); ++r) {
    v = std::max(v, dot(p.ineq_matrix[r], z) - p.ineq_rhs[r]);
  }
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (!p.lower.empty() && p.lower[j]) v = std::max(v, *p.lower[j] - z[j]);
    if (!p.upper.empty() && p.upper[j]) v = std::max(v, z[j] - *p.upper[j]);
  }
  return v;
}

// Largest constraint residual at z, each row measured against
// scale + sum_j |a_rj z_j| so that rows with large activity are judged
// relative to it. Bounds are measured against scale + |bound|.
inline double scaled_violation(const LpProblem& p, const Vec& z, double scale) {
  auto activity = [&](const Vec& row) {
    double s = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) s += std::fabs(row[j] * z[j]);
    return s;
  };
  double v = 0.0;
  for (std::size_t r = 0; r < p.eq_matrix.size(); ++r) {
    const double res = std::fabs(dot(p.eq_matrix[r], z) - p.eq_rhs[r]);
    v = std::max(v, res / (scale + activity(p.eq_matrix[r])));
  }
  for (std::size_t r = 0; r < p.ineq_matrix.size(); ++r) {
    const double res = dot(p.ineq_matrix[r], z) - p.ineq_rhs[r];
    v = std::max(v, res / (scale + activity(p.ineq_matrix[r])));
  }
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (!p.lower.empty() && p.lower[j]) {
      v = std::max(v, (*p.lower[j] - z[j]) / (scale + std::fabs(*p.lower[j])));
    }
    if (!p.upper.empty() && p.upper[j]) {
      v = std::max(v, (z[j] - *p.upper[j]) / (scale + std::fabs(*p.upper[j])));
    }
  }
  return v;
}

namespace detail {

inline void validate(const LpProblem& p) {
  const std::size_t n = p.num_vars();
  auto bad = [](const std::string& what) { throw InputError("lp: " + what); };
  if (p.eq_matrix.size() != p.eq_rhs.size()) bad("eq_matrix/eq_rhs row count mismatch");
  if (p.ineq_matrix.size() != p.ineq_rhs.size()) bad("ineq_matrix/ineq_rhs row count mismatch");
  for (const Vec& row : p.eq_matrix) {
    if (row.size() != n) bad("eq_matrix row length differs from objective length");
    if (!all_finite(row)) bad("non-finite entry in eq_matrix");
  }
  for (const Vec& row : p.ineq_matrix) {
    if (row.size() != n) bad("ineq_matrix row length differs from objective length");
    if (!all_finite(row)) bad("non-finite entry in ineq_matrix");
  }
  if (!p.lower.empty() && p.lower.size() != n) bad("lower bound vector length mismatch");
  if (!p.upper.empty() && p.upper.size() != n) bad("upper bound vector length mismatch");
  if (!all_finite(p.objective) || !all_finite(p.eq_rhs) || !all_finite(p.ineq_rhs)) {
    bad("non-finite objective or right-hand side");
  }
  for (const auto* bounds : {&p.lower, &p.upper}) {
    for (const auto& b : *bounds) {
      if (b && !std::isfinite(*b)) bad("non-finite bound (omit the bound instead)");
    }
  }
}

// z_j = offset + sum over (column, sign) of sign * x'_column.
struct VarMap {
  double offset = 0.0;
  std::size_t col = 0;
  double sign = 1.0;
  std::optional<std::size_t> neg_col;  // free variables: z = x+ - x-
};

// Standard form: min c'x, A x = b, x >= 0.
struct StandardForm {
  std::vector<Vec> a;  // rows x cols
  Vec b;
  Vec c;
  double c0 = 0.0;
  std::vector<std::optional<std::size_t>> slack;  // per row: a +1 slack column
  std::vector<VarMap> map;
  std::size_t cols = 0;
};

inline StandardForm to_standard_form(const LpProblem& p) {
  const std::size_t n = p.num_vars();
  StandardForm s;
  s.map.resize(n);
  std::vector<std::pair<std::size_t, double>> upper_rows;  // (col, ub - lb)
  for (std::size_t j = 0; j < n; ++j) {
    const std::optional<double> lo = p.lower.empty() ? std::nullopt : p.lower[j];
    const std::optional<double> hi = p.upper.empty() ? std::nullopt : p.upper[j];
    VarMap& m = s.map[j];
    m.col = s.cols++;
    if (lo) {
      m.offset = *lo;
      if (hi) upper_rows.emplace_back(m.col, *hi - *lo);
    } else if (hi) {
      m.offset = *hi;
      m.sign = -1.0;
    } else {
      m.neg_col = s.cols++;
    }
  }
  const std::size_t n_eq = p.eq_matrix.size();
  const std::size_t n_in = p.ineq_matrix.size();
  const std::size_t n_slack = n_in + upper_rows.size();
  const std::size_t rows = n_eq + n_slack;
  const std::size_t first_slack = s.cols;
  s.cols += n_slack;
  s.a.assign(rows, Vec(s.cols, 0.0));
  s.b.assign(rows, 0.0);
  s.slack.assign(rows, std::nullopt);
  s.c.assign(s.cols, 0.0);

  auto load_row = [&](std::size_t r, const Vec& coeffs, double rhs) {
    double shifted = rhs;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = coeffs[j];
      if (v == 0.0) continue;
      const VarMap& m = s.map[j];
      shifted -= v * m.offset;
      s.a[r][m.col] += v * m.sign;
      if (m.neg_col) s.a[r][*m.neg_col] -= v;
    }
    s.b[r] = shifted;
  };
  for (std::size_t r = 0; r < n_eq; ++r) load_row(r, p.eq_matrix[r], p.eq_rhs[r]);
  for (std::size_t r = 0; r < n_in; ++r) {
    load_row(n_eq + r, p.ineq_matrix[r], p.ineq_rhs[r]);
    s.a[n_eq + r][first_slack + r] = 1.0;
    s.slack[n_eq + r] = first_slack + r;
  }
  for (std::size_t k = 0; k < upper_rows.size(); ++k) {
    const std::size_t r = n_eq + n_in + k;
    s.a[r][upper_rows[k].first] = 1.0;
    s.a[r][first_slack + n_in + k] = 1.0;
    s.b[r] = upper_rows[k].second;
    s.slack[r] = first_slack + n_in + k;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const VarMap& m = s.map[j];
    s.c0 += p.objective[j] * m.offset;
    s.c[m.col] += p.objective[j] * m.sign;
    if (m.neg_col) s.c[*m.neg_col] -= p.objective[j];
  }
  // Nonnegative right-hand sides; a flipped row loses its slack as a basis
  // candidate.
  for (std::size_t r = 0; r < rows; ++r) {
    if (s.b[r] < 0.0) {
      for (double& v : s.a[r]) v = -v;
      s.b[r] = -s.b[r];
      s.slack[r] = std::nullopt;
    }
  }
  return s;
}

// Solves the square system M y = rhs by Gaussian elimination with partial
// pivoting. Returns nullopt when M is numerically singular.
inline std::optional<Vec> lu_solve(std::vector<Vec> m, Vec rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::fabs(m[i][k]) > std::fabs(m[piv][k])) piv = i;
    }
    if (std::fabs(m[piv][k]) < 1e-13) return std::nullopt;
    std::swap(m[piv], m[k]);
    std::swap(rhs[piv], rhs[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m[i][k] / m[k][k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
      rhs[i] -= f * rhs[k];
    }
  }
  Vec y(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = rhs[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= m[k][j] * y[j];
    y[k] = s / m[k][k];
  }
  return y;
}

class Tableau {
 public:
  enum class Outcome { Optimal, Unbounded, IterationCap };

  // Rows of `a` with right-hand sides `b` (all b >= 0); columns >= `n_real`
  // are artificial.
  Tableau(std::vector<Vec> a, Vec b, std::vector<std::size_t> basis, std::size_t n_real)
      : rows_(std::move(a)), basis_(std::move(basis)), n_real_(n_real) {
    for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i].push_back(b[i]);
    cols_ = rows_.empty() ? n_real_ : rows_[0].size() - 1;
  }

  std::size_t num_rows() const noexcept { return rows_.size(); }
  std::size_t num_cols() const noexcept { return cols_; }
  const std::vector<std::size_t>& basis() const noexcept { return basis_; }
  double rhs(std::size_t i) const { return rows_[i][cols_]; }
  std::size_t pivots() const noexcept { return pivots_; }

  // Objective value of the cost vector (length num_cols) at the current basis.
  void set_costs(const Vec& cost) {
    obj_.assign(cols_ + 1, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) obj_[j] = cost[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= cb * rows_[i][j];
    }
  }

  double objective() const { return -obj_[cols_]; }

  Outcome run(std::size_t allowed_cols, std::size_t cap) {
    const std::size_t stall_limit =
        std::min<std::size_t>(kStallLimit, 2 * (cols_ + rows_.size()));
    bool bland = false;
    std::size_t stall = 0;
    double last = objective();
    for (std::size_t it = 0;; ++it) {
      if (pivots_ >= cap) return Outcome::IterationCap;
      std::optional<std::size_t> enter;
      double best = -kOptTol;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (obj_[j] < best) {
          enter = j;
          if (bland) break;
          best = obj_[j];
        }
      }
      if (!enter) return Outcome::Optimal;
      const std::optional<std::size_t> leave = ratio_test(*enter, bland);
      if (!leave) return Outcome::Unbounded;
      pivot(*leave, *enter);
      const double now = objective();
      if (now < last - 1e-12 * (1.0 + std::fabs(last))) {
        stall = 0;
        last = now;
      } else if (++stall >= stall_limit) {
        bland = true;
      }
    }
  }

  // Pivots artificial columns out of the basis; rows where that is impossible
  // are linearly dependent and are dropped. Then removes artificial columns.
  void drop_artificials() {
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < n_real_) {
        ++i;
        continue;
      }
      std::optional<std::size_t> col;
      double best = kPivotTol;
      for (std::size_t j = 0; j < n_real_; ++j) {
        if (std::fabs(rows_[i][j]) > best) {
          best = std::fabs(rows_[i][j]);
          col = j;
        }
      }
      if (col) {
        pivot(i, *col);
        ++i;
      } else {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
    for (Vec& r : rows_) {
      const double rhs = r[cols_];
      r.resize(n_real_);
      r.push_back(rhs);
    }
    cols_ = n_real_;
  }

 private:
  std::optional<std::size_t> ratio_test(std::size_t col, bool bland) const {
    std::optional<std::size_t> leave;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const double piv = rows_[i][col];
      if (piv <= kPivotTol) continue;
      const double ratio = std::max(0.0, rows_[i][cols_]) / piv;
      if (!leave) {
        leave = i;
        best_ratio = ratio;
        continue;
      }
      const double slack = 1e-12 * (1.0 + best_ratio);
      if (ratio < best_ratio - slack) {
        leave = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + slack) {
        // Tie: Bland leaves the smallest basic index; otherwise prefer the
        // larger pivot element.
        const bool take = bland ? basis_[i] < basis_[*leave]
                                : (piv > rows_[*leave][col] ||
                                   (piv == rows_[*leave][col] && basis_[i] < basis_[*leave]));
        if (take) {
          leave = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
    }
    return leave;
  }

  void pivot(std::size_t r, std::size_t c) {
    ++pivots_;
    Vec& pr = rows_[r];
    const double inv = 1.0 / pr[c];
    for (double& v : pr) v *= inv;
    pr[c] = 1.0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == r) continue;
      Vec& row = rows_[i];
      const double f = row[c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) row[j] -= f * pr[j];
      row[c] = 0.0;
      if (row[cols_] < 0.0 && row[cols_] > -kFeasTol) row[cols_] = 0.0;
    }
    if (!obj_.empty()) {
      const double f = obj_[c];
      if (f != 0.0) {
        for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= f * pr[j];
        obj_[c] = 0.0;
      }
    }
    basis_[r] = c;
  }

  std::vector<Vec> rows_;
  Vec obj_;
  std::vector<std::size_t> basis_;
  std::size_t n_real_;
  std::size_t cols_ = 0;
  std::size_t pivots_ = 0;
};

}  // namespace detail

// Solves the problem. Throws InputError on inconsistent dimensions and
// NumericalError when the pivot cap 50 * (#vars + #constraints) is exceeded
// or the final basis fails the feasibility check.
inline LpSolution solve(const LpProblem& p) {
  detail::validate(p);
  const std::size_t n = p.num_vars();
  for (std::size_t j = 0; j < n && !p.lower.empty() && !p.upper.empty(); ++j) {
    if (p.lower[j] && p.upper[j] && *p.lower[j] > *p.upper[j]) {
      return LpSolution{Status::Infeasible, std::nullopt, std::nullopt, 0};
    }
  }
  detail::StandardForm sf = detail::to_standard_form(p);
  const std::size_t rows = sf.a.size();
  const std::size_t cap = 50 * (sf.cols + rows + 1);
  const double feas_tol = kFeasTol * rhs_scale(p);

  // Phase 1 columns: real columns, then one artificial per row lacking a
  // usable slack.
  std::vector<std::size_t> basis(rows);
  std::vector<Vec> a = sf.a;
  std::size_t n_art = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!sf.slack[r]) ++n_art;
  }
  const std::size_t total = sf.cols + n_art;
  std::size_t next_art = sf.cols;
  for (std::size_t r = 0; r < rows; ++r) {
    a[r].resize(total, 0.0);
    if (sf.slack[r]) {
      basis[r] = *sf.slack[r];
    } else {
      a[r][next_art] = 1.0;
      basis[r] = next_art++;
    }
  }
  detail::Tableau tab(std::move(a), sf.b, std::move(basis), sf.cols);
  std::size_t pivots = 0;
  if (n_art > 0) {
    Vec cost(total, 0.0);
    for (std::size_t j = sf.cols; j < total; ++j) cost[j] = 1.0;
    tab.set_costs(cost);
    const auto out = tab.run(total, cap);
    if (out == detail::Tableau::Outcome::IterationCap) {
      throw NumericalError("lp: iteration cap exceeded in phase 1");
    }
    if (tab.objective() > feas_tol) {
      return LpSolution{Status::Infeasible, std::nullopt, std::nullopt, tab.pivots()};
    }
    tab.drop_artificials();
  }
  tab.set_costs(sf.c);
  const auto out = tab.run(tab.num_cols(), cap);
  pivots = tab.pivots();
  if (out == detail::Tableau::Outcome::IterationCap) {
    throw NumericalError("lp: iteration cap exceeded in phase 2");
  }
  if (out == detail::Tableau::Outcome::Unbounded) {
    return LpSolution{Status::Unbounded, std::nullopt, std::nullopt, pivots};
  }

  // Basic solution from the tableau, refined by a fresh solve against the
  // original standard-form rows that remain (dropped rows are dependent).
  Vec x(sf.cols, 0.0);
  const auto& bas = tab.basis();
  for (std::size_t i = 0; i < bas.size(); ++i) x[bas[i]] = std::max(0.0, tab.rhs(i));
  if (bas.size() == rows && rows > 0) {
    std::vector<Vec> bm(rows, Vec(rows));
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t i = 0; i < rows; ++i) bm[r][i] = sf.a[r][bas[i]];
    }
    if (auto xb = detail::lu_solve(std::move(bm), sf.b)) {
      bool ok = true;
      for (double v : *xb) ok = ok && v > -feas_tol;
      if (ok) {
        for (std::size_t i = 0; i < rows; ++i) x[bas[i]] = std::max(0.0, (*xb)[i]);
      }
    }
  }
  Vec z(n);
  for (std::size_t j = 0; j < n; ++j) {
    const detail::VarMap& m = sf.map[j];
    z[j] = m.offset + m.sign * x[m.col];
    if (m.neg_col) z[j] -= x[*m.neg_col];
  }
  // Snap onto bounds violated only by rounding.
  for (std::size_t j = 0; j < n; ++j) {
    if (!p.lower.empty() && p.lower[j]) z[j] = std::max(z[j], *p.lower[j]);
    if (!p.upper.empty() && p.upper[j]) z[j] = std::min(z[j], *p.upper[j]);
  }
  if (scaled_violation(p, z, rhs_scale(p)) > kFeasTol) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", max_violation(p, z));
    throw NumericalError(std::string("lp: final basis violates the constraints by ") + buf);
  }
  const double obj = dot(p.objective, z);
  return LpSolution{Status::Optimal, std::move(z), obj, pivots};
}

// Incremental construction of an LpProblem by sparse rows.
class LpBuilder {
 public:
  using Term = std::pair<std::size_t, double>;

  std::size_t add_variable(std::optional<double> lower, std::optional<double> upper,
                           double cost = 0.0) {
    p_.objective.push_back(cost);
    p_.lower.push_back(lower);
    p_.upper.push_back(upper);
    for (Vec& r : p_.eq_matrix) r.push_back(0.0);
    for (Vec& r : p_.ineq_matrix) r.push_back(0.0);
    return p_.objective.size() - 1;
  }

  // First index of `count` new variables sharing the same bounds.
  std::size_t add_variables(std::size_t count, std::optional<double> lower,
                            std::optional<double> upper) {
    const std::size_t first = p_.objective.size();
    for (std::size_t k = 0; k < count; ++k) add_variable(lower, upper);
    return first;
  }

  void set_cost(std::size_t var, double cost) { p_.objective[var] = cost; }

  void add_eq(const std::vector<Term>& terms, double rhs) {
    p_.eq_matrix.push_back(dense(terms));
    p_.eq_rhs.push_back(rhs);
  }

  void add_le(const std::vector<Term>& terms, double rhs) {
    p_.ineq_matrix.push_back(dense(terms));
    p_.ineq_rhs.push_back(rhs);
  }

  void add_ge(const std::vector<Term>& terms, double rhs) {
    std::vector<Term> neg = terms;
    for (Term& t : neg) t.second = -t.second;
    add_le(neg, -rhs);
  }

  std::size_t num_vars() const noexcept { return p_.objective.size(); }
  const LpProblem& problem() const noexcept { return p_; }

 private:
  Vec dense(const std::vector<Term>& terms) const {
    Vec row(p_.objective.size(), 0.0);
    for (const auto& [j, v] : terms) row.at(j) += v;
    return row;
  }

  LpProblem p_;
};

}  // namespace epsdc::lp
