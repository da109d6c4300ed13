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
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "epsdc/errors.hpp"
#include "epsdc/lp.hpp"
#include "epsdc/max_affine.hpp"
#include "epsdc/vec.hpp"

// Epsilon-subdifferentials of max-affine functions.
//
// For f = max_i (<a_i, .> + b_i), a slope s is an eps-subgradient of f at x
// iff s = sum_i lambda_i a_i for some lambda in the unit simplex with
//
//   sum_i lambda_i * gap_i <= eps,   gap_i = f(x) - (<a_i, x> + b_i) >= 0.
//
// The set is kept in this multiplier form; queries are LPs over lambda.

namespace epsdc {

// Equality band used by membership-type LPs.
inline constexpr double kSetTol = 1e-9;

// Largest piece count accepted by vertex enumeration.
inline constexpr std::size_t kMaxVertexPieces = 64;

class SubdiffPolytope {
 public:
  SubdiffPolytope(MaxAffine f, Vec x, double eps)
      : f_(std::move(f)), x_(std::move(x)), eps_(eps) {
    require_dim(f_, x_);
    if (!(eps_ >= 0.0) || !std::isfinite(eps_)) {
      throw InputError("epsilon must be finite and nonnegative, got " + std::to_string(eps_));
    }
    value_ = eval(f_, x_);
    const double snap = kActiveTol * std::max(1.0, std::fabs(value_));
    gaps_.resize(f_.size());
    for (std::size_t i = 0; i < f_.size(); ++i) {
      const double g = value_ - f_.piece_value(i, x_);
      gaps_[i] = g <= snap ? 0.0 : g;
    }
  }

  // The singleton {s}, as the subdifferential of the linear map <s, .>.
  static SubdiffPolytope singleton(Vec s) {
    const std::size_t n = s.size();
    return SubdiffPolytope(MaxAffine(n, {Piece{std::move(s), 0.0}}), Vec(n, 0.0), 0.0);
  }

  const MaxAffine& function() const noexcept { return f_; }
  const Vec& point() const noexcept { return x_; }
  double epsilon() const noexcept { return eps_; }
  double value() const noexcept { return value_; }
  std::size_t dim() const noexcept { return f_.dim(); }
  std::size_t num_pieces() const noexcept { return f_.size(); }
  const Vec& gradient(std::size_t i) const { return f_.piece(i).a; }
  const Vec& gaps() const noexcept { return gaps_; }

  // sum_i lambda_i a_i
  Vec image(std::span<const double> lambda) const {
    Vec s(dim(), 0.0);
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      if (lambda[i] == 0.0) continue;
      for (std::size_t k = 0; k < dim(); ++k) s[k] += lambda[i] * gradient(i)[k];
    }
    return s;
  }

  // Adds num_pieces() multiplier variables constrained to the feasible
  // multiplier set; returns the index of the first one.
  std::size_t add_multipliers(lp::LpBuilder& b) const {
    const std::size_t first = b.add_variables(num_pieces(), 0.0, std::nullopt);
    std::vector<lp::LpBuilder::Term> simplex, cut;
    for (std::size_t i = 0; i < num_pieces(); ++i) {
      simplex.emplace_back(first + i, 1.0);
      if (gaps_[i] > 0.0) cut.emplace_back(first + i, gaps_[i]);
    }
    b.add_eq(simplex, 1.0);
    if (!cut.empty()) b.add_le(cut, eps_);
    return first;
  }

  // Terms of coordinate k of the image of the multipliers starting at `first`,
  // scaled by `sign`.
  std::vector<lp::LpBuilder::Term> coordinate_terms(std::size_t first, std::size_t k,
                                                    double sign = 1.0) const {
    std::vector<lp::LpBuilder::Term> t;
    for (std::size_t i = 0; i < num_pieces(); ++i) {
      const double v = gradient(i)[k];
      if (v != 0.0) t.emplace_back(first + i, sign * v);
    }
    return t;
  }

 private:
  MaxAffine f_;
  Vec x_;
  double eps_;
  double value_ = 0.0;
  Vec gaps_;
};

inline SubdiffPolytope eps_subdiff(const MaxAffine& f, const Vec& x, double eps) {
  return SubdiffPolytope(f, x, eps);
}

// Fenchel subdifferential: convex hull of the active gradients.
inline SubdiffPolytope exact_subdiff(const MaxAffine& f, const Vec& x) {
  return SubdiffPolytope(f, x, 0.0);
}

// max { <s, d> : s in S }
inline double support(const SubdiffPolytope& s, std::span<const double> d) {
  if (d.size() != s.dim()) throw InputError("support: direction has wrong dimension");
  lp::LpBuilder b;
  const std::size_t first = s.add_multipliers(b);
  for (std::size_t i = 0; i < s.num_pieces(); ++i) b.set_cost(first + i, -dot(s.gradient(i), d));
  const lp::LpSolution sol = lp::solve(b.problem());
  if (!sol.optimal()) throw NumericalError("support: multiplier LP not optimal");
  return -*sol.objective_value;
}

// Is s within `tol` (componentwise) of a point of S?
inline bool contains(const SubdiffPolytope& S, std::span<const double> s,
                     double tol = kSetTol) {
  if (s.size() != S.dim()) throw InputError("contains: point has wrong dimension");
  lp::LpBuilder b;
  const std::size_t first = S.add_multipliers(b);
  for (std::size_t k = 0; k < S.dim(); ++k) {
    const auto t = S.coordinate_terms(first, k);
    b.add_le(t, s[k] + tol);
    b.add_ge(t, s[k] - tol);
  }
  return lp::solve(b.problem()).optimal();
}

namespace detail {

inline bool lex_less(const Vec& u, const Vec& v) {
  return std::lexicographical_compare(u.begin(), u.end(), v.begin(), v.end());
}

// Is p within `tol` (per coordinate) of the convex hull of `pts`? The LP is
// posed in coordinates centred on the centroid and scaled by the spread of
// the points, so clusters far smaller than their magnitude stay well
// conditioned.
inline bool in_hull(const std::vector<Vec>& pts, const Vec& p, double tol) {
  if (pts.empty()) return false;
  const std::size_t dim = p.size();
  Vec centre(dim, 0.0);
  for (const Vec& q : pts) {
    for (std::size_t k = 0; k < dim; ++k) centre[k] += q[k] / static_cast<double>(pts.size());
  }
  double spread = 0.0;
  for (const Vec& q : pts) spread = std::max(spread, max_abs_diff(q, centre));
  spread = std::max(spread, max_abs_diff(p, centre));
  if (spread <= tol) return true;
  lp::LpBuilder b;
  const std::size_t first = b.add_variables(pts.size(), 0.0, std::nullopt);
  std::vector<lp::LpBuilder::Term> simplex;
  for (std::size_t i = 0; i < pts.size(); ++i) simplex.emplace_back(first + i, 1.0);
  b.add_eq(simplex, 1.0);
  const double band = tol / spread;
  for (std::size_t k = 0; k < dim; ++k) {
    std::vector<lp::LpBuilder::Term> t;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double c = (pts[i][k] - centre[k]) / spread;
      if (c != 0.0) t.emplace_back(first + i, c);
    }
    const double target = (p[k] - centre[k]) / spread;
    b.add_le(t, target + band);
    b.add_ge(t, target - band);
  }
  return lp::solve(b.problem()).optimal();
}

// Extreme points of a finite set, lexicographically sorted.
inline std::vector<Vec> extreme_points(std::vector<Vec> pts, double tol) {
  std::sort(pts.begin(), pts.end(), lex_less);
  std::vector<Vec> uniq;
  for (Vec& p : pts) {
    const bool dup = std::any_of(uniq.begin(), uniq.end(),
                                 [&](const Vec& q) { return max_abs_diff(p, q) <= tol; });
    if (!dup) uniq.push_back(std::move(p));
  }
  if (uniq.size() <= 2) return uniq;
  if (uniq.front().size() == 1) return {uniq.front(), uniq.back()};
  std::vector<Vec> kept = uniq;
  for (std::size_t i = 0; i < kept.size();) {
    std::vector<Vec> others;
    for (std::size_t j = 0; j < kept.size(); ++j) {
      if (j != i) others.push_back(kept[j]);
    }
    if (in_hull(others, kept[i], tol)) {
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  return kept;
}

}  // namespace detail

// Vertices of S, lexicographically sorted. The multiplier polytope is the unit
// simplex cut by one halfspace; its vertices are the simplex vertices inside
// the cut and the points where the cut hyperplane crosses a simplex edge.
// Their images are reduced to extreme points.
inline std::vector<Vec> vertices(const SubdiffPolytope& S) {
  const std::size_t m = S.num_pieces();
  if (m > kMaxVertexPieces) {
    throw CapacityError("vertices: " + std::to_string(m) + " pieces exceeds the limit of " +
                        std::to_string(kMaxVertexPieces));
  }
  const Vec& gap = S.gaps();
  const double eps = S.epsilon();
  std::vector<Vec> cand;
  for (std::size_t i = 0; i < m; ++i) {
    if (gap[i] <= eps) cand.push_back(S.gradient(i));
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(gap[i] <= eps && eps < gap[j])) continue;
      const double li = (gap[j] - eps) / (gap[j] - gap[i]);
      const double lj = 1.0 - li;
      Vec p(S.dim());
      for (std::size_t k = 0; k < S.dim(); ++k) {
        p[k] = li * S.gradient(i)[k] + lj * S.gradient(j)[k];
      }
      cand.push_back(std::move(p));
    }
  }
  return detail::extreme_points(std::move(cand), kSetTol);
}

}  // namespace epsdc
