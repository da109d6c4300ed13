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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "epsdc/errors.hpp"
#include "epsdc/lp.hpp"
#include "epsdc/max_affine.hpp"
#include "epsdc/subdiff.hpp"
#include "epsdc/vec.hpp"

// Set-level operations on subdifferential polytopes and dual-norm balls.
// Minkowski sums are never formed explicitly; they only appear as linear
// constraints inside feasibility LPs.

namespace epsdc {

// Closed ball of radius `radius` around the origin in the dual of the primal
// norm `primal` (primal L1 -> dual box, primal Linf -> dual cross-polytope).
struct DualBallSpec {
  double radius = 0.0;
  Norm primal = Norm::Linf;

  DualBallSpec() = default;
  DualBallSpec(double k, Norm n) : radius(k), primal(n) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
      throw InputError("ball radius must be finite and nonnegative, got " + std::to_string(k));
    }
  }
};

// Either a dual ball or the eps-subdifferential at the origin of a modulus h
// with h(0) = 0.
class ModulusSet {
 public:
  explicit ModulusSet(DualBallSpec ball) : rep_(ball) {}

  static ModulusSet ball(double radius, Norm primal) {
    return ModulusSet(DualBallSpec(radius, primal));
  }

  static ModulusSet polyhedral(const MaxAffine& h, double eps) {
    validate_modulus(h);
    return ModulusSet(SubdiffPolytope(h, Vec(h.dim(), 0.0), eps));
  }

  bool is_ball() const noexcept { return std::holds_alternative<DualBallSpec>(rep_); }
  const DualBallSpec& as_ball() const { return std::get<DualBallSpec>(rep_); }
  const SubdiffPolytope& as_polytope() const { return std::get<SubdiffPolytope>(rep_); }

 private:
  explicit ModulusSet(SubdiffPolytope p) : rep_(std::move(p)) {}
  std::variant<DualBallSpec, SubdiffPolytope> rep_;
};

namespace detail {

// A set embedded in an LP as the image of some variables under a linear map:
// coordinate k of a member is sum over coords[k] of coeff * z[var].
struct LinearImage {
  std::vector<std::vector<lp::LpBuilder::Term>> coords;

  Vec evaluate(const Vec& z) const {
    Vec out(coords.size(), 0.0);
    for (std::size_t k = 0; k < coords.size(); ++k) {
      for (const auto& [j, c] : coords[k]) out[k] += c * z[j];
    }
    return out;
  }
};

inline LinearImage embed(lp::LpBuilder& b, const SubdiffPolytope& s) {
  const std::size_t first = s.add_multipliers(b);
  LinearImage img;
  for (std::size_t k = 0; k < s.dim(); ++k) img.coords.push_back(s.coordinate_terms(first, k));
  return img;
}

inline LinearImage embed(lp::LpBuilder& b, const ModulusSet& m, std::size_t dim) {
  if (!m.is_ball()) {
    if (m.as_polytope().dim() != dim) throw InputError("modulus has wrong dimension");
    return embed(b, m.as_polytope());
  }
  const DualBallSpec& ball = m.as_ball();
  LinearImage img;
  img.coords.resize(dim);
  if (ball.primal == Norm::L1) {
    for (std::size_t k = 0; k < dim; ++k) {
      const std::size_t u = b.add_variable(-ball.radius, ball.radius);
      img.coords[k].emplace_back(u, 1.0);
    }
  } else {
    std::vector<lp::LpBuilder::Term> total;
    for (std::size_t k = 0; k < dim; ++k) {
      const std::size_t p = b.add_variable(0.0, std::nullopt);
      const std::size_t q = b.add_variable(0.0, std::nullopt);
      img.coords[k] = {{p, 1.0}, {q, -1.0}};
      total.emplace_back(p, 1.0);
      total.emplace_back(q, 1.0);
    }
    b.add_le(total, ball.radius);
  }
  return img;
}

inline std::vector<lp::LpBuilder::Term> difference(const std::vector<lp::LpBuilder::Term>& lhs,
                                                   const std::vector<lp::LpBuilder::Term>& rhs) {
  std::vector<lp::LpBuilder::Term> t = lhs;
  for (const auto& [j, c] : rhs) t.emplace_back(j, -c);
  return t;
}

// Adds variables measuring the dual norm of lhs - rhs; the LP minimizes it.
inline void add_dual_norm_objective(lp::LpBuilder& b, const LinearImage& lhs,
                                    const LinearImage& rhs, Norm primal) {
  const std::size_t dim = lhs.coords.size();
  if (primal == Norm::L1) {
    const std::size_t t = b.add_variable(0.0, std::nullopt, 1.0);
    for (std::size_t k = 0; k < dim; ++k) {
      auto r = difference(lhs.coords[k], rhs.coords[k]);
      auto up = r;
      up.emplace_back(t, -1.0);
      b.add_le(up, 0.0);
      auto down = r;
      for (auto& term : down) term.second = -term.second;
      down.emplace_back(t, -1.0);
      b.add_le(down, 0.0);
    }
  } else {
    for (std::size_t k = 0; k < dim; ++k) {
      const std::size_t p = b.add_variable(0.0, std::nullopt, 1.0);
      const std::size_t q = b.add_variable(0.0, std::nullopt, 1.0);
      auto r = difference(lhs.coords[k], rhs.coords[k]);
      r.emplace_back(p, -1.0);
      r.emplace_back(q, 1.0);
      b.add_eq(r, 0.0);
    }
  }
}

inline Vec ordering_key(const SubdiffPolytope& s) {
  Vec key{static_cast<double>(s.dim()), static_cast<double>(s.num_pieces()), s.epsilon()};
  key.insert(key.end(), s.point().begin(), s.point().end());
  for (const Piece& p : s.function().pieces()) {
    key.insert(key.end(), p.a.begin(), p.a.end());
    key.push_back(p.b);
  }
  return key;
}

inline void require_same_dim(const SubdiffPolytope& a, const SubdiffPolytope& b) {
  if (a.dim() != b.dim()) {
    throw InputError("sets live in different dimensions (" + std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()) + ")");
  }
}

inline double distance_ordered(const SubdiffPolytope& a, const SubdiffPolytope& b, Norm primal) {
  lp::LpBuilder lpb;
  const LinearImage ia = embed(lpb, a);
  const LinearImage ib = embed(lpb, b);
  add_dual_norm_objective(lpb, ia, ib, primal);
  const lp::LpSolution sol = lp::solve(lpb.problem());
  if (!sol.optimal()) throw NumericalError("distance: LP not optimal");
  return std::max(0.0, *sol.objective_value);
}

}  // namespace detail

// inf { ||a - b||_* : a in A, b in B } with ||.||_* dual to `primal`.
// Symmetric in its arguments bit for bit: the LP is always posed with the
// two sets in a canonical order.
inline double distance(const SubdiffPolytope& a, const SubdiffPolytope& b, Norm primal) {
  detail::require_same_dim(a, b);
  if (detail::lex_less(detail::ordering_key(b), detail::ordering_key(a))) {
    return detail::distance_ordered(b, a, primal);
  }
  return detail::distance_ordered(a, b, primal);
}

struct IntersectionResult {
  bool intersects = false;
  // Common point a = b + u, with a in A, b in B, u in M.
  std::optional<Vec> witness;
  std::optional<Vec> b_point;
  std::optional<Vec> modulus_point;
};

// Does A meet B + M? With `direction`, the returned witness maximizes
// <direction, u> over all decompositions a = b + u.
inline IntersectionResult intersects(const SubdiffPolytope& a, const SubdiffPolytope& b,
                                     const ModulusSet& m,
                                     std::optional<std::span<const double>> direction = {}) {
  detail::require_same_dim(a, b);
  lp::LpBuilder lpb;
  const detail::LinearImage ia = detail::embed(lpb, a);
  const detail::LinearImage ib = detail::embed(lpb, b);
  const detail::LinearImage im = detail::embed(lpb, m, a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) {
    lpb.add_eq(detail::difference(detail::difference(ia.coords[k], ib.coords[k]), im.coords[k]),
               0.0);
  }
  if (direction) {
    if (direction->size() != a.dim()) throw InputError("intersects: direction has wrong length");
    lp::LpProblem p = lpb.problem();
    for (std::size_t k = 0; k < a.dim(); ++k) {
      for (const auto& [j, c] : im.coords[k]) p.objective[j] -= (*direction)[k] * c;
    }
    const lp::LpSolution sol = lp::solve(p);
    if (sol.status == lp::Status::Infeasible) return {};
    if (!sol.optimal()) throw NumericalError("intersects: LP not optimal");
    return {true, ia.evaluate(*sol.z), ib.evaluate(*sol.z), im.evaluate(*sol.z)};
  }
  const lp::LpSolution sol = lp::solve(lpb.problem());
  if (!sol.optimal()) return {};
  return {true, ia.evaluate(*sol.z), ib.evaluate(*sol.z), im.evaluate(*sol.z)};
}

// Is the point v within kSetTol of B + M?
inline bool point_in_sum(std::span<const double> v, const SubdiffPolytope& b,
                         const ModulusSet& m) {
  lp::LpBuilder lpb;
  const detail::LinearImage ib = detail::embed(lpb, b);
  const detail::LinearImage im = detail::embed(lpb, m, b.dim());
  for (std::size_t k = 0; k < b.dim(); ++k) {
    auto t = ib.coords[k];
    t.insert(t.end(), im.coords[k].begin(), im.coords[k].end());
    lpb.add_le(t, v[k] + kSetTol);
    lpb.add_ge(t, v[k] - kSetTol);
  }
  return lp::solve(lpb.problem()).optimal();
}

// Smallest t with |v - (b + u)|_inf <= t for some b in B, u in M.
inline double sum_residual(std::span<const double> v, const SubdiffPolytope& b,
                           const ModulusSet& m) {
  lp::LpBuilder lpb;
  const detail::LinearImage ib = detail::embed(lpb, b);
  const detail::LinearImage im = detail::embed(lpb, m, b.dim());
  const std::size_t t = lpb.add_variable(0.0, std::nullopt, 1.0);
  for (std::size_t k = 0; k < b.dim(); ++k) {
    auto row = ib.coords[k];
    row.insert(row.end(), im.coords[k].begin(), im.coords[k].end());
    auto up = row;
    up.emplace_back(t, -1.0);
    lpb.add_le(up, v[k]);
    row.emplace_back(t, 1.0);
    lpb.add_ge(row, v[k]);
  }
  const lp::LpSolution sol = lp::solve(lpb.problem());
  if (!sol.optimal()) throw NumericalError("sum_residual: LP not optimal");
  return std::max(0.0, *sol.objective_value);
}

struct InclusionResult {
  bool included = true;
  // The vertex of A farthest (coordinatewise) from B + M when not included.
  std::optional<Vec> counterexample;
};

// Is A a subset of B + M? Checked on the vertices of A.
inline InclusionResult included_in_sum(const SubdiffPolytope& a, const SubdiffPolytope& b,
                                       const ModulusSet& m) {
  detail::require_same_dim(a, b);
  InclusionResult out;
  double worst = -1.0;
  for (const Vec& v : vertices(a)) {
    if (point_in_sum(v, b, m)) continue;
    const double r = sum_residual(v, b, m);
    if (r > worst) {
      worst = r;
      out = {false, v};
    }
  }
  return out;
}

// sup over a in A of the distance from a to B; attained at a vertex of A.
inline double directed_hausdorff(const SubdiffPolytope& a, const SubdiffPolytope& b,
                                 Norm primal) {
  detail::require_same_dim(a, b);
  double r = 0.0;
  for (const Vec& v : vertices(a)) {
    r = std::max(r, detail::distance_ordered(SubdiffPolytope::singleton(v), b, primal));
  }
  return r;
}

inline double hausdorff(const SubdiffPolytope& a, const SubdiffPolytope& b, Norm primal) {
  return std::max(directed_hausdorff(a, b, primal), directed_hausdorff(b, a, primal));
}

// Support function of M in direction d.
inline double modulus_set_support(const ModulusSet& m, std::span<const double> d) {
  if (m.is_ball()) return m.as_ball().radius * norm(d, m.as_ball().primal);
  return support(m.as_polytope(), d);
}

}  // namespace epsdc
