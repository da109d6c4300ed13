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
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "epsdc/errors.hpp"
#include "epsdc/lp.hpp"
#include "epsdc/max_affine.hpp"
#include "epsdc/vec.hpp"

// Ground truth that does not go through subdifferentials: Lipschitz constants
// of f - g from its cell decomposition or from sampling, the defining
// inequality of an eps-subgradient on sample points, and seeded instances.

namespace epsdc::oracle {

// Strict-domination margin above which a coincidence cell counts as
// full-dimensional.
inline constexpr double kCellMargin = 1e-7;

// Portable uniform generator: std::mt19937_64 words mapped to [0, 1) through
// their top 53 bits. Unlike std::uniform_real_distribution this mapping is
// fixed, so seeded output is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  // Uniform integer in [lo, hi].
  std::size_t index(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(uniform01() * static_cast<double>(hi - lo + 1));
  }
  std::mt19937_64& engine() noexcept { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// A full-dimensional region where piece i of f and piece j of g are both
// maximal, witnessed by a point dominating every other piece by `margin`.
struct CellWitness {
  std::size_t f_piece = 0;
  std::size_t g_piece = 0;
  double gradient_gap = 0.0;
  Vec interior_point;
  double margin = 0.0;
};

struct ExactLipschitz {
  double constant = 0.0;
  CellWitness witness;
  // Every full-dimensional cell, in (i, j) order.
  std::vector<CellWitness> cells;
};

namespace detail {

// Adds rows <a_k - a_i, x> + t <= b_i - b_k for every piece k of `h` that is
// not an exact copy of piece i.
inline void add_domination_rows(lp::LpBuilder& b, const MaxAffine& h, std::size_t i,
                                std::size_t x0, std::size_t t) {
  const Piece& pi = h.piece(i);
  for (std::size_t k = 0; k < h.size(); ++k) {
    const Piece& pk = h.piece(k);
    if (k == i || pk == pi) continue;
    std::vector<lp::LpBuilder::Term> row;
    for (std::size_t d = 0; d < h.dim(); ++d) {
      const double c = pk.a[d] - pi.a[d];
      if (c != 0.0) row.emplace_back(x0 + d, c);
    }
    row.emplace_back(t, 1.0);
    b.add_le(row, pi.b - pk.b);
  }
}

}  // namespace detail

// Largest margin (capped at 1) by which piece i of f and piece j of g can
// simultaneously dominate, and the point attaining it.
inline std::pair<double, Vec> cell_margin(const MaxAffine& f, const MaxAffine& g,
                                          std::size_t i, std::size_t j) {
  lp::LpBuilder b;
  const std::size_t x0 = b.add_variables(f.dim(), std::nullopt, std::nullopt);
  const std::size_t t = b.add_variable(std::nullopt, 1.0, -1.0);
  detail::add_domination_rows(b, f, i, x0, t);
  detail::add_domination_rows(b, g, j, x0, t);
  const lp::LpSolution sol = lp::solve(b.problem());
  if (!sol.optimal()) throw NumericalError("cell_margin: LP not optimal");
  const Vec& z = *sol.z;
  return {z[t], Vec(z.begin() + static_cast<std::ptrdiff_t>(x0),
                    z.begin() + static_cast<std::ptrdiff_t>(x0 + f.dim()))};
}

// Exact Lipschitz constant of f - g on R^n in the primal norm: the largest
// dual-norm gradient gap ||a_i - c_j||_* over full-dimensional coincidence
// cells. Ties go to the lowest (i, j).
inline ExactLipschitz lipschitz_exact(const MaxAffine& f, const MaxAffine& g, Norm primal) {
  if (f.dim() != g.dim()) throw InputError("lipschitz_exact: f and g differ in dimension");
  ExactLipschitz out;
  bool found = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      auto [margin, point] = cell_margin(f, g, i, j);
      if (!(margin > kCellMargin)) continue;
      CellWitness w{i, j, dual_norm(subtract(f.piece(i).a, g.piece(j).a), primal),
                    std::move(point), margin};
      if (!found || w.gradient_gap > out.witness.gradient_gap) {
        out.witness = w;
        out.constant = w.gradient_gap;
        found = true;
      }
      out.cells.push_back(std::move(w));
    }
  }
  if (!found) throw NumericalError("lipschitz_exact: no full-dimensional cell found");
  return out;
}

namespace detail {

// (value, argmax) of h at x in extended precision.
inline std::pair<long double, std::size_t> eval_ld(const MaxAffine& h, const Vec& x) {
  long double best = 0.0L;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    long double v = h.piece(i).b;
    for (std::size_t k = 0; k < x.size(); ++k) {
      v += static_cast<long double>(h.piece(i).a[k]) * x[k];
    }
    if (i == 0 || v > best) {
      best = v;
      arg = i;
    }
  }
  return {best, arg};
}

inline long double dot_ld(const Vec& a, const std::vector<long double>& d) {
  long double s = 0.0L;
  for (std::size_t k = 0; k < a.size(); ++k) s += static_cast<long double>(a[k]) * d[k];
  return s;
}

// h(x) - h(y), clamped to the interval [<a_j, x - y>, <a_i, x - y>] that
// convexity guarantees (i active at x, j active at y). When one piece is
// active at both points the result is the inner product itself, free of the
// cancellation in subtracting two nearby values.
inline long double increment(const MaxAffine& h, const Vec& x, const Vec& y,
                             const std::vector<long double>& d) {
  const auto [hx, i] = eval_ld(h, x);
  const auto [hy, j] = eval_ld(h, y);
  const long double lo = dot_ld(h.piece(j).a, d);
  const long double hi = dot_ld(h.piece(i).a, d);
  if (i == j) return hi;
  return std::clamp(hx - hy, std::min(lo, hi), std::max(lo, hi));
}

}  // namespace detail

// Largest difference quotient |(f-g)(x) - (f-g)(y)| / ||x - y|| over
// `n_pairs` seeded uniform pairs in the box [lo, hi], evaluated in extended
// precision.
inline double lipschitz_sampled(const MaxAffine& f, const MaxAffine& g, const Vec& lo,
                                const Vec& hi, std::size_t n_pairs, std::uint64_t seed,
                                Norm primal) {
  const std::size_t n = f.dim();
  if (g.dim() != n || lo.size() != n || hi.size() != n) {
    throw InputError("lipschitz_sampled: dimension mismatch");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!(lo[k] < hi[k])) throw InputError("lipschitz_sampled: degenerate box");
  }
  if (n_pairs == 0) throw InputError("lipschitz_sampled: n_pairs must be positive");
  Rng rng(seed);
  double best = 0.0;
  Vec x(n), y(n);
  std::vector<long double> d(n);
  for (std::size_t s = 0; s < n_pairs;) {
    for (std::size_t k = 0; k < n; ++k) x[k] = rng.uniform(lo[k], hi[k]);
    for (std::size_t k = 0; k < n; ++k) y[k] = rng.uniform(lo[k], hi[k]);
    long double dist = 0.0L;
    for (std::size_t k = 0; k < n; ++k) {
      d[k] = static_cast<long double>(x[k]) - y[k];
      const long double ad = std::fabs(d[k]);
      dist = primal == Norm::L1 ? dist + ad : std::max(dist, ad);
    }
    if (dist == 0.0L) continue;
    ++s;
    const long double diff = detail::increment(f, x, y, d) - detail::increment(g, x, y, d);
    best = std::max(best, static_cast<double>(std::fabs(diff) / dist));
  }
  return best;
}

// Tests f(y) - f(x) >= <y - x, s> - eps (up to 1e-9) at every sample y. A
// false answer proves s is not an eps-subgradient; true is only evidence.
inline bool definitional_membership(const MaxAffine& f, const Vec& x, const Vec& s, double eps,
                                    const PointSet& y_samples) {
  if (!(eps >= 0.0)) throw InputError("definitional_membership: eps must be nonnegative");
  require_dim(f, x);
  require_dim(f, s);
  const double fx = eval(f, x);
  for (const Vec& y : y_samples.points) {
    const double lhs = eval(f, y) - fx;
    const double rhs = dot(subtract(y, x), s) - eps;
    if (lhs < rhs - 1e-9) return false;
  }
  return true;
}

struct Instance {
  MaxAffine f;
  MaxAffine g;
};

// Seeded random pair. Draw order: f's pieces then g's, each piece as
// a[0..dim) then b, every coefficient (2u - 1) * coeff_range with u from Rng.
inline Instance random_instance(std::size_t dim, std::size_t n_pieces_f, std::size_t n_pieces_g,
                                double coeff_range, std::uint64_t seed) {
  if (dim < 1 || dim > 3) throw InputError("random_instance: dim must be in [1, 3]");
  if (n_pieces_f < 1 || n_pieces_f > 16 || n_pieces_g < 1 || n_pieces_g > 16) {
    throw InputError("random_instance: piece counts must be in [1, 16]");
  }
  if (!(coeff_range > 0.0) || !std::isfinite(coeff_range)) {
    throw InputError("random_instance: coeff_range must be positive and finite");
  }
  Rng rng(seed);
  auto draw = [&](std::size_t count) {
    std::vector<Piece> pieces(count);
    for (Piece& p : pieces) {
      p.a.resize(dim);
      for (double& v : p.a) v = (2.0 * rng.uniform01() - 1.0) * coeff_range;
      p.b = (2.0 * rng.uniform01() - 1.0) * coeff_range;
    }
    return MaxAffine(dim, std::move(pieces));
  };
  MaxAffine f = draw(n_pieces_f);
  MaxAffine g = draw(n_pieces_g);
  return {std::move(f), std::move(g)};
}

}  // namespace epsdc::oracle
