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
#include "epsdc/vec.hpp"

namespace epsdc {

// Default relative tolerance used to decide which pieces attain the max.
inline constexpr double kActiveTol = 1e-9;

// One affine piece x -> <a, x> + b.
struct Piece {
  Vec a;
  double b = 0.0;

  bool operator==(const Piece&) const = default;
};

// A finite-valued polyhedral convex function x -> max_i (<a_i, x> + b_i) on
// R^dim. Pieces are kept in input order; duplicates and dominated pieces are
// allowed.
class MaxAffine {
 public:
  MaxAffine(std::size_t dim, std::vector<Piece> pieces)
      : dim_(dim), pieces_(std::move(pieces)) {
    if (dim_ == 0) throw InputError("dim must be positive");
    if (pieces_.empty()) throw InputError("pieces must be nonempty");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const Piece& p = pieces_[i];
      if (p.a.size() != dim_) {
        throw InputError("pieces[" + std::to_string(i) + "].a: expected length " +
                         std::to_string(dim_) + ", got " + std::to_string(p.a.size()));
      }
      if (!all_finite(p.a) || !std::isfinite(p.b)) {
        throw InputError("pieces[" + std::to_string(i) + "]: non-finite coefficient");
      }
    }
  }

  // The constant function `value` on R^dim.
  static MaxAffine constant(std::size_t dim, double value) {
    return MaxAffine(dim, {Piece{Vec(dim, 0.0), value}});
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return pieces_.size(); }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  const Piece& piece(std::size_t i) const { return pieces_[i]; }

  // Value of piece i at x.
  double piece_value(std::size_t i, std::span<const double> x) const {
    return dot(pieces_[i].a, x) + pieces_[i].b;
  }

  // Same function plus the constant c (every intercept shifted by c).
  MaxAffine shifted(double c) const {
    std::vector<Piece> p = pieces_;
    for (Piece& q : p) q.b += c;
    return MaxAffine(dim_, std::move(p));
  }

  // Same function multiplied by s >= 0.
  MaxAffine scaled(double s) const {
    if (!(s >= 0.0)) throw InputError("scale factor must be nonnegative");
    std::vector<Piece> p = pieces_;
    for (Piece& q : p) {
      for (double& t : q.a) t *= s;
      q.b *= s;
    }
    return MaxAffine(dim_, std::move(p));
  }

  // Largest dual norm of a piece gradient; a Lipschitz constant of the
  // function in the given primal norm.
  double max_gradient_norm(Norm primal) const {
    double r = 0.0;
    for (const Piece& p : pieces_) r = std::max(r, dual_norm(p.a, primal));
    return r;
  }

  // Removes exact duplicate pieces, keeping first occurrences. Optional
  // normalization; nothing in the library requires it.
  MaxAffine without_duplicates() const {
    std::vector<Piece> p;
    for (const Piece& q : pieces_) {
      if (std::find(p.begin(), p.end(), q) == p.end()) p.push_back(q);
    }
    return MaxAffine(dim_, std::move(p));
  }

  bool operator==(const MaxAffine&) const = default;

 private:
  std::size_t dim_;
  std::vector<Piece> pieces_;
};

// Finite list of points in R^dim.
struct PointSet {
  std::size_t dim = 0;
  std::vector<Vec> points;

  PointSet() = default;
  PointSet(std::size_t d, std::vector<Vec> pts) : dim(d), points(std::move(pts)) {
    if (dim == 0) throw InputError("dim must be positive");
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].size() != dim) {
        throw InputError("points[" + std::to_string(i) + "]: expected length " +
                         std::to_string(dim) + ", got " +
                         std::to_string(points[i].size()));
      }
      if (!all_finite(points[i])) {
        throw InputError("points[" + std::to_string(i) + "]: non-finite coordinate");
      }
    }
  }

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }

  // Regular lattice with k points per axis on [lo, hi]^dim (k = 1 gives the
  // midpoint).
  static PointSet lattice(std::size_t dim, double lo, double hi, std::size_t k) {
    if (dim == 0 || k == 0) throw InputError("lattice needs dim >= 1 and k >= 1");
    if (!(lo <= hi)) throw InputError("lattice needs lo <= hi");
    std::vector<double> axis(k);
    for (std::size_t t = 0; t < k; ++t) {
      axis[t] = k == 1 ? 0.5 * (lo + hi)
                       : lo + (hi - lo) * static_cast<double>(t) / static_cast<double>(k - 1);
    }
    std::vector<Vec> pts;
    std::vector<std::size_t> idx(dim, 0);
    while (true) {
      Vec p(dim);
      for (std::size_t d = 0; d < dim; ++d) p[d] = axis[idx[d]];
      pts.push_back(std::move(p));
      std::size_t d = 0;
      while (d < dim && ++idx[d] == k) idx[d++] = 0;
      if (d == dim) break;
    }
    return PointSet(dim, std::move(pts));
  }
};

inline void require_dim(const MaxAffine& f, std::span<const double> x) {
  if (x.size() != f.dim()) {
    throw InputError("dimension mismatch: function has dim " + std::to_string(f.dim()) +
                     ", point has length " + std::to_string(x.size()));
  }
}

inline double eval(const MaxAffine& f, std::span<const double> x) {
  require_dim(f, x);
  double best = f.piece_value(0, x);
  for (std::size_t i = 1; i < f.size(); ++i) best = std::max(best, f.piece_value(i, x));
  return best;
}

// Indices (0-based, ascending) of the pieces within tol * max(1, |f(x)|) of
// the maximum.
inline std::vector<std::size_t> active_set(const MaxAffine& f, std::span<const double> x,
                                           double tol = kActiveTol) {
  if (!(tol >= 0.0)) throw InputError("active_set tolerance must be nonnegative");
  const double fx = eval(f, x);
  const double cut = fx - tol * std::max(1.0, std::fabs(fx));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.piece_value(i, x) >= cut) out.push_back(i);
  }
  return out;
}

// Value at the origin, max_i b_i.
inline double value_at_origin(const MaxAffine& h) {
  double r = h.piece(0).b;
  for (const Piece& p : h.pieces()) r = std::max(r, p.b);
  return r;
}

// Accepts h as a modulus iff h(0) = 0.
inline const MaxAffine& validate_modulus(const MaxAffine& h) {
  const double h0 = value_at_origin(h);
  if (h0 != 0.0) {
    throw ModulusError("modulus must vanish at the origin, got h(0) = " + std::to_string(h0),
                       h0);
  }
  return h;
}

// Difference (f - g)(x).
inline double eval_difference(const MaxAffine& f, const MaxAffine& g,
                              std::span<const double> x) {
  return eval(f, x) - eval(g, x);
}

}  // namespace epsdc
