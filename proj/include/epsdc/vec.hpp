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
#include <string_view>
#include <vector>

#include "epsdc/errors.hpp"

namespace epsdc {

using Vec = std::vector<double>;

// Primal norm on R^n. Slopes (subgradients) are measured in the dual norm:
// the dual of L1 is Linf and vice versa.
enum class Norm { L1, Linf };

inline Norm dual_of(Norm n) { return n == Norm::L1 ? Norm::Linf : Norm::L1; }

inline std::string_view to_string(Norm n) { return n == Norm::L1 ? "l1" : "linf"; }

inline Norm parse_norm(std::string_view s) {
  if (s == "l1" || s == "L1") return Norm::L1;
  if (s == "linf" || s == "Linf" || s == "LINF") return Norm::Linf;
  throw InputError("unknown norm '" + std::string(s) + "' (expected l1 or linf)");
}

inline double dot(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * v[k];
  return s;
}

inline double norm(std::span<const double> v, Norm n) {
  double r = 0.0;
  if (n == Norm::L1) {
    for (double t : v) r += std::fabs(t);
  } else {
    for (double t : v) r = std::max(r, std::fabs(t));
  }
  return r;
}

inline double dual_norm(std::span<const double> v, Norm primal) {
  return norm(v, dual_of(primal));
}

inline Vec subtract(std::span<const double> u, std::span<const double> v) {
  Vec r(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) r[k] = u[k] - v[k];
  return r;
}

inline Vec add(std::span<const double> u, std::span<const double> v) {
  Vec r(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) r[k] = u[k] + v[k];
  return r;
}

// x + t (y - x)
inline Vec lerp(std::span<const double> x, std::span<const double> y, double t) {
  Vec r(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) r[k] = x[k] + t * (y[k] - x[k]);
  return r;
}

inline bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double t) { return std::isfinite(t); });
}

inline double max_abs_diff(std::span<const double> u, std::span<const double> v) {
  double r = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) r = std::max(r, std::fabs(u[k] - v[k]));
  return r;
}

}  // namespace epsdc
