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

#include "epsdc/lp.hpp"
#include "epsdc/oracle.hpp"

namespace epsdc::test {

using lp::LpProblem;

struct PrimalDualPair {
  LpProblem problem;
  double dual_value;
};

// Random problem  min c'z, A z = b, G z <= g, z >= 0  built around a known
// primal-dual pair satisfying complementary slackness: z* >= 0, y free,
// mu >= 0 on tight rows, reduced costs r >= 0 vanishing where z* > 0, and
// c = A'y - G'mu + r. The dual objective b'y - g'mu is then the optimum.
inline PrimalDualPair random_primal_dual(oracle::Rng& rng) {
  const std::size_t n = rng.index(2, 12);
  const std::size_t me = rng.index(0, std::min<std::size_t>(n - 1, 4));
  const std::size_t mi = rng.index(0, 6);
  Vec z(n), r(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (rng.uniform01() < 0.5) {
      z[j] = rng.uniform(0.1, 3.0);
    } else {
      r[j] = rng.uniform(0.1, 2.0);
    }
  }
  PrimalDualPair out;
  LpProblem& p = out.problem;
  Vec y(me), mu(mi, 0.0);
  for (std::size_t i = 0; i < me; ++i) {
    Vec row(n);
    for (double& v : row) v = rng.uniform(-2, 2);
    p.eq_matrix.push_back(row);
    p.eq_rhs.push_back(dot(row, z));
    y[i] = rng.uniform(-2, 2);
  }
  for (std::size_t i = 0; i < mi; ++i) {
    Vec row(n);
    for (double& v : row) v = rng.uniform(-2, 2);
    const bool tight = rng.uniform01() < 0.5;
    p.ineq_matrix.push_back(row);
    p.ineq_rhs.push_back(dot(row, z) + (tight ? 0.0 : rng.uniform(0.1, 1.0)));
    if (tight) mu[i] = rng.uniform(0.0, 2.0);
  }
  p.objective = r;
  for (std::size_t i = 0; i < me; ++i) {
    for (std::size_t j = 0; j < n; ++j) p.objective[j] += p.eq_matrix[i][j] * y[i];
  }
  for (std::size_t i = 0; i < mi; ++i) {
    for (std::size_t j = 0; j < n; ++j) p.objective[j] -= p.ineq_matrix[i][j] * mu[i];
  }
  p.lower.assign(n, 0.0);
  p.upper.assign(n, std::nullopt);
  out.dual_value = dot(p.eq_rhs, y) - dot(p.ineq_rhs, mu);
  return out;
}

}  // namespace epsdc::test
