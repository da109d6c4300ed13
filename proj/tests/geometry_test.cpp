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

#include "epsdc/geometry.hpp"

#include <gtest/gtest.h>

#include "epsdc/oracle.hpp"
#include "test_util.hpp"

namespace epsdc {
namespace {

using test::abs1;
using test::zero;

SubdiffPolytope interval_half_one() { return eps_subdiff(abs1(), {1.0}, 0.5); }  // [0.5, 1]
SubdiffPolytope origin1() { return eps_subdiff(zero(), {1.0}, 0.5); }            // {0}

// Interval [lo, hi] in dim 1 as the exact subdifferential of max(lo x, hi x) at 0.
SubdiffPolytope interval(double lo, double hi) {
  return exact_subdiff(MaxAffine(1, {Piece{{lo}, 0.0}, Piece{{hi}, 0.0}}), {0.0});
}

// Brute-force distance between two 1-D intervals given by their vertices.
double interval_gap(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  const double alo = a.front()[0], ahi = a.back()[0];
  const double blo = b.front()[0], bhi = b.back()[0];
  return std::max({0.0, blo - ahi, alo - bhi});
}

TEST(GeometryTest, DistanceExamples) {
  for (Norm n : {Norm::L1, Norm::Linf}) {
    EXPECT_NEAR(distance(interval_half_one(), origin1(), n), 0.5, 1e-12);
    EXPECT_EQ(distance(interval_half_one(), interval_half_one(), n), 0.0);
  }
  const auto p = SubdiffPolytope::singleton({1.0, 0.0});
  const auto q = SubdiffPolytope::singleton({0.0, 1.0});
  EXPECT_NEAR(distance(p, q, Norm::Linf), 2.0, 1e-12);
  EXPECT_NEAR(distance(p, q, Norm::L1), 1.0, 1e-12);
}

TEST(GeometryTest, DistanceDimensionMismatch) {
  EXPECT_THROW(distance(SubdiffPolytope::singleton({1.0}), SubdiffPolytope::singleton({1.0, 2.0}),
                        Norm::L1),
               InputError);
}

TEST(GeometryTest, IntersectsExamples) {
  const auto hit = intersects(interval_half_one(), origin1(), ModulusSet::ball(1.0, Norm::Linf));
  ASSERT_TRUE(hit.intersects);
  ASSERT_TRUE(hit.witness.has_value());
  EXPECT_GE((*hit.witness)[0], 0.5 - 1e-9);
  EXPECT_LE((*hit.witness)[0], 1.0 + 1e-9);
  EXPECT_NEAR((*hit.witness)[0], (*hit.b_point)[0] + (*hit.modulus_point)[0], 1e-9);

  const auto A = eps_subdiff(abs1(), {1.0}, 1e-6);
  const auto B = eps_subdiff(zero(), {1.0}, 1e-6);
  EXPECT_FALSE(intersects(A, B, ModulusSet::ball(0.5, Norm::Linf)).intersects);
  EXPECT_TRUE(intersects(A, A, ModulusSet::ball(0.0, Norm::L1)).intersects);
}

TEST(GeometryTest, IncludedInSumExamples) {
  EXPECT_TRUE(included_in_sum(interval_half_one(), origin1(), ModulusSet::ball(1.0, Norm::Linf))
                  .included);
  const auto res =
      included_in_sum(interval_half_one(), origin1(), ModulusSet::ball(0.4, Norm::Linf));
  EXPECT_FALSE(res.included);
  ASSERT_TRUE(res.counterexample.has_value());
  EXPECT_EQ(*res.counterexample, Vec{1.0});
  EXPECT_TRUE(included_in_sum(interval_half_one(), interval_half_one(),
                              ModulusSet::polyhedral(abs1(), 0.3))
                  .included);
}

TEST(GeometryTest, HausdorffExamples) {
  EXPECT_NEAR(hausdorff(interval_half_one(), origin1(), Norm::Linf), 1.0, 1e-12);
  EXPECT_EQ(hausdorff(interval_half_one(), interval_half_one(), Norm::Linf), 0.0);
  EXPECT_NEAR(hausdorff(interval(0, 1), interval(2, 3), Norm::L1), 2.0, 1e-12);
}

TEST(GeometryTest, ModulusSetSupportExamples) {
  EXPECT_NEAR(modulus_set_support(ModulusSet::ball(2.0, Norm::Linf), Vec{1.0, -1.0}), 2.0, 1e-12);
  EXPECT_NEAR(modulus_set_support(ModulusSet::ball(2.0, Norm::L1), Vec{1.0, -1.0}), 4.0, 1e-12);
  EXPECT_NEAR(modulus_set_support(ModulusSet::polyhedral(abs1(), 0.0), Vec{1.0}), 1.0, 1e-12);
  EXPECT_EQ(modulus_set_support(ModulusSet::polyhedral(abs1(), 0.7), Vec{0.0}), 0.0);
  EXPECT_EQ(modulus_set_support(ModulusSet::ball(3.0, Norm::L1), Vec{0.0, 0.0}), 0.0);
}

TEST(GeometryTest, PolyhedralModulusRejectsNonzeroOrigin) {
  const MaxAffine bad(1, {Piece{{1.0}, 1.0}, Piece{{-1.0}, 0.0}});
  EXPECT_THROW(ModulusSet::polyhedral(bad, 0.1), ModulusError);
  EXPECT_THROW(ModulusSet::ball(-1.0, Norm::L1), InputError);
}

struct RandomPair {
  SubdiffPolytope a;
  SubdiffPolytope b;
};

RandomPair random_pair(oracle::Rng& rng) {
  const oracle::Instance in = test::random_small_instance(rng);
  const Vec x = test::random_point(rng, in.f.dim(), -2, 2);
  const double eps = rng.uniform(0, 1) < 0.3 ? 0.0 : rng.uniform(0, 1);
  return {eps_subdiff(in.f, x, eps), eps_subdiff(in.g, x, eps)};
}

TEST(GeometryTest, OneDimensionalDistanceMatchesIntervalGap) {
  oracle::Rng rng(41);
  int seen = 0;
  while (seen < 100) {
    RandomPair p = random_pair(rng);
    if (p.a.dim() != 1) continue;
    ++seen;
    const double want = interval_gap(vertices(p.a), vertices(p.b));
    EXPECT_NEAR(distance(p.a, p.b, Norm::L1), want, 1e-9);
    EXPECT_NEAR(distance(p.a, p.b, Norm::Linf), want, 1e-9);
  }
}

TEST(GeometryProperty, ZeroDistanceIffIntersectsAtZeroRadius) {
  oracle::Rng rng(42);
  int hits = 0;
  for (int trial = 0; trial < 300; ++trial) {
    RandomPair p = random_pair(rng);
    for (Norm n : {Norm::L1, Norm::Linf}) {
      const bool meet = intersects(p.a, p.b, ModulusSet::ball(0.0, n)).intersects;
      EXPECT_EQ(distance(p.a, p.b, n) <= 1e-8, meet);
      hits += meet;
    }
  }
  EXPECT_GT(hits, 0);
}

TEST(GeometryProperty, InclusionImpliesIntersection) {
  oracle::Rng rng(43);
  int included = 0;
  for (int trial = 0; trial < 300; ++trial) {
    RandomPair p = random_pair(rng);
    const Norm n = trial % 2 ? Norm::L1 : Norm::Linf;
    const ModulusSet m = ModulusSet::ball(rng.uniform(0, 4), n);
    if (included_in_sum(p.a, p.b, m).included) {
      ++included;
      EXPECT_TRUE(intersects(p.a, p.b, m).intersects);
    }
  }
  EXPECT_GT(included, 20);
}

TEST(GeometryProperty, IntersectsIffDistanceWithinRadius) {
  oracle::Rng rng(44);
  for (int trial = 0; trial < 300; ++trial) {
    RandomPair p = random_pair(rng);
    const Norm n = trial % 2 ? Norm::L1 : Norm::Linf;
    const double d = distance(p.a, p.b, n);
    // Radii straddling d plus a random one.
    for (double k : {d, d * 0.999 - 1e-6, d + 1e-6, rng.uniform(0, 4)}) {
      if (k < 0) continue;
      EXPECT_EQ(intersects(p.a, p.b, ModulusSet::ball(k, n)).intersects, d <= k + 1e-8)
          << "d=" << d << " k=" << k;
    }
  }
}

TEST(GeometryProperty, HausdorffDominatesDistanceAndBothAreSymmetric) {
  oracle::Rng rng(45);
  for (int trial = 0; trial < 200; ++trial) {
    RandomPair p = random_pair(rng);
    for (Norm n : {Norm::L1, Norm::Linf}) {
      const double d = distance(p.a, p.b, n);
      const double h = hausdorff(p.a, p.b, n);
      EXPECT_GE(h, d - 1e-12);
      EXPECT_EQ(d, distance(p.b, p.a, n));
      EXPECT_EQ(h, hausdorff(p.b, p.a, n));
    }
  }
}

TEST(GeometryProperty, PolyhedralModulusMatchesEquivalentBall) {
  // K|x|_1 in dim 2 has d_eps at 0 equal to the dual box of radius K.
  oracle::Rng rng(46);
  for (int trial = 0; trial < 100; ++trial) {
    const double K = rng.uniform(0.1, 3);
    const MaxAffine h(2, {Piece{{K, K}, 0}, Piece{{K, -K}, 0}, Piece{{-K, K}, 0},
                          Piece{{-K, -K}, 0}});
    const ModulusSet poly = ModulusSet::polyhedral(h, rng.uniform(0, 1));
    const ModulusSet ball = ModulusSet::ball(K, Norm::L1);
    const Vec d = test::random_point(rng, 2, -1, 1);
    EXPECT_NEAR(modulus_set_support(poly, d), modulus_set_support(ball, d), 1e-9);
  }
}

}  // namespace
}  // namespace epsdc
