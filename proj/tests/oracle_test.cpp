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

#include "epsdc/oracle.hpp"

#include <gtest/gtest.h>

#include <set>

#include "epsdc/certify.hpp"
#include "epsdc/json_io.hpp"
#include "test_util.hpp"

namespace epsdc {
namespace {

using oracle::lipschitz_exact;
using oracle::lipschitz_sampled;
using test::abs1;
using test::kinked;
using test::zero;

// Lipschitz constant of a 1-D f - g from its breakpoints: slopes of f - g
// between consecutive kinks and on the two unbounded rays.
double lipschitz_1d_breakpoints(const MaxAffine& f, const MaxAffine& g) {
  std::vector<double> xs;
  auto collect = [&](const MaxAffine& h) {
    for (std::size_t i = 0; i < h.size(); ++i) {
      for (std::size_t k = i + 1; k < h.size(); ++k) {
        const double da = h.piece(i).a[0] - h.piece(k).a[0];
        if (da != 0.0) xs.push_back((h.piece(k).b - h.piece(i).b) / da);
      }
    }
  };
  collect(f);
  collect(g);
  std::sort(xs.begin(), xs.end());
  std::vector<double> probes;
  if (xs.empty()) {
    probes.push_back(0.0);
  } else {
    probes.push_back(xs.front() - 1.0);
    probes.push_back(xs.back() + 1.0);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      if (xs[i + 1] - xs[i] > 1e-6) probes.push_back(0.5 * (xs[i] + xs[i + 1]));
    }
  }
  double best = 0.0;
  for (double p : probes) {
    const double slope = f.piece(active_set(f, Vec{p}, 0.0).front()).a[0] -
                         g.piece(active_set(g, Vec{p}, 0.0).front()).a[0];
    best = std::max(best, std::fabs(slope));
  }
  return best;
}

TEST(OracleTest, LipschitzExactExamples) {
  for (Norm n : {Norm::L1, Norm::Linf}) {
    const auto r = lipschitz_exact(abs1(), zero(), n);
    EXPECT_EQ(r.constant, 1.0);
    EXPECT_EQ(r.witness.f_piece, 0u);
    EXPECT_EQ(r.witness.g_piece, 0u);
    EXPECT_GT(r.witness.interior_point[0], 0.0);
    EXPECT_GT(r.witness.margin, oracle::kCellMargin);
    EXPECT_EQ(lipschitz_exact(abs1(), abs1(), n).constant, 0.0);
    EXPECT_EQ(lipschitz_exact(kinked(), zero(), n).constant, 2.0);
  }
}

TEST(OracleTest, LipschitzExactUsesDualNorm) {
  const MaxAffine f(2, {Piece{{1.0, -2.0}, 0.0}});
  EXPECT_EQ(lipschitz_exact(f, zero(2), Norm::Linf).constant, 3.0);
  EXPECT_EQ(lipschitz_exact(f, zero(2), Norm::L1).constant, 2.0);
}

TEST(OracleTest, DuplicatePiecesDoNotHideCells) {
  const MaxAffine f(1, {Piece{{1.0}, 0.0}, Piece{{1.0}, 0.0}, Piece{{-1.0}, 0.0}});
  EXPECT_EQ(lipschitz_exact(f, zero(), Norm::L1).constant, 1.0);
}

TEST(OracleTest, LipschitzSampledExamples) {
  const double v = lipschitz_sampled(abs1(), zero(), {-2.0}, {2.0}, 10000, 1, Norm::L1);
  EXPECT_LE(v, 1.0);
  EXPECT_GE(v, 0.9);
  EXPECT_EQ(lipschitz_sampled(abs1(), abs1(), {-2.0}, {2.0}, 1000, 1, Norm::L1), 0.0);
  const MaxAffine aff(2, {Piece{{0.5, -1.5}, 2.0}});
  const double s = lipschitz_sampled(aff, zero(2), {-1, -1}, {1, 1}, 1, 3, Norm::Linf);
  // One pair in Linf sees |<a, x - y>| / |x - y|_inf, which is at most |a|_1.
  EXPECT_LE(s, 2.0 + 1e-12);
  const MaxAffine line(1, {Piece{{-1.25}, 2.0}});
  EXPECT_NEAR(lipschitz_sampled(line, zero(), {-1.0}, {1.0}, 5, 3, Norm::L1), 1.25, 1e-15);
}

TEST(OracleTest, LipschitzSampledRejectsBadInput) {
  EXPECT_THROW(lipschitz_sampled(abs1(), zero(), {1.0}, {1.0}, 10, 1, Norm::L1), InputError);
  EXPECT_THROW(lipschitz_sampled(abs1(), zero(), {0.0}, {1.0}, 0, 1, Norm::L1), InputError);
  EXPECT_THROW(lipschitz_sampled(abs1(), zero(2), {0.0}, {1.0}, 10, 1, Norm::L1), InputError);
}

TEST(OracleTest, LipschitzSampledIsDeterministic) {
  const auto in = oracle::random_instance(2, 4, 3, 2.0, 99);
  const Vec lo{-3, -3}, hi{3, 3};
  EXPECT_EQ(lipschitz_sampled(in.f, in.g, lo, hi, 500, 5, Norm::L1),
            lipschitz_sampled(in.f, in.g, lo, hi, 500, 5, Norm::L1));
}

TEST(OracleTest, DefinitionalMembershipExamples) {
  const PointSet ys = test::line_samples(-10, 10, 2001);
  EXPECT_TRUE(oracle::definitional_membership(abs1(), {1.0}, {0.75}, 0.5, ys));
  EXPECT_FALSE(oracle::definitional_membership(abs1(), {1.0}, {0.25}, 0.5, ys));
  oracle::Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const MaxAffine f = test::random_small_instance(rng).f;
    const Vec x = test::random_point(rng, f.dim(), -2, 2);
    std::vector<Vec> pts;
    for (int k = 0; k < 500; ++k) pts.push_back(test::random_point(rng, f.dim(), -5, 5));
    const PointSet y(f.dim(), pts);
    for (std::size_t i : active_set(f, x)) {
      EXPECT_TRUE(oracle::definitional_membership(f, x, f.piece(i).a, 0.0, y));
    }
  }
  EXPECT_THROW(oracle::definitional_membership(abs1(), {1.0}, {0.0}, -1.0, ys), InputError);
}

TEST(OracleTest, RandomInstanceGolden) {
  const Json golden = Json::parse(
      read_text_file(std::string(EPSDC_TEST_DATA_DIR) + "/random_instance_seed7.json"));
  const auto in = oracle::random_instance(1, 2, 1, 1.0, 7);
  EXPECT_EQ(in.f, max_affine_from_json(golden["f"]));
  EXPECT_EQ(in.g, max_affine_from_json(golden["g"]));
}

TEST(OracleTest, RandomInstanceDeterministicAndSeedSensitive) {
  const auto a = oracle::random_instance(3, 5, 4, 2.0, 11);
  const auto b = oracle::random_instance(3, 5, 4, 2.0, 11);
  EXPECT_EQ(a.f, b.f);
  EXPECT_EQ(a.g, b.g);
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto in = oracle::random_instance(1, 2, 1, 1.0, seed);
    seen.insert(serialize(in.f) + serialize(in.g));
  }
  EXPECT_EQ(seen.size(), 100u);
}

TEST(OracleTest, RandomInstanceRanges) {
  const auto in = oracle::random_instance(2, 16, 16, 0.5, 3);
  for (const MaxAffine* h : {&in.f, &in.g}) {
    for (const Piece& p : h->pieces()) {
      for (double v : p.a) EXPECT_LE(std::fabs(v), 0.5);
      EXPECT_LE(std::fabs(p.b), 0.5);
    }
  }
  EXPECT_THROW(oracle::random_instance(0, 1, 1, 1.0, 1), InputError);
  EXPECT_THROW(oracle::random_instance(4, 1, 1, 1.0, 1), InputError);
  EXPECT_THROW(oracle::random_instance(1, 0, 1, 1.0, 1), InputError);
  EXPECT_THROW(oracle::random_instance(1, 1, 17, 1.0, 1), InputError);
  EXPECT_THROW(oracle::random_instance(1, 1, 1, 0.0, 1), InputError);
}

TEST(OracleProperty, ExactMatchesBreakpointAnalysisInOneDimension) {
  oracle::Rng rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    const auto in = oracle::random_instance(1, rng.index(1, 6), rng.index(1, 6), 2.0,
                                            rng.engine()());
    EXPECT_NEAR(lipschitz_exact(in.f, in.g, Norm::L1).constant,
                lipschitz_1d_breakpoints(in.f, in.g), 1e-12);
  }
}

TEST(OracleProperty, SampledNeverExceedsExactAndConverges) {
  oracle::Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 1 + trial % 2;
    const auto in =
        oracle::random_instance(dim, rng.index(1, 6), rng.index(1, 6), 2.0, rng.engine()());
    for (Norm n : {Norm::L1, Norm::Linf}) {
      const auto ex = lipschitz_exact(in.f, in.g, n);
      Vec lo(dim), hi(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        lo[k] = ex.witness.interior_point[k] - 3.0;
        hi[k] = ex.witness.interior_point[k] + 3.0;
      }
      EXPECT_LE(lipschitz_sampled(in.f, in.g, lo, hi, 100000, 7 + trial, n), ex.constant + 1e-12);
      // Box inside the maximizing cell: a displacement of primal norm r costs
      // at most r * |a_k - a_i|_* of the domination margin.
      double steep = 1e-12;
      for (const auto& [h, i] : {std::pair{&in.f, ex.witness.f_piece},
                                 std::pair{&in.g, ex.witness.g_piece}}) {
        for (const Piece& p : h->pieces()) {
          steep = std::max(steep, dual_norm(subtract(p.a, h->piece(i).a), n));
        }
      }
      const double r = 0.99 * ex.witness.margin / steep / static_cast<double>(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        lo[k] = ex.witness.interior_point[k] - r;
        hi[k] = ex.witness.interior_point[k] + r;
      }
      const double s = lipschitz_sampled(in.f, in.g, lo, hi, 100000, 7 + trial, n);
      EXPECT_LE(s, ex.constant + 1e-12);
      EXPECT_GE(s, 0.95 * ex.constant) << "trial " << trial;
    }
  }
}

TEST(OracleProperty, MinLipschitzAtWitnessPointsEqualsExact) {
  oracle::Rng rng(54);
  for (int trial = 0; trial < 40; ++trial) {
    const auto in = test::random_small_instance(rng);
    for (Norm n : {Norm::L1, Norm::Linf}) {
      const auto ex = lipschitz_exact(in.f, in.g, n);
      std::vector<Vec> pts;
      for (const auto& c : ex.cells) pts.push_back(c.interior_point);
      const PointSet grid(in.f.dim(), pts);
      EXPECT_NEAR(min_lipschitz(in.f, in.g, grid, 0.0, n), ex.constant, 1e-8);
    }
  }
}

TEST(OracleProperty, ContainsImpliesDefinitional) {
  oracle::Rng rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    const MaxAffine f = test::random_small_instance(rng).f;
    const Vec x = test::random_point(rng, f.dim(), -2, 2);
    const double eps = rng.uniform(0, 1);
    const SubdiffPolytope S = eps_subdiff(f, x, eps);
    const Vec s = S.image(std::vector<double>(f.size(), 1.0 / static_cast<double>(f.size())));
    std::vector<Vec> pts;
    for (int k = 0; k < 200; ++k) pts.push_back(test::random_point(rng, f.dim(), -20, 20));
    if (contains(S, s)) {
      EXPECT_TRUE(oracle::definitional_membership(f, x, s, eps, PointSet(f.dim(), pts)));
    }
  }
}

}  // namespace
}  // namespace epsdc
