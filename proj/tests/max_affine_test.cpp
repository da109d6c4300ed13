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

#include "epsdc/max_affine.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace epsdc {
namespace {

using test::abs1;

TEST(MaxAffineTest, Eval) {
  EXPECT_EQ(eval(abs1(), Vec{2.0}), 2.0);
  EXPECT_EQ(eval(MaxAffine(1, {Piece{{0.0}, 5.0}}), Vec{-123.0}), 5.0);
  EXPECT_EQ(eval(MaxAffine(1, {Piece{{2.0}, 0.0}, Piece{{-1.0}, 0.0}}), Vec{-1.0}), 1.0);
}

TEST(MaxAffineTest, EvalDimensionMismatch) {
  EXPECT_THROW(eval(abs1(), Vec{1.0, 2.0}), InputError);
}

TEST(MaxAffineTest, ActiveSet) {
  EXPECT_EQ(active_set(abs1(), Vec{0.0}, 0.0), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(active_set(abs1(), Vec{1.0}, 0.0), (std::vector<std::size_t>{0}));
  const MaxAffine parallel(1, {Piece{{1.0}, 0.0}, Piece{{1.0}, -1.0}});
  EXPECT_EQ(active_set(parallel, Vec{0.0}, 0.0), (std::vector<std::size_t>{0}));
  EXPECT_THROW(active_set(abs1(), Vec{0.0}, -1.0), InputError);
}

TEST(MaxAffineTest, ActiveSetDefaultToleranceIsRelative) {
  const MaxAffine f(1, {Piece{{1.0}, 1e6}, Piece{{1.0}, 1e6 - 1e-4}});
  EXPECT_EQ(active_set(f, Vec{0.0}).size(), 2u);
  EXPECT_EQ(active_set(f, Vec{0.0}, 0.0).size(), 1u);
}

TEST(MaxAffineTest, ValidateModulus) {
  EXPECT_NO_THROW(validate_modulus(abs1()));
  EXPECT_NO_THROW(validate_modulus(test::zero()));
  const MaxAffine bad(1, {Piece{{1.0}, 1.0}, Piece{{-1.0}, 0.0}});
  try {
    validate_modulus(bad);
    FAIL() << "expected ModulusError";
  } catch (const ModulusError& e) {
    EXPECT_EQ(e.value_at_origin(), 1.0);
  }
}

TEST(MaxAffineTest, ConstructorRejectsBadInput) {
  EXPECT_THROW(MaxAffine(0, {Piece{{}, 0.0}}), InputError);
  EXPECT_THROW(MaxAffine(1, {}), InputError);
  EXPECT_THROW(MaxAffine(2, {Piece{{1.0}, 0.0}}), InputError);
  EXPECT_THROW(MaxAffine(1, {Piece{{std::nan("")}, 0.0}}), InputError);
  EXPECT_THROW(MaxAffine(1, {Piece{{1.0}, INFINITY}}), InputError);
}

TEST(MaxAffineTest, ShiftScaleAndDeduplicate) {
  const MaxAffine f = abs1().shifted(3.0);
  EXPECT_EQ(eval(f, Vec{-2.0}), 5.0);
  EXPECT_EQ(eval(abs1().scaled(0.5), Vec{-2.0}), 1.0);
  const MaxAffine dup(1, {Piece{{1.0}, 0.0}, Piece{{1.0}, 0.0}, Piece{{-1.0}, 0.0}});
  EXPECT_EQ(dup.without_duplicates().size(), 2u);
}

TEST(MaxAffineTest, Lattice) {
  const PointSet p = PointSet::lattice(2, -1.0, 1.0, 3);
  ASSERT_EQ(p.size(), 9u);
  EXPECT_EQ(p.points.front(), (Vec{-1.0, -1.0}));
  EXPECT_EQ(p.points.back(), (Vec{1.0, 1.0}));
  EXPECT_EQ(PointSet::lattice(1, -2.0, 2.0, 11).points[5], Vec{0.0});
}

TEST(MaxAffineProperty, ConvexAlongSegments) {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = test::random_small_instance(rng, 8, 3.0);
    const MaxAffine& f = inst.f;
    for (int k = 0; k < 20; ++k) {
      const Vec x = test::random_point(rng, f.dim(), -5, 5);
      const Vec y = test::random_point(rng, f.dim(), -5, 5);
      const double t = rng.uniform01();
      const Vec z = lerp(y, x, t);
      EXPECT_LE(eval(f, z), t * eval(f, x) + (1 - t) * eval(f, y) + 1e-9);
    }
  }
}

TEST(MaxAffineProperty, LipschitzInEachNorm) {
  oracle::Rng rng(12);
  for (Norm n : {Norm::L1, Norm::Linf}) {
    for (int trial = 0; trial < 200; ++trial) {
      const MaxAffine f = test::random_small_instance(rng, 8, 3.0).f;
      const double L = f.max_gradient_norm(n);
      const Vec x = test::random_point(rng, f.dim(), -5, 5);
      const Vec y = test::random_point(rng, f.dim(), -5, 5);
      EXPECT_LE(std::fabs(eval(f, x) - eval(f, y)), L * norm(subtract(x, y), n) + 1e-9);
    }
  }
}

TEST(MaxAffineProperty, ActiveSetNeverEmpty) {
  oracle::Rng rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const MaxAffine f = test::random_small_instance(rng, 8, 3.0).f;
    EXPECT_FALSE(active_set(f, test::random_point(rng, f.dim(), -5, 5), 0.0).empty());
  }
}

}  // namespace
}  // namespace epsdc
