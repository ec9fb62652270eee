/* Copyright 2026 The DLA Toolkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "dla/perturb.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dla/rng.hpp"
#include "test_util.hpp"

namespace dla {
namespace {

constexpr double kEps8 = 8.0 / 255.0;

LinearNoise MakeNoise(NoiseDirection direction,
                      std::vector<std::int8_t> signs, double epsilon) {
  LinearNoise noise;
  noise.direction = direction;
  noise.signs = std::move(signs);
  noise.epsilon = epsilon;
  return noise;
}

TEST(ExpandLinearNoise, HorizontalBroadcastsAcrossRows) {
  const auto pert = ExpandLinearNoise(
      MakeNoise(NoiseDirection::kHorizontal, {+1, -1}, 0.1), 1, 2, 2);
  EXPECT_DOUBLE_EQ(pert.at(0, 0, 0), 0.1);
  EXPECT_DOUBLE_EQ(pert.at(0, 0, 1), 0.1);
  EXPECT_DOUBLE_EQ(pert.at(0, 1, 0), -0.1);
  EXPECT_DOUBLE_EQ(pert.at(0, 1, 1), -0.1);
}

TEST(ExpandLinearNoise, VerticalBroadcastsAcrossColumns) {
  const auto pert = ExpandLinearNoise(
      MakeNoise(NoiseDirection::kVertical, {+1, -1}, 0.1), 1, 2, 2);
  EXPECT_DOUBLE_EQ(pert.at(0, 0, 0), 0.1);
  EXPECT_DOUBLE_EQ(pert.at(0, 0, 1), -0.1);
  EXPECT_DOUBLE_EQ(pert.at(0, 1, 0), 0.1);
  EXPECT_DOUBLE_EQ(pert.at(0, 1, 1), -0.1);
}

TEST(ExpandLinearNoise, SingleRowFillsAllChannels) {
  const auto pert = ExpandLinearNoise(
      MakeNoise(NoiseDirection::kHorizontal, {+1}, kEps8), 3, 1, 4);
  ASSERT_EQ(pert.values.size(), 12u);
  for (double v : pert.values) {
    EXPECT_DOUBLE_EQ(v, kEps8);
  }
}

TEST(ExpandLinearNoise, RejectsLengthMismatch) {
  EXPECT_THROW(ExpandLinearNoise(
                   MakeNoise(NoiseDirection::kHorizontal, {+1, -1}, 0.1), 1,
                   3, 2),
               std::invalid_argument);
}

TEST(ApplyPerturbation, InteriorPoint) {
  Image x(1, 1, 1, 0.5);
  DensePerturbation pert{1, 1, 1, {0.1}};
  EXPECT_DOUBLE_EQ(ApplyPerturbation(x, pert).at(0, 0, 0), 0.6);
}

TEST(ApplyPerturbation, ClampsAtZero) {
  Image x(1, 1, 1, 0.0);
  DensePerturbation pert{1, 1, 1, {-0.1}};
  EXPECT_DOUBLE_EQ(ApplyPerturbation(x, pert).at(0, 0, 0), 0.0);
}

TEST(ApplyPerturbation, ClampsAtOne) {
  // 0.99 + 8/255 > 1, so the output saturates.
  ASSERT_GT(0.99 + kEps8, 1.0);
  Image x(1, 1, 1, 0.99);
  DensePerturbation pert{1, 1, 1, {kEps8}};
  EXPECT_DOUBLE_EQ(ApplyPerturbation(x, pert).at(0, 0, 0), 1.0);
}

TEST(ApplyPerturbation, RejectsShapeMismatch) {
  Image x(1, 2, 2, 0.5);
  DensePerturbation pert{1, 1, 1, {0.1}};
  EXPECT_THROW(ApplyPerturbation(x, pert), std::invalid_argument);
}

TEST(ApplyPerturbation, StaysInRangeAndWithinEps) {
  Rng rng(11);
  const Image x = testing::RandomImage(rng, 3, 9, 7);
  DensePerturbation pert{3, 9, 7, {}};
  pert.values.resize(x.size());
  for (auto& v : pert.values) v = rng.Sign() * kEps8;
  const Image y = ApplyPerturbation(x, pert);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_GE(y.data()[i], 0.0);
    EXPECT_LE(y.data()[i], 1.0);
    EXPECT_LE(std::abs(y.data()[i] - x.data()[i]), kEps8 + 1e-15);
  }
}

TEST(StripeBounds, LevelZeroIsTheFullExtent) {
  const StripeBounds bounds = ComputeStripeBounds(1, 0, 0, 4, 3);
  EXPECT_EQ(bounds, (StripeBounds{0, 4, 0, 3}));
}

TEST(StripeBounds, RowStripesAtLevelOne) {
  // c = ceil(4/2) = 2, stripe 1 covers rows [2, 4).
  const StripeBounds bounds = ComputeStripeBounds(1, 1, 1, 4, 3);
  EXPECT_EQ(bounds, (StripeBounds{2, 4, 0, 3}));
}

TEST(StripeBounds, TrailingStripeIsEmpty) {
  // c = ceil(5/4) = 2 along width, index 3 starts at column 6 >= 5.
  const StripeBounds bounds = ComputeStripeBounds(0, 2, 3, 2, 5);
  EXPECT_TRUE(bounds.Empty());
}

TEST(StripeBounds, PartitionIsExactForAllSmallDims) {
  for (int dim = 1; dim <= 64; ++dim) {
    for (int level = 0; level <= CeilLog2(dim); ++level) {
      std::vector<int> cover(dim, 0);
      for (std::int64_t i = 0; i < (std::int64_t{1} << level); ++i) {
        const StripeBounds bounds = ComputeStripeBounds(1, level, i, dim, 1);
        for (int r = bounds.row_begin; r < bounds.row_end; ++r) ++cover[r];
      }
      for (int r = 0; r < dim; ++r) {
        ASSERT_EQ(cover[r], 1) << "dim " << dim << " level " << level;
      }
    }
  }
}

TEST(FlipStripe, GlobalFlip) {
  SignMask mask = SignMask::Ones(2, 2);
  mask = FlipStripe(std::move(mask), {0, 2, 0, 2});
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) EXPECT_EQ(mask.at(r, c), -1);
  }
}

TEST(FlipStripe, EmptyBoundsIsNoOp) {
  const SignMask mask = SignMask::Ones(2, 2);
  EXPECT_EQ(FlipStripe(mask, {1, 1, 0, 2}), mask);
}

TEST(FlipStripe, FlipsOnlyTheStripe) {
  SignMask mask = SignMask::Ones(2, 2);
  mask.at(0, 1) = -1;
  const SignMask flipped = FlipStripe(mask, {1, 2, 0, 2});
  EXPECT_EQ(flipped.at(0, 0), 1);
  EXPECT_EQ(flipped.at(0, 1), -1);
  EXPECT_EQ(flipped.at(1, 0), -1);
  EXPECT_EQ(flipped.at(1, 1), -1);
}

TEST(FlipStripe, IsAnInvolution) {
  Rng rng(3);
  for (int iter = 0; iter < 200; ++iter) {
    const int h = 1 + static_cast<int>(rng.NextU64() % 8);
    const int w = 1 + static_cast<int>(rng.NextU64() % 8);
    SignMask mask = SignMask::Ones(h, w);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) mask.at(r, c) = rng.Sign();
    }
    const int level = static_cast<int>(rng.NextU64() % 4);
    const int direction = static_cast<int>(rng.NextU64() % 2);
    const std::int64_t index =
        static_cast<std::int64_t>(rng.NextU64() % (1u << level));
    const StripeBounds bounds =
        ComputeStripeBounds(direction, level, index, h, w);
    EXPECT_EQ(FlipStripe(FlipStripe(mask, bounds), bounds), mask);
  }
}

TEST(Compose, GlobalSignFlip) {
  DensePerturbation pert{1, 1, 2, {kEps8, kEps8}};
  SignMask mask = SignMask::Ones(1, 2);
  mask = FlipStripe(std::move(mask), {0, 1, 0, 2});
  const auto out = Compose(pert, mask);
  EXPECT_DOUBLE_EQ(out.values[0], -kEps8);
  EXPECT_DOUBLE_EQ(out.values[1], -kEps8);
}

TEST(Compose, ZeroAbsorbs) {
  DensePerturbation pert{1, 2, 2, {0.0, 0.0, 0.0, 0.0}};
  SignMask mask = SignMask::Ones(2, 2);
  mask.at(1, 1) = -1;
  for (double v : Compose(pert, mask).values) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(Compose, ElementwiseProduct) {
  DensePerturbation pert{1, 1, 2, {kEps8, -kEps8}};
  SignMask mask = SignMask::Ones(1, 2);
  mask.at(0, 0) = -1;
  const auto out = Compose(pert, mask);
  EXPECT_DOUBLE_EQ(out.values[0], -kEps8);
  EXPECT_DOUBLE_EQ(out.values[1], -kEps8);
}

TEST(Compose, PreservesValueSet) {
  Rng rng(17);
  DensePerturbation pert{2, 4, 5, {}};
  pert.values.resize(40);
  for (auto& v : pert.values) {
    const int pick = static_cast<int>(rng.NextU64() % 3);
    v = pick == 0 ? -kEps8 : pick == 1 ? 0.0 : kEps8;
  }
  SignMask mask = SignMask::Ones(4, 5);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 5; ++c) mask.at(r, c) = rng.Sign();
  }
  for (double v : Compose(pert, mask).values) {
    EXPECT_TRUE(v == -kEps8 || v == 0.0 || v == kEps8) << v;
  }
}

TEST(ApplySignedNoise, MatchesTheComposedRoute) {
  Rng rng(23);
  for (int iter = 0; iter < 20; ++iter) {
    const int h = 1 + static_cast<int>(rng.NextU64() % 7);
    const int w = 1 + static_cast<int>(rng.NextU64() % 7);
    const Image x = testing::RandomImage(rng, 3, h, w);
    const bool horizontal = (rng.NextU64() & 1) != 0;
    LinearNoise noise;
    noise.direction =
        horizontal ? NoiseDirection::kHorizontal : NoiseDirection::kVertical;
    noise.epsilon = kEps8;
    noise.signs.resize(horizontal ? h : w);
    for (auto& s : noise.signs) s = rng.Sign();
    SignMask committed = SignMask::Ones(h, w);
    SignMask working = SignMask::Ones(h, w);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        committed.at(r, c) = rng.Sign();
        working.at(r, c) = rng.Sign();
      }
    }
    const Image fused = ApplySignedNoise(x, noise, committed, working);
    const Image composed = ApplyPerturbation(
        x, Compose(Compose(ExpandLinearNoise(noise, 3, h, w), committed),
                   working));
    EXPECT_EQ(fused, composed);
  }
}

TEST(CeilLog2, KnownValues) {
  EXPECT_EQ(CeilLog2(1), 0);
  EXPECT_EQ(CeilLog2(2), 1);
  EXPECT_EQ(CeilLog2(3), 2);
  EXPECT_EQ(CeilLog2(4), 2);
  EXPECT_EQ(CeilLog2(5), 3);
  EXPECT_EQ(CeilLog2(64), 6);
}

TEST(ImageType, RejectsOutOfRangeValues) {
  EXPECT_THROW(Image::FromData(1, 1, 2, {0.5, 1.5}), std::invalid_argument);
  EXPECT_THROW(Image::FromData(1, 1, 2, {0.5}), std::invalid_argument);
}

TEST(LabelMapType, RejectsOutOfRangeLabels) {
  EXPECT_THROW(LabelMap::FromLabels(1, 2, 2, {0, 2}), std::invalid_argument);
}

}  // namespace
}  // namespace dla
