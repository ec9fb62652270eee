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
#include "dla/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dla/rng.hpp"
#include "test_util.hpp"

namespace dla {
namespace {

LabelMap Map2x2(std::uint16_t a, std::uint16_t b, std::uint16_t c,
                std::uint16_t d, int num_classes) {
  return LabelMap::FromLabels(2, 2, num_classes, {a, b, c, d});
}

TEST(ConfusionMatrix, IdenticalMaps) {
  const LabelMap map = Map2x2(0, 0, 0, 0, 2);
  const ConfusionMatrix cm = BuildConfusionMatrix(map, map, 2);
  EXPECT_EQ(cm.at(0, 0), 4);
  EXPECT_EQ(cm.at(0, 1), 0);
  EXPECT_EQ(cm.at(1, 0), 0);
  EXPECT_EQ(cm.at(1, 1), 0);
  EXPECT_EQ(cm.Total(), 4);
}

TEST(ConfusionMatrix, SinglePixel) {
  const LabelMap pred = LabelMap::FromLabels(1, 1, 2, {1});
  const LabelMap ref = LabelMap::FromLabels(1, 1, 2, {0});
  const ConfusionMatrix cm = BuildConfusionMatrix(pred, ref, 2);
  EXPECT_EQ(cm.at(0, 1), 1);
  EXPECT_EQ(cm.Total(), 1);
}

TEST(ConfusionMatrix, PixelByPixelCounts) {
  const LabelMap pred = Map2x2(0, 0, 1, 1, 2);
  const LabelMap ref = Map2x2(0, 1, 1, 1, 2);
  const ConfusionMatrix cm = BuildConfusionMatrix(pred, ref, 2);
  EXPECT_EQ(cm.at(0, 0), 1);
  EXPECT_EQ(cm.at(0, 1), 0);
  EXPECT_EQ(cm.at(1, 0), 1);
  EXPECT_EQ(cm.at(1, 1), 2);
}

TEST(ConfusionMatrix, RejectsBadInputs) {
  const LabelMap a = Map2x2(0, 0, 0, 0, 2);
  const LabelMap b = LabelMap::FromLabels(1, 4, 2, {0, 0, 0, 0});
  EXPECT_THROW(BuildConfusionMatrix(a, b, 2), std::invalid_argument);
  const LabelMap c = Map2x2(0, 1, 0, 1, 4);
  EXPECT_THROW(BuildConfusionMatrix(c, c, 1), std::invalid_argument);
}

TEST(Miou, IdenticalMapsScoreOne) {
  const LabelMap map = Map2x2(0, 1, 1, 0, 3);
  EXPECT_DOUBLE_EQ(Miou(map, map, 3), 1.0);
}

TEST(Miou, DisjointMapsScoreZero) {
  const LabelMap pred = Map2x2(0, 0, 0, 0, 2);
  const LabelMap ref = Map2x2(1, 1, 1, 1, 2);
  EXPECT_DOUBLE_EQ(Miou(pred, ref, 2), 0.0);
}

TEST(Miou, TwoByTwoExample) {
  // IoU_0 = 1/2, IoU_1 = 2/3, mean = 7/12.
  const LabelMap pred = Map2x2(0, 0, 1, 1, 2);
  const LabelMap ref = Map2x2(0, 1, 1, 1, 2);
  EXPECT_NEAR(Miou(pred, ref, 2), 7.0 / 12.0, 1e-15);
}

TEST(Miou, ClassAbsentFromBothIsSkipped) {
  const LabelMap pred = Map2x2(0, 0, 1, 1, 5);
  const LabelMap ref = Map2x2(0, 1, 1, 1, 5);
  EXPECT_NEAR(Miou(pred, ref, 5), 7.0 / 12.0, 1e-15);
}

TEST(Pacc, Examples) {
  const LabelMap a = Map2x2(0, 1, 1, 0, 2);
  EXPECT_DOUBLE_EQ(Pacc(a, a), 1.0);
  const LabelMap flipped = Map2x2(1, 0, 0, 1, 2);
  EXPECT_DOUBLE_EQ(Pacc(a, flipped), 0.0);
  const LabelMap off_by_one = Map2x2(0, 1, 1, 1, 2);
  EXPECT_DOUBLE_EQ(Pacc(a, off_by_one), 0.75);
}

TEST(Metrics, AgreeWithBruteForceOnRandomMaps) {
  Rng rng(99);
  for (int iter = 0; iter < 300; ++iter) {
    const int num_classes = 2 + static_cast<int>(rng.NextU64() % 4);
    const LabelMap pred = testing::RandomLabelMap(rng, 8, 8, num_classes);
    const LabelMap ref = testing::RandomLabelMap(rng, 8, 8, num_classes);
    EXPECT_NEAR(Miou(pred, ref, num_classes),
                testing::BruteForceMiou(pred, ref, num_classes), 1e-12);
    EXPECT_NEAR(Pacc(pred, ref), testing::BruteForcePacc(pred, ref), 1e-12);
  }
}

TEST(Metrics, BothLieInUnitInterval) {
  Rng rng(7);
  for (int iter = 0; iter < 100; ++iter) {
    const LabelMap pred = testing::RandomLabelMap(rng, 5, 6, 3);
    const LabelMap ref = testing::RandomLabelMap(rng, 5, 6, 3);
    const double miou = Miou(pred, ref, 3);
    const double pacc = Pacc(pred, ref);
    EXPECT_GE(miou, 0.0);
    EXPECT_LE(miou, 1.0);
    EXPECT_GE(pacc, 0.0);
    EXPECT_LE(pacc, 1.0);
  }
}

TEST(Metrics, InvariantUnderClassPermutation) {
  Rng rng(41);
  for (int iter = 0; iter < 50; ++iter) {
    const int num_classes = 3 + static_cast<int>(rng.NextU64() % 3);
    const LabelMap pred = testing::RandomLabelMap(rng, 6, 6, num_classes);
    const LabelMap ref = testing::RandomLabelMap(rng, 6, 6, num_classes);

    std::vector<std::uint16_t> perm(num_classes);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = num_classes - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.NextU64() % (i + 1)]);
    }
    auto apply = [&](const LabelMap& map) {
      LabelMap out = map;
      for (auto& label : out.labels()) label = perm[label];
      return out;
    };
    EXPECT_NEAR(Miou(apply(pred), apply(ref), num_classes),
                Miou(pred, ref, num_classes), 1e-12);
    EXPECT_DOUBLE_EQ(Pacc(apply(pred), apply(ref)), Pacc(pred, ref));
  }
}

TEST(ProxyMetric, SelectsTheRequestedKind) {
  const LabelMap pred = Map2x2(0, 0, 1, 1, 2);
  const LabelMap ref = Map2x2(0, 1, 1, 1, 2);
  EXPECT_NEAR(ProxyMetric(ProxyKind::kMiou, pred, ref, 2), 7.0 / 12.0, 1e-15);
  EXPECT_DOUBLE_EQ(ProxyMetric(ProxyKind::kPacc, pred, ref, 2), 0.75);
}

TEST(ProxyKindNames, RoundTrip) {
  EXPECT_EQ(ParseProxyKind("miou"), ProxyKind::kMiou);
  EXPECT_EQ(ParseProxyKind("pacc"), ProxyKind::kPacc);
  EXPECT_EQ(ToString(ProxyKind::kMiou), "miou");
  EXPECT_THROW(ParseProxyKind("iou"), std::invalid_argument);
}

}  // namespace
}  // namespace dla
