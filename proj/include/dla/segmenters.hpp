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
#ifndef DLA_SEGMENTERS_H_
#define DLA_SEGMENTERS_H_

#include <array>
#include <string>
#include <vector>

#include "dla/oracle.hpp"
#include "dla/types.hpp"

namespace dla {

// Deterministic built-in segmenters standing in for a pixel-level classifier.
// All of them see the image at wire precision (see WireQuantize).

// Per pixel: gray = mean over channels, label = min(floor(gray * K), K - 1).
LabelMap ThresholdSegment(const Image& image, int num_classes);

// Per pixel: nearest centroid by squared L2 distance; ties take the smallest
// class id. Image must have 3 channels.
LabelMap PaletteSegment(const Image& image,
                        const std::vector<std::array<double, 3>>& palette);

// ThresholdSegment followed by a majority vote over the (2r+1)^2 window
// around each pixel (clamped at borders); ties take the smallest label.
// Label changes spread spatially, mimicking context aggregation.
LabelMap ContextSegment(const Image& image, int num_classes, int radius);

// Fixed 19-entry urban-scene colormap used as palette centroids, fixture
// label colors, and render colors.
const std::vector<std::array<double, 3>>& DefaultClassPalette();

// 8-bit render color for a class id (cycles beyond the palette size).
std::array<std::uint8_t, 3> ClassColor(int label);

class ThresholdOracle : public Oracle {
 public:
  explicit ThresholdOracle(int num_classes);
  LabelMap Query(const Image& image) const override;
  int num_classes() const override { return num_classes_; }
  const std::string& name() const override { return name_; }

 private:
  int num_classes_;
  std::string name_ = "threshold";
};

class PaletteOracle : public Oracle {
 public:
  explicit PaletteOracle(std::vector<std::array<double, 3>> palette);
  LabelMap Query(const Image& image) const override;
  int num_classes() const override {
    return static_cast<int>(palette_.size());
  }
  const std::string& name() const override { return name_; }

 private:
  std::vector<std::array<double, 3>> palette_;
  std::string name_ = "palette";
};

class ContextOracle : public Oracle {
 public:
  ContextOracle(int num_classes, int radius);
  LabelMap Query(const Image& image) const override;
  int num_classes() const override { return num_classes_; }
  const std::string& name() const override { return name_; }

 private:
  int num_classes_;
  int radius_;
  std::string name_ = "context";
};

namespace serial {
LabelMap ThresholdSegment(const Image& image, int num_classes);
LabelMap PaletteSegment(const Image& image,
                        const std::vector<std::array<double, 3>>& palette);
LabelMap ContextSegment(const Image& image, int num_classes, int radius);
}  // namespace serial

}  // namespace dla

#endif  // DLA_SEGMENTERS_H_
