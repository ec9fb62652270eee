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
#include "dla/segmenters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dla {

namespace {

std::uint16_t ThresholdLabel(const Image& image, int r, int col,
                             int num_classes) {
  double sum = 0.0;
  for (int c = 0; c < image.channels(); ++c) {
    sum += WireQuantize(image.at(c, r, col));
  }
  const double gray = sum / image.channels();
  const int label = std::min(static_cast<int>(gray * num_classes),
                             num_classes - 1);
  return static_cast<std::uint16_t>(label);
}

std::uint16_t PaletteLabel(const Image& image, int r, int col,
                           const std::vector<std::array<double, 3>>& palette) {
  double best_dist = 0.0;
  std::uint16_t best = 0;
  for (std::size_t k = 0; k < palette.size(); ++k) {
    double dist = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double diff = WireQuantize(image.at(c, r, col)) - palette[k][c];
      dist += diff * diff;
    }
    if (k == 0 || dist < best_dist) {
      best_dist = dist;
      best = static_cast<std::uint16_t>(k);
    }
  }
  return best;
}

std::uint16_t MajorityLabel(const LabelMap& base, int r, int col, int radius,
                            std::vector<int>& counts) {
  std::fill(counts.begin(), counts.end(), 0);
  const int r0 = std::max(0, r - radius);
  const int r1 = std::min(base.height() - 1, r + radius);
  const int c0 = std::max(0, col - radius);
  const int c1 = std::min(base.width() - 1, col + radius);
  for (int rr = r0; rr <= r1; ++rr) {
    for (int cc = c0; cc <= c1; ++cc) {
      ++counts[base.at(rr, cc)];
    }
  }
  int best = 0;
  for (std::size_t k = 1; k < counts.size(); ++k) {
    if (counts[k] > counts[best]) best = static_cast<int>(k);
  }
  return static_cast<std::uint16_t>(best);
}

void CheckThresholdArgs(int num_classes) {
  if (num_classes < 2) {
    throw std::invalid_argument("threshold segmenter needs at least 2 classes");
  }
}

void CheckPaletteArgs(const Image& image,
                      const std::vector<std::array<double, 3>>& palette) {
  if (palette.empty()) {
    throw std::invalid_argument("palette must be nonempty");
  }
  if (image.channels() != 3) {
    throw std::invalid_argument("palette segmenter needs a 3-channel image");
  }
  for (const auto& centroid : palette) {
    for (double v : centroid) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("palette centroids must lie in [0, 1]");
      }
    }
  }
}

void CheckContextArgs(int num_classes, int radius) {
  CheckThresholdArgs(num_classes);
  if (radius < 1) {
    throw std::invalid_argument("context segmenter needs radius >= 1");
  }
}

}  // namespace

LabelMap ThresholdSegment(const Image& image, int num_classes) {
  CheckThresholdArgs(num_classes);
  LabelMap out(image.height(), image.width(), num_classes);
#pragma omp parallel for
  for (int r = 0; r < image.height(); ++r) {
    for (int col = 0; col < image.width(); ++col) {
      out.at(r, col) = ThresholdLabel(image, r, col, num_classes);
    }
  }
  return out;
}

LabelMap PaletteSegment(const Image& image,
                        const std::vector<std::array<double, 3>>& palette) {
  CheckPaletteArgs(image, palette);
  LabelMap out(image.height(), image.width(),
               static_cast<int>(palette.size()));
#pragma omp parallel for
  for (int r = 0; r < image.height(); ++r) {
    for (int col = 0; col < image.width(); ++col) {
      out.at(r, col) = PaletteLabel(image, r, col, palette);
    }
  }
  return out;
}

LabelMap ContextSegment(const Image& image, int num_classes, int radius) {
  CheckContextArgs(num_classes, radius);
  const LabelMap base = ThresholdSegment(image, num_classes);
  LabelMap out(image.height(), image.width(), num_classes);
#pragma omp parallel
  {
    std::vector<int> counts(num_classes);
#pragma omp for
    for (int r = 0; r < image.height(); ++r) {
      for (int col = 0; col < image.width(); ++col) {
        out.at(r, col) = MajorityLabel(base, r, col, radius, counts);
      }
    }
  }
  return out;
}

namespace serial {

LabelMap ThresholdSegment(const Image& image, int num_classes) {
  CheckThresholdArgs(num_classes);
  LabelMap out(image.height(), image.width(), num_classes);
  for (int r = 0; r < image.height(); ++r) {
    for (int col = 0; col < image.width(); ++col) {
      out.at(r, col) = ThresholdLabel(image, r, col, num_classes);
    }
  }
  return out;
}

LabelMap PaletteSegment(const Image& image,
                        const std::vector<std::array<double, 3>>& palette) {
  CheckPaletteArgs(image, palette);
  LabelMap out(image.height(), image.width(),
               static_cast<int>(palette.size()));
  for (int r = 0; r < image.height(); ++r) {
    for (int col = 0; col < image.width(); ++col) {
      out.at(r, col) = PaletteLabel(image, r, col, palette);
    }
  }
  return out;
}

LabelMap ContextSegment(const Image& image, int num_classes, int radius) {
  CheckContextArgs(num_classes, radius);
  const LabelMap base = serial::ThresholdSegment(image, num_classes);
  LabelMap out(image.height(), image.width(), num_classes);
  std::vector<int> counts(num_classes);
  for (int r = 0; r < image.height(); ++r) {
    for (int col = 0; col < image.width(); ++col) {
      out.at(r, col) = MajorityLabel(base, r, col, radius, counts);
    }
  }
  return out;
}

}  // namespace serial

const std::vector<std::array<double, 3>>& DefaultClassPalette() {
  auto scale = [](int r, int g, int b) {
    return std::array<double, 3>{r / 255.0, g / 255.0, b / 255.0};
  };
  static const std::vector<std::array<double, 3>> palette = {
      scale(128, 64, 128), scale(244, 35, 232), scale(70, 70, 70),
      scale(102, 102, 156), scale(190, 153, 153), scale(153, 153, 153),
      scale(250, 170, 30), scale(220, 220, 0), scale(107, 142, 35),
      scale(152, 251, 152), scale(70, 130, 180), scale(220, 20, 60),
      scale(255, 0, 0), scale(0, 0, 142), scale(0, 0, 70),
      scale(0, 60, 100), scale(0, 80, 100), scale(0, 0, 230),
      scale(119, 11, 32)};
  return palette;
}

std::array<std::uint8_t, 3> ClassColor(int label) {
  const auto& palette = DefaultClassPalette();
  const auto& rgb = palette[static_cast<std::size_t>(label) % palette.size()];
  return {static_cast<std::uint8_t>(std::lround(rgb[0] * 255.0)),
          static_cast<std::uint8_t>(std::lround(rgb[1] * 255.0)),
          static_cast<std::uint8_t>(std::lround(rgb[2] * 255.0))};
}

ThresholdOracle::ThresholdOracle(int num_classes) : num_classes_(num_classes) {
  CheckThresholdArgs(num_classes);
}

LabelMap ThresholdOracle::Query(const Image& image) const {
  return ThresholdSegment(image, num_classes_);
}

PaletteOracle::PaletteOracle(std::vector<std::array<double, 3>> palette)
    : palette_(std::move(palette)) {
  if (palette_.empty()) {
    throw std::invalid_argument("palette must be nonempty");
  }
}

LabelMap PaletteOracle::Query(const Image& image) const {
  return PaletteSegment(image, palette_);
}

ContextOracle::ContextOracle(int num_classes, int radius)
    : num_classes_(num_classes), radius_(radius) {
  CheckContextArgs(num_classes, radius);
}

LabelMap ContextOracle::Query(const Image& image) const {
  return ContextSegment(image, num_classes_, radius_);
}

}  // namespace dla
