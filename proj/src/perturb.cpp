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

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dla {

namespace {

double Clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

Image::Image(int channels, int height, int width, double fill)
    : channels_(channels), height_(height), width_(width) {
  if (channels < 1 || height < 1 || width < 1) {
    throw std::invalid_argument("Image dimensions must be positive");
  }
  data_.assign(static_cast<std::size_t>(channels) * height * width, fill);
}

Image Image::FromData(int channels, int height, int width,
                      std::vector<double> data) {
  Image img(channels, height, width);
  if (data.size() != img.size()) {
    throw std::invalid_argument("Image data length must equal C*H*W");
  }
  for (double v : data) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("Image values must lie in [0, 1]");
    }
  }
  img.data_ = std::move(data);
  return img;
}

LabelMap::LabelMap(int height, int width, int num_classes)
    : height_(height), width_(width), num_classes_(num_classes) {
  if (height < 1 || width < 1 || num_classes < 1) {
    throw std::invalid_argument("LabelMap dimensions must be positive");
  }
  labels_.assign(static_cast<std::size_t>(height) * width, 0);
}

LabelMap LabelMap::FromLabels(int height, int width, int num_classes,
                              std::vector<std::uint16_t> labels) {
  LabelMap map(height, width, num_classes);
  if (labels.size() != map.size()) {
    throw std::invalid_argument("LabelMap label count must equal H*W");
  }
  for (std::uint16_t label : labels) {
    if (label >= num_classes) {
      throw std::invalid_argument("label " + std::to_string(label) +
                                  " out of range for " +
                                  std::to_string(num_classes) + " classes");
    }
  }
  map.labels_ = std::move(labels);
  return map;
}

SignMask SignMask::Ones(int height, int width) {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("SignMask dimensions must be positive");
  }
  SignMask mask;
  mask.height_ = height;
  mask.width_ = width;
  mask.entries_.assign(static_cast<std::size_t>(height) * width, 1);
  return mask;
}

int CeilLog2(int dim) {
  if (dim < 1) {
    throw std::invalid_argument("CeilLog2 requires dim >= 1");
  }
  int n = 0;
  std::int64_t reach = 1;
  while (reach < dim) {
    reach <<= 1;
    ++n;
  }
  return n;
}

std::int64_t StripeSize(int dim, int level) {
  const std::int64_t blocks = std::int64_t{1} << level;
  return (dim + blocks - 1) / blocks;
}

DensePerturbation ExpandLinearNoise(const LinearNoise& noise, int channels,
                                    int height, int width) {
  const std::size_t expected =
      noise.direction == NoiseDirection::kHorizontal
          ? static_cast<std::size_t>(height)
          : static_cast<std::size_t>(width);
  if (noise.signs.size() != expected) {
    throw std::invalid_argument("linear noise sign count does not match the " +
                                std::string(noise.direction ==
                                                    NoiseDirection::kHorizontal
                                                ? "image height"
                                                : "image width"));
  }
  DensePerturbation pert;
  pert.channels = channels;
  pert.height = height;
  pert.width = width;
  pert.values.resize(static_cast<std::size_t>(channels) * height * width);
  const bool horizontal = noise.direction == NoiseDirection::kHorizontal;
#pragma omp parallel for collapse(2)
  for (int c = 0; c < channels; ++c) {
    for (int r = 0; r < height; ++r) {
      const std::size_t base =
          (static_cast<std::size_t>(c) * height + r) * width;
      for (int col = 0; col < width; ++col) {
        const std::int8_t sign = horizontal ? noise.signs[r] : noise.signs[col];
        pert.values[base + col] = sign * noise.epsilon;
      }
    }
  }
  return pert;
}

Image ApplyPerturbation(const Image& image, const DensePerturbation& pert) {
  if (pert.channels != image.channels() || pert.height != image.height() ||
      pert.width != image.width()) {
    throw std::invalid_argument("perturbation shape does not match image");
  }
  Image out(image.channels(), image.height(), image.width());
  const std::vector<double>& x = image.data();
  std::vector<double>& y = out.data();
  const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for
  for (std::int64_t i = 0; i < n; ++i) {
    y[i] = Clamp01(x[i] + pert.values[i]);
  }
  return out;
}

namespace serial {

Image ApplyPerturbation(const Image& image, const DensePerturbation& pert) {
  if (pert.channels != image.channels() || pert.height != image.height() ||
      pert.width != image.width()) {
    throw std::invalid_argument("perturbation shape does not match image");
  }
  Image out(image.channels(), image.height(), image.width());
  for (std::size_t i = 0; i < image.size(); ++i) {
    out.data()[i] = Clamp01(image.data()[i] + pert.values[i]);
  }
  return out;
}

}  // namespace serial

StripeBounds ComputeStripeBounds(int direction, int level, std::int64_t index,
                                 int height, int width) {
  StripeBounds bounds;
  const int dim = direction == 1 ? height : width;
  const std::int64_t size = StripeSize(dim, level);
  const int begin =
      static_cast<int>(std::min<std::int64_t>(index * size, dim));
  const int end =
      static_cast<int>(std::min<std::int64_t>((index + 1) * size, dim));
  if (direction == 1) {
    bounds.row_begin = begin;
    bounds.row_end = end;
    bounds.col_begin = 0;
    bounds.col_end = width;
  } else {
    bounds.row_begin = 0;
    bounds.row_end = height;
    bounds.col_begin = begin;
    bounds.col_end = end;
  }
  return bounds;
}

SignMask FlipStripe(SignMask mask, const StripeBounds& bounds) {
  if (bounds.row_begin < 0 || bounds.row_end > mask.height() ||
      bounds.col_begin < 0 || bounds.col_end > mask.width()) {
    throw std::invalid_argument("stripe bounds exceed mask extents");
  }
  for (int r = bounds.row_begin; r < bounds.row_end; ++r) {
    for (int c = bounds.col_begin; c < bounds.col_end; ++c) {
      mask.at(r, c) = static_cast<std::int8_t>(-mask.at(r, c));
    }
  }
  return mask;
}

DensePerturbation Compose(const DensePerturbation& pert,
                          const SignMask& mask) {
  if (mask.height() != pert.height || mask.width() != pert.width) {
    throw std::invalid_argument("mask shape does not match perturbation");
  }
  DensePerturbation out = pert;
#pragma omp parallel for collapse(2)
  for (int c = 0; c < pert.channels; ++c) {
    for (int r = 0; r < pert.height; ++r) {
      const std::size_t base =
          (static_cast<std::size_t>(c) * pert.height + r) * pert.width;
      for (int col = 0; col < pert.width; ++col) {
        out.values[base + col] = pert.values[base + col] * mask.at(r, col);
      }
    }
  }
  return out;
}

Image ApplySignedNoise(const Image& image, const LinearNoise& noise,
                       const SignMask& committed, const SignMask& working) {
  const int height = image.height();
  const int width = image.width();
  const std::size_t expected =
      noise.direction == NoiseDirection::kHorizontal
          ? static_cast<std::size_t>(height)
          : static_cast<std::size_t>(width);
  if (noise.signs.size() != expected || committed.height() != height ||
      committed.width() != width || working.height() != height ||
      working.width() != width) {
    throw std::invalid_argument("signed noise shape does not match image");
  }
  Image out(image.channels(), height, width);
  const bool horizontal = noise.direction == NoiseDirection::kHorizontal;
#pragma omp parallel for collapse(2)
  for (int c = 0; c < image.channels(); ++c) {
    for (int r = 0; r < height; ++r) {
      for (int col = 0; col < width; ++col) {
        const std::int8_t line = horizontal ? noise.signs[r] : noise.signs[col];
        const double delta =
            noise.epsilon * line * committed.at(r, col) * working.at(r, col);
        out.at(c, r, col) = Clamp01(image.at(c, r, col) + delta);
      }
    }
  }
  return out;
}

}  // namespace dla
