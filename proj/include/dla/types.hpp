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
#ifndef DLA_TYPES_H_
#define DLA_TYPES_H_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dla {

// A C x H x W real-valued tensor with every entry in [0, 1], stored
// channel-major row-major. This is the search point every attack edits.
class Image {
 public:
  Image() = default;
  Image(int channels, int height, int width, double fill = 0.0);

  // Validates the value range; throws std::invalid_argument on violation.
  static Image FromData(int channels, int height, int width,
                        std::vector<double> data);

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }

  double at(int c, int r, int col) const { return data_[Index(c, r, col)]; }
  double& at(int c, int r, int col) { return data_[Index(c, r, col)]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool SameShape(const Image& other) const {
    return channels_ == other.channels_ && height_ == other.height_ &&
           width_ == other.width_;
  }

  friend bool operator==(const Image& a, const Image& b) = default;

 private:
  std::size_t Index(int c, int r, int col) const {
    return (static_cast<std::size_t>(c) * height_ + r) * width_ + col;
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

// H x W per-pixel class ids in [0, num_classes). The only output a
// decision-based oracle ever reveals.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int height, int width, int num_classes);

  // Validates every id against num_classes; throws std::invalid_argument.
  static LabelMap FromLabels(int height, int width, int num_classes,
                             std::vector<std::uint16_t> labels);

  int height() const { return height_; }
  int width() const { return width_; }
  int num_classes() const { return num_classes_; }
  std::size_t size() const { return labels_.size(); }

  std::uint16_t at(int r, int c) const {
    return labels_[static_cast<std::size_t>(r) * width_ + c];
  }
  std::uint16_t& at(int r, int c) {
    return labels_[static_cast<std::size_t>(r) * width_ + c];
  }

  const std::vector<std::uint16_t>& labels() const { return labels_; }
  std::vector<std::uint16_t>& labels() { return labels_; }

  bool SameShape(const LabelMap& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const LabelMap& a, const LabelMap& b) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int num_classes_ = 0;
  std::vector<std::uint16_t> labels_;
};

}  // namespace dla

#endif  // DLA_TYPES_H_
