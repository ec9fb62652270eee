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
#ifndef DLA_PERTURB_H_
#define DLA_PERTURB_H_

#include <cstdint>
#include <vector>

#include "dla/types.hpp"

namespace dla {

enum class NoiseDirection {
  kHorizontal,  // one sign per row, constant along each row
  kVertical,    // one sign per column, constant along each column
};

// Stripe direction flag as used by the calibration schedule:
// 1 selects row stripes (pairs with horizontal noise), 0 column stripes.
inline int DirectionFlag(NoiseDirection dir) {
  return dir == NoiseDirection::kHorizontal ? 1 : 0;
}

// A {-eps, +eps} perturbation that is constant along entire rows or columns:
// one sign per line, broadcast across the other axis and all channels.
struct LinearNoise {
  NoiseDirection direction = NoiseDirection::kHorizontal;
  std::vector<std::int8_t> signs;  // entries in {-1, +1}; length H or W
  double epsilon = 0.0;
};

// An H x W field of {-1, +1} multiplied into a kept perturbation. The object
// the calibration phase edits.
class SignMask {
 public:
  SignMask() = default;
  static SignMask Ones(int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }

  std::int8_t at(int r, int c) const {
    return entries_[static_cast<std::size_t>(r) * width_ + c];
  }
  std::int8_t& at(int r, int c) {
    return entries_[static_cast<std::size_t>(r) * width_ + c];
  }

  const std::vector<std::int8_t>& entries() const { return entries_; }

  friend bool operator==(const SignMask& a, const SignMask& b) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::int8_t> entries_;
};

// A full C x H x W perturbation tensor with values in {-eps, 0, +eps}
// (zero only for the initial, empty perturbation).
struct DensePerturbation {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> values;

  double at(int c, int r, int col) const {
    return values[(static_cast<std::size_t>(c) * height + r) * width + col];
  }
};

// Half-open pixel rectangle [row_begin, row_end) x [col_begin, col_end).
struct StripeBounds {
  int row_begin = 0;
  int row_end = 0;
  int col_begin = 0;
  int col_end = 0;

  bool Empty() const { return row_begin >= row_end || col_begin >= col_end; }

  friend bool operator==(const StripeBounds& a, const StripeBounds& b) =
      default;
};

// Smallest n with 2^n >= dim (dim >= 1).
int CeilLog2(int dim);

// Stripe extent ceil(dim / 2^level).
std::int64_t StripeSize(int dim, int level);

// Broadcasts a one-sign-per-line noise to the full tensor:
// out[c][r][col] = signs[r] * eps (horizontal) or signs[col] * eps (vertical).
// Throws std::invalid_argument if the sign count does not match H or W.
DensePerturbation ExpandLinearNoise(const LinearNoise& noise, int channels,
                                    int height, int width);

// clamp(image + pert, 0, 1). Throws std::invalid_argument on shape mismatch.
Image ApplyPerturbation(const Image& image, const DensePerturbation& pert);

// The hierarchical-flip schedule's stripe at (level, index) along the given
// direction: row stripes of height ceil(H/2^level) for direction 1, column
// stripes of width ceil(W/2^level) for direction 0. The result is clamped to
// the image extents; an empty stripe is a legal result.
StripeBounds ComputeStripeBounds(int direction, int level, std::int64_t index,
                                 int height, int width);

// Negates the mask inside the bounds; applying twice is the identity.
SignMask FlipStripe(SignMask mask, const StripeBounds& bounds);

// Elementwise product pert[c][r][w] * mask[r][w], mask broadcast across
// channels. Preserves the value set {-eps, 0, +eps}.
DensePerturbation Compose(const DensePerturbation& pert, const SignMask& mask);

// Fused clamp(x + eps * line_sign * committed * working) used by the attack
// inner loop so the kept perturbation stays in structured form. Bit-identical
// to the ExpandLinearNoise/Compose/ApplyPerturbation composition.
Image ApplySignedNoise(const Image& image, const LinearNoise& noise,
                       const SignMask& committed, const SignMask& working);

namespace serial {
Image ApplyPerturbation(const Image& image, const DensePerturbation& pert);
}  // namespace serial

}  // namespace dla

#endif  // DLA_PERTURB_H_
