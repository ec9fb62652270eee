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
#ifndef DLA_PNG_IO_H_
#define DLA_PNG_IO_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dla/types.hpp"

namespace dla {

// File decode/encode failure (corrupt file, unwritable path, ...).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Decodes any PNG to a 3-channel image with values byte/255. Palette and
// grayscale files are expanded to RGB; alpha is dropped; 16-bit is reduced.
Image ReadImagePng(const std::string& path);

// Decodes an 8-bit grayscale PNG as per-pixel class ids; num_classes is set
// to max id + 1.
LabelMap ReadLabelsPng(const std::string& path);

// Encodes an image as 8-bit RGB, rounding each value to byte scale. A single
// channel is replicated; extra channels beyond three are dropped.
void WriteImagePng(const std::string& path, const Image& image);

// Encodes class ids as an 8-bit grayscale PNG (requires ids < 256).
void WriteLabelsPng(const std::string& path, const LabelMap& labels);

// Encodes raw interleaved 8-bit RGB rows.
void WriteRgbPng(const std::string& path, int height, int width,
                 const std::vector<std::uint8_t>& rgb);

}  // namespace dla

#endif  // DLA_PNG_IO_H_
