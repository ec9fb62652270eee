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
#ifndef DLA_FIXTURES_H_
#define DLA_FIXTURES_H_

#include <string>

#include "dla/types.hpp"

namespace dla {

// Deterministic synthetic evaluation images: smooth gradients, soft blobs,
// sinusoidal stripes, and radial ramps, cycled by index. Smooth patterns keep
// plenty of pixels near decision boundaries, so per-pixel labels respond to
// small perturbations the way natural scenes do.
Image MakeFixtureImage(int index, int size);

// Writes <dir>/images/fixture_NNN.png and <dir>/labels/fixture_NNN.png for
// indices [0, count). Labels are the palette segmenter's output on the clean
// image, stored as 8-bit grayscale class ids.
void WriteFixtureSet(const std::string& dir, int count, int size);

}  // namespace dla

#endif  // DLA_FIXTURES_H_
