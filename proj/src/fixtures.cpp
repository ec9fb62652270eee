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
#include "dla/fixtures.hpp"

#include <cmath>
#include <filesystem>

#include "dla/png_io.hpp"
#include "dla/rng.hpp"
#include "dla/segmenters.hpp"

namespace dla {

namespace {

constexpr double kPi = 3.14159265358979323846;

double Clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Keeps values away from the saturated endpoints so perturbations act on a
// live range.
double Squash(double v) { return 0.06 + 0.88 * Clamp01(v); }

Image MakeGradient(Rng& rng, int size) {
  const double angle = rng.Uniform(0.0, kPi);
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  const double phase[3] = {rng.Uniform(0.0, 0.5), rng.Uniform(0.0, 0.5),
                           rng.Uniform(0.0, 0.5)};
  const double slope = rng.Uniform(0.6, 1.3);
  Image image(3, size, size);
  for (int r = 0; r < size; ++r) {
    for (int col = 0; col < size; ++col) {
      const double t =
          slope * (dx * col + dy * r) / (size - 1.0);
      for (int c = 0; c < 3; ++c) {
        image.at(c, r, col) = Squash(std::fmod(t + phase[c], 1.0));
      }
    }
  }
  return image;
}

Image MakeBlobs(Rng& rng, int size) {
  constexpr int kBlobs = 5;
  double cx[kBlobs], cy[kBlobs], sigma[kBlobs], color[kBlobs][3];
  for (int b = 0; b < kBlobs; ++b) {
    cx[b] = rng.Uniform(0.1, 0.9) * size;
    cy[b] = rng.Uniform(0.1, 0.9) * size;
    sigma[b] = rng.Uniform(0.12, 0.3) * size;
    for (int c = 0; c < 3; ++c) color[b][c] = rng.Uniform(0.1, 1.0);
  }
  Image image(3, size, size);
  for (int r = 0; r < size; ++r) {
    for (int col = 0; col < size; ++col) {
      double acc[3] = {0.12, 0.12, 0.12};
      for (int b = 0; b < kBlobs; ++b) {
        const double d2 = (col - cx[b]) * (col - cx[b]) +
                          (r - cy[b]) * (r - cy[b]);
        const double w = std::exp(-d2 / (2.0 * sigma[b] * sigma[b]));
        for (int c = 0; c < 3; ++c) acc[c] += w * color[b][c];
      }
      for (int c = 0; c < 3; ++c) image.at(c, r, col) = Squash(acc[c] * 0.6);
    }
  }
  return image;
}

Image MakeStripes(Rng& rng, int size) {
  const double angle = rng.Uniform(0.0, kPi);
  const double freq = rng.Uniform(1.5, 4.5);
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  const double phase[3] = {rng.Uniform(0.0, 2.0 * kPi),
                           rng.Uniform(0.0, 2.0 * kPi),
                           rng.Uniform(0.0, 2.0 * kPi)};
  Image image(3, size, size);
  for (int r = 0; r < size; ++r) {
    for (int col = 0; col < size; ++col) {
      const double t = 2.0 * kPi * freq * (dx * col + dy * r) / size;
      for (int c = 0; c < 3; ++c) {
        image.at(c, r, col) = Squash(0.5 + 0.45 * std::sin(t + phase[c]));
      }
    }
  }
  return image;
}

Image MakeRadial(Rng& rng, int size) {
  const double cx = rng.Uniform(0.25, 0.75) * size;
  const double cy = rng.Uniform(0.25, 0.75) * size;
  const double scale = rng.Uniform(0.8, 1.6);
  const double tint[3] = {rng.Uniform(0.7, 1.0), rng.Uniform(0.7, 1.0),
                          rng.Uniform(0.7, 1.0)};
  Image image(3, size, size);
  for (int r = 0; r < size; ++r) {
    for (int col = 0; col < size; ++col) {
      const double d = std::hypot(col - cx, r - cy) / size;
      const double v = std::fmod(scale * d * 2.0, 1.0);
      for (int c = 0; c < 3; ++c) {
        image.at(c, r, col) = Squash(v * tint[c]);
      }
    }
  }
  return image;
}

}  // namespace

Image MakeFixtureImage(int index, int size) {
  Rng rng(DeriveStreamSeed("fixture", std::to_string(index), 0x666978));
  switch (index % 4) {
    case 0:
      return MakeGradient(rng, size);
    case 1:
      return MakeBlobs(rng, size);
    case 2:
      return MakeStripes(rng, size);
    default:
      return MakeRadial(rng, size);
  }
}

void WriteFixtureSet(const std::string& dir, int count, int size) {
  namespace fs = std::filesystem;
  const fs::path images_dir = fs::path(dir) / "images";
  const fs::path labels_dir = fs::path(dir) / "labels";
  fs::create_directories(images_dir);
  fs::create_directories(labels_dir);
  for (int i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "fixture_%03d.png", i);
    const Image image = MakeFixtureImage(i, size);
    WriteImagePng((images_dir / name).string(), image);
    const LabelMap labels = PaletteSegment(image, DefaultClassPalette());
    WriteLabelsPng((labels_dir / name).string(), labels);
  }
}

}  // namespace dla
