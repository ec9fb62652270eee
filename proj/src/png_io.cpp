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
#include "dla/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

namespace dla {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FileHandle = std::unique_ptr<std::FILE, FileCloser>;

FileHandle OpenFile(const std::string& path, const char* mode) {
  FileHandle file(std::fopen(path.c_str(), mode));
  if (!file) {
    throw IoError("cannot open " + path);
  }
  return file;
}

// Reads any PNG as 8-bit rows with the requested number of channels
// (1 = gray, 3 = RGB), using libpng's canonical transforms.
std::vector<std::uint8_t> ReadPngRows(const std::string& path, int channels,
                                      int& height, int& width) {
  FileHandle file = OpenFile(path, "rb");
  png_byte header[8];
  if (std::fread(header, 1, 8, file.get()) != 8 ||
      png_sig_cmp(header, 0, 8) != 0) {
    throw IoError(path + " is not a PNG file");
  }

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png != nullptr ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng allocation failed");
  }

  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> row_pointers;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("failed to decode " + path);
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_packing(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(png);
  }
  if (channels == 3) {
    png_set_gray_to_rgb(png);
  } else {
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  }
  png_read_update_info(png, info);

  height = static_cast<int>(png_get_image_height(png, info));
  width = static_cast<int>(png_get_image_width(png, info));
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  if (row_bytes != static_cast<std::size_t>(width) * channels) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("unexpected row layout in " + path);
  }

  pixels.resize(static_cast<std::size_t>(height) * row_bytes);
  row_pointers.resize(height);
  for (int r = 0; r < height; ++r) {
    row_pointers[r] = pixels.data() + static_cast<std::size_t>(r) * row_bytes;
  }
  png_read_image(png, row_pointers.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return pixels;
}

void WritePngRows(const std::string& path, int height, int width,
                  int color_type, const std::vector<std::uint8_t>& pixels) {
  FileHandle file = OpenFile(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            nullptr, nullptr);
  png_infop info = png != nullptr ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng allocation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed to encode " + path);
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
  const std::size_t row_bytes = static_cast<std::size_t>(width) * channels;
  for (int r = 0; r < height; ++r) {
    png_write_row(png, const_cast<png_bytep>(
                           pixels.data() + static_cast<std::size_t>(r) *
                                               row_bytes));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

std::uint8_t ToByte(double v) {
  return static_cast<std::uint8_t>(
      std::lround(std::min(1.0, std::max(0.0, v)) * 255.0));
}

}  // namespace

Image ReadImagePng(const std::string& path) {
  int height = 0;
  int width = 0;
  const std::vector<std::uint8_t> pixels =
      ReadPngRows(path, 3, height, width);
  Image image(3, height, width);
  for (int r = 0; r < height; ++r) {
    for (int col = 0; col < width; ++col) {
      const std::size_t base =
          (static_cast<std::size_t>(r) * width + col) * 3;
      for (int c = 0; c < 3; ++c) {
        image.at(c, r, col) = pixels[base + c] / 255.0;
      }
    }
  }
  return image;
}

LabelMap ReadLabelsPng(const std::string& path) {
  int height = 0;
  int width = 0;
  const std::vector<std::uint8_t> pixels =
      ReadPngRows(path, 1, height, width);
  int max_label = 0;
  for (std::uint8_t v : pixels) {
    max_label = std::max(max_label, static_cast<int>(v));
  }
  LabelMap labels(height, width, max_label + 1);
  for (int r = 0; r < height; ++r) {
    for (int col = 0; col < width; ++col) {
      labels.at(r, col) = pixels[static_cast<std::size_t>(r) * width + col];
    }
  }
  return labels;
}

void WriteImagePng(const std::string& path, const Image& image) {
  std::vector<std::uint8_t> pixels(
      static_cast<std::size_t>(image.height()) * image.width() * 3);
  for (int r = 0; r < image.height(); ++r) {
    for (int col = 0; col < image.width(); ++col) {
      const std::size_t base =
          (static_cast<std::size_t>(r) * image.width() + col) * 3;
      for (int c = 0; c < 3; ++c) {
        const int source = std::min(c, image.channels() - 1);
        pixels[base + c] = ToByte(image.at(source, r, col));
      }
    }
  }
  WritePngRows(path, image.height(), image.width(), PNG_COLOR_TYPE_RGB,
               pixels);
}

void WriteLabelsPng(const std::string& path, const LabelMap& labels) {
  std::vector<std::uint8_t> pixels(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::uint16_t label = labels.labels()[i];
    if (label > 255) {
      throw IoError("label " + std::to_string(label) +
                    " does not fit 8-bit grayscale");
    }
    pixels[i] = static_cast<std::uint8_t>(label);
  }
  WritePngRows(path, labels.height(), labels.width(), PNG_COLOR_TYPE_GRAY,
               pixels);
}

void WriteRgbPng(const std::string& path, int height, int width,
                 const std::vector<std::uint8_t>& rgb) {
  if (rgb.size() != static_cast<std::size_t>(height) * width * 3) {
    throw std::invalid_argument("rgb buffer size does not match dimensions");
  }
  WritePngRows(path, height, width, PNG_COLOR_TYPE_RGB, rgb);
}

}  // namespace dla
