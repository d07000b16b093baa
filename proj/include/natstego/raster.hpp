// Copyright 2026 The natstego Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace natstego {

// Owned row-major grid of unsigned samples, channel-interleaved. 8-bit content
// is stored widened with bit_depth == 8.
struct Raster16 {
  int width = 0;
  int height = 0;
  int channels = 1;
  int bit_depth = 16;
  std::vector<std::uint16_t> samples;

  Raster16() = default;
  Raster16(int w, int h, int ch, int depth);

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  std::uint16_t max_value() const { return static_cast<std::uint16_t>((1u << bit_depth) - 1u); }

  std::uint16_t& at(int x, int y, int c = 0) {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint16_t at(int x, int y, int c = 0) const {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  std::span<const std::uint16_t> row(int y) const {
    return {samples.data() + static_cast<std::size_t>(y) * width * channels,
            static_cast<std::size_t>(width) * channels};
  }

  // Throws UsageError when the size/depth/range invariants do not hold.
  void validate() const;

  bool operator==(const Raster16&) const = default;
};

// Real-valued planar-free image used for developed (pre-quantization) data.
struct ImageD {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<double> samples;

  ImageD() = default;
  ImageD(int w, int h, int ch, double fill = 0.0)
      : width(w), height(h), channels(ch),
        samples(static_cast<std::size_t>(w) * h * ch, fill) {}

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  double& at(int x, int y, int c = 0) {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  double at(int x, int y, int c = 0) const {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

ImageD to_real(const Raster16& r);

struct TileSpec {
  int tile_w = 0;
  int tile_h = 0;
  int grid_cols = 0;
  int grid_rows = 0;
};

Raster16 read_raster(const std::filesystem::path& path);
void write_raster(const Raster16& r, const std::filesystem::path& path);

// In-memory codec used by read_raster/write_raster.
Raster16 decode_pnm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pnm(const Raster16& r);

// Grid of tiles cut from the top-left corner, row-major order. Right and
// bottom margins that do not fill a whole tile are dropped.
std::vector<Raster16> tile(const Raster16& r, const TileSpec& spec);

// Top-left crop.
Raster16 crop(const Raster16& r, int width, int height);

}  // namespace natstego
