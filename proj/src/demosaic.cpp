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

#include <cmath>

#include "natstego/develop.hpp"
#include "natstego/errors.hpp"
#include "natstego/parallel.hpp"

namespace natstego {

Channel cfa_channel(CfaPattern p, int x, int y) {
  const int pos = (y & 1) * 2 + (x & 1);
  static constexpr Channel kTable[4][4] = {
      {kRed, kGreen, kGreen, kBlue},  // RGGB
      {kBlue, kGreen, kGreen, kRed},  // BGGR
      {kGreen, kRed, kBlue, kGreen},  // GRBG
      {kGreen, kBlue, kRed, kGreen},  // GBRG
  };
  return kTable[static_cast<int>(p)][pos];
}

namespace {

// Mirror without repeating the edge sample; preserves CFA parity on even sizes.
inline int reflect101(int i, int n) {
  if (i < 0) return -i;
  if (i >= n) return 2 * n - 2 - i;
  return i;
}

void check_mosaic(int w, int h, int channels) {
  if (channels != 1) throw UsageError("demosaicing expects a single-channel mosaic");
  if (w < 2 || h < 2 || (w & 1) || (h & 1)) throw UsageError("mosaic dimensions must be even");
}

// Sum and count of the 3x3 neighbours of (x, y) recorded in channel ch.
template <typename Get>
inline void neighbour_sum(const Get& get, CfaPattern cfa, int w, int h, int x, int y, int ch, double& sum,
                          int& count) {
  sum = 0.0;
  count = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const int xx = reflect101(x + dx, w);
      const int yy = reflect101(y + dy, h);
      if (cfa_channel(cfa, xx, yy) != ch) continue;
      sum += get(xx, yy);
      ++count;
    }
  }
}

}  // namespace

ImageD demosaic_bilinear(const ImageD& mosaic, CfaPattern cfa) {
  check_mosaic(mosaic.width, mosaic.height, mosaic.channels);
  const int w = mosaic.width;
  const int h = mosaic.height;
  ImageD out(w, h, 3);
  auto get = [&](int x, int y) { return mosaic.at(x, y); };
  parallel_for(static_cast<std::size_t>(h), [&](std::size_t y0, std::size_t y1) {
    for (int y = static_cast<int>(y0); y < static_cast<int>(y1); ++y) {
      for (int x = 0; x < w; ++x) {
        const int rec = cfa_channel(cfa, x, y);
        for (int ch = 0; ch < 3; ++ch) {
          if (ch == rec) {
            out.at(x, y, ch) = mosaic.at(x, y);
            continue;
          }
          double sum;
          int count;
          neighbour_sum(get, cfa, w, h, x, y, ch, sum, count);
          out.at(x, y, ch) = sum / count;
        }
      }
    }
  });
  return out;
}

Raster16 demosaic_bilinear(const Raster16& mosaic, CfaPattern cfa) {
  check_mosaic(mosaic.width, mosaic.height, mosaic.channels);
  const int w = mosaic.width;
  const int h = mosaic.height;
  Raster16 out(w, h, 3, mosaic.bit_depth);
  auto get = [&](int x, int y) { return static_cast<double>(mosaic.at(x, y)); };
  parallel_for(static_cast<std::size_t>(h), [&](std::size_t y0, std::size_t y1) {
    for (int y = static_cast<int>(y0); y < static_cast<int>(y1); ++y) {
      for (int x = 0; x < w; ++x) {
        const int rec = cfa_channel(cfa, x, y);
        for (int ch = 0; ch < 3; ++ch) {
          if (ch == rec) {
            out.at(x, y, ch) = mosaic.at(x, y);
            continue;
          }
          double sum;
          int count;
          neighbour_sum(get, cfa, w, h, x, y, ch, sum, count);
          out.at(x, y, ch) = static_cast<std::uint16_t>(std::nearbyint(sum / count));
        }
      }
    }
  });
  return out;
}

ImageD apply_color_matrix(const ImageD& rgb, const Matrix3& c) {
  if (rgb.channels != 3) throw UsageError("colour transform expects a 3-channel image");
  ImageD out(rgb.width, rgb.height, 3);
  const std::size_t n = rgb.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const double* v = &rgb.samples[3 * i];
    double* o = &out.samples[3 * i];
    for (int r = 0; r < 3; ++r) o[r] = c[3 * r] * v[0] + c[3 * r + 1] * v[1] + c[3 * r + 2] * v[2];
  }
  return out;
}

}  // namespace natstego
