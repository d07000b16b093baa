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
#include "natstego/kernels.hpp"
#include "natstego/parallel.hpp"

namespace natstego {

Raster16 downsample_sub(const Raster16& cover, int c) {
  if (c < 1) throw UsageError("downsampling factor must be at least 1");
  if (cover.width < c || cover.height < c) throw UsageError("image smaller than the downsampling factor");
  const int w = (cover.width + c - 1) / c;
  const int h = (cover.height + c - 1) / c;
  Raster16 out(w, h, cover.channels, cover.bit_depth);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int ch = 0; ch < cover.channels; ++ch) out.at(x, y, ch) = cover.at(x * c, y * c, ch);
    }
  }
  return out;
}

ImageD downsample_box(const Raster16& cover, int c) {
  if (c < 1) throw UsageError("downsampling factor must be at least 1");
  if (cover.channels != 1) throw UsageError("box downsampling expects a single-channel image");
  if (cover.width % c != 0 || cover.height % c != 0) {
    throw UsageError("image dimensions must be divisible by the box factor");
  }
  const int w = cover.width / c;
  const int h = cover.height / c;
  ImageD out(w, h, 1);
  const auto& kern = simd::kernels();
  const double area = static_cast<double>(c) * c;
  parallel_for(static_cast<std::size_t>(h), [&](std::size_t y0, std::size_t y1) {
    std::vector<std::uint32_t> acc(static_cast<std::size_t>(cover.width));
    for (std::size_t by = y0; by < y1; ++by) {
      std::fill(acc.begin(), acc.end(), 0u);
      for (int r = 0; r < c; ++r) {
        kern.add_u16_u32(cover.row(static_cast<int>(by) * c + r).data(), acc.size(), acc.data());
      }
      for (int bx = 0; bx < w; ++bx) {
        std::uint64_t s = 0;
        for (int t = 0; t < c; ++t) s += acc[static_cast<std::size_t>(bx * c + t)];
        out.at(bx, static_cast<int>(by)) = static_cast<double>(s) / area;
      }
    }
  });
  return out;
}

ChangeProbMap downsample_box_probs(const Raster16& cover, const StegoParams& p, int c, int K) {
  if (cover.bit_depth != p.bit_depth_in) throw UsageError("cover bit depth does not match the stego parameters");
  if (c == 1) return change_probs(cover, p, K);
  const ImageD mean = downsample_box(cover, c);
  const double area = static_cast<double>(c) * c;
  std::vector<double> var(mean.samples.size());
  simd::kernels().affine(mean.samples.data(), var.size(), p.a_dd, p.b_dd, 1.0 / area, var.data());
  const Quantizer q{p.quant_step()};
  return assemble_prob_map(mean.width, mean.height, p.quant_step(), K, p.wet_dark, p.perturbation,
                           [&](std::size_t i) {
                             const double x = mean.samples[i];
                             return CellModel{q.code(x), x, std::sqrt(var[i]), false};
                           });
}

Upsampled upsample(const Raster16& stego, const ChangeProbMap& m, int c) {
  if (c < 1) throw UsageError("upsampling factor must be at least 1");
  if (stego.channels != 1 || stego.width != m.width() || stego.height != m.height()) {
    throw UsageError("stego image does not match the probability map");
  }
  const int w = stego.width * c;
  const int h = stego.height * c;
  Upsampled up;
  up.factor = c;
  up.stego = Raster16(w, h, 1, stego.bit_depth);
  ChangeProbMap out(w, h, m.quant_step());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t src = static_cast<std::size_t>(y / c) * stego.width + x / c;
      const std::size_t dst = static_cast<std::size_t>(y) * w + x;
      up.stego.samples[dst] = stego.samples[src];
      if (x % c == 0 && y % c == 0) {
        const auto pr = m.probs(src);
        out.set(dst, m.flags(src), m.center(src), m.mean(src), m.sigma(src), m.k_lo(src),
                std::vector<double>(pr.begin(), pr.end()));
      } else {
        out.set(dst, static_cast<std::uint8_t>(m.flags(src) | kNonCarrier), m.center(src), m.mean(src), 0.0, 0,
                {1.0});
      }
    }
  }
  out.finish();
  up.probs = std::move(out);
  return up;
}

std::vector<std::int16_t> decode_upsampled(const Upsampled& up) {
  const int c = up.factor;
  const int w = up.stego.width / c;
  const int h = up.stego.height / c;
  std::vector<std::int16_t> k(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y * c) * up.stego.width + static_cast<std::size_t>(x * c);
      k[static_cast<std::size_t>(y) * w + x] = static_cast<std::int16_t>(up.stego.samples[i] - up.probs.center(i));
    }
  }
  return k;
}

}  // namespace natstego
