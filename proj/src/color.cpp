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
#include <limits>

#include "natstego/develop.hpp"
#include "natstego/errors.hpp"
#include "natstego/gaussian.hpp"
#include "natstego/parallel.hpp"
#include "natstego/rng.hpp"

namespace natstego {

namespace {

constexpr double kSelectionThreshold = 1e-6;

}  // namespace

ColorEmbedding embed_color_mosaic(const Raster16& mosaic, CfaPattern cfa, const StegoParams& p, const Matrix3& c,
                                  std::uint64_t seed, int K) {
  if (mosaic.channels != 1) throw UsageError("colour embedding expects a single-channel mosaic");
  if (mosaic.bit_depth != p.bit_depth_in) throw UsageError("mosaic bit depth does not match the stego parameters");
  if (K < 0) throw UsageError("support K must be non-negative (0 selects it automatically)");
  for (double v : c) {
    if (!std::isfinite(v)) throw UsageError("colour matrix entries must be finite");
  }

  // Output channel most sensitive to the green photo-site.
  int cm = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(c[3 * i + 1]) > std::abs(c[3 * cm + 1])) cm = i;
  }
  const double c_max = c[3 * cm + 1];
  if (std::abs(c_max) < kSelectionThreshold) {
    throw ModelError("colour matrix has no usable green coefficient (all |c_i2| < 1e-6)");
  }

  const int w = mosaic.width;
  const int h = mosaic.height;
  const std::size_t n = mosaic.pixel_count();
  const Quantizer q{p.quant_step()};
  auto is_green = [&](std::size_t i) {
    return cfa_channel(cfa, static_cast<int>(i % w), static_cast<int>(i / w)) == kGreen;
  };

  std::vector<double> sigma(n);
  for (std::size_t i = 0; i < n; ++i) sigma[i] = std::sqrt(stego_sigma2(mosaic.samples[i], p));

  ColorEmbedding out;
  out.carrier_channel = cm;
  out.developed_cover = apply_color_matrix(demosaic_bilinear(to_real(mosaic), cfa), c);

  // (1) Message-free stego noise on red and blue photo-sites.
  ImageD noise(w, h, 1);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (is_green(i)) continue;
      Substream rng(seed, i, Stage::FreeNoise);
      noise.samples[i] = sigma[i] * rng.normal();
    }
  });

  // (2) Red and blue stego fields at green sites, bilinear from (1).
  const ImageD interp = demosaic_bilinear(noise, cfa);

  // (3)-(4) Law of the carrier channel at each green photo-site.
  std::vector<double> mean(n, 0.0), sd(n, 0.0);
  std::vector<int> center(n, 0);
  int min_code = Quantizer::kMaxCode;
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = out.developed_cover.samples[3 * i + cm];
    center[i] = q.code(dev);
    if (!is_green(i)) continue;
    mean[i] = dev + c[3 * cm] * interp.samples[3 * i + kRed] + c[3 * cm + 2] * interp.samples[3 * i + kBlue];
    sd[i] = std::abs(c_max) * sigma[i];
    min_code = std::min(min_code, center[i]);
  }

  ChangeProbMap m(w, h, p.quant_step());
  std::vector<std::uint8_t> wet(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_green(i)) continue;
    bool dry = center[i] > 0 && center[i] < Quantizer::kMaxCode && !(p.wet_dark && center[i] == min_code);
    if (dry && !(sd[i] > 0.0)) {
      if (p.perturbation) throw ModelError("zero stego variance at a non-wet pixel in perturbation mode");
      dry = false;
    }
    wet[i] = dry ? 0 : 1;
  }

  out.k.assign(n, 0);
  std::vector<double> latent(n, 0.0);
  std::vector<std::uint8_t> fell_back(n, 0);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (!is_green(i)) {
        m.set(i, kNonCarrier, center[i], out.developed_cover.samples[3 * i + cm], 0.0, 0, {1.0});
        continue;
      }
      int k = 0;
      if (wet[i]) {
        m.set(i, kWet, center[i], mean[i], sd[i], 0, {1.0});
      } else {
        CellLaw law = cell_law(center[i], mean[i], sd[i], q, K);
        Substream pick(seed, i, Stage::Embed);
        k = draw_change(law.probs, law.k_lo, pick.uniform());
        m.set(i, 0, center[i], mean[i], sd[i], law.k_lo, std::move(law.probs));
      }
      // (5) Latent developed value restricted to the selected cell.
      if (sd[i] > 0.0) {
        const int code = center[i] + k;
        Substream rng(seed, i, Stage::Latent);
        const TruncatedDraw d = sample_truncated_normal(rng, mean[i], sd[i], q.lower(code), q.upper(code));
        latent[i] = d.value;
        fell_back[i] = d.fallback ? 1 : 0;
      } else {
        latent[i] = mean[i];
        k = q.code(mean[i]) - center[i];
      }
      out.k[i] = static_cast<std::int16_t>(k);
      // (6) The green stego sample shared by all three output channels.
      noise.samples[i] = (latent[i] - mean[i]) / c_max;
    }
  });
  m.finish();

  // (7) Develop the stego mosaic; carrier samples keep their latent value.
  ImageD stego_mosaic = to_real(mosaic);
  for (std::size_t i = 0; i < n; ++i) stego_mosaic.samples[i] += noise.samples[i];
  out.developed_stego = apply_color_matrix(demosaic_bilinear(stego_mosaic, cfa), c);
  for (std::size_t i = 0; i < n; ++i) {
    if (is_green(i)) out.developed_stego.samples[3 * i + cm] = latent[i];
  }

  out.stego = Raster16(w, h, 3, 8);
  for (std::size_t j = 0; j < out.stego.samples.size(); ++j) {
    out.stego.samples[j] = static_cast<std::uint16_t>(q.code(out.developed_stego.samples[j]));
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.fallbacks += fell_back[i];
    if (is_green(i) && !wet[i]) ++out.carriers;
  }
  out.probs = std::move(m);
  out.payload = payload_entropy(out.probs);
  return out;
}

std::vector<std::int16_t> decode_color_changes(const Raster16& stego, const ChangeProbMap& m, CfaPattern cfa,
                                               int carrier_channel) {
  if (stego.channels != 3 || stego.width != m.width() || stego.height != m.height()) {
    throw UsageError("stego image does not match the probability map");
  }
  if (carrier_channel < 0 || carrier_channel > 2) throw UsageError("carrier channel must be 0, 1 or 2");
  std::vector<std::int16_t> k(m.size(), 0);
  for (int y = 0; y < stego.height; ++y) {
    for (int x = 0; x < stego.width; ++x) {
      if (cfa_channel(cfa, x, y) != kGreen) continue;
      const std::size_t i = static_cast<std::size_t>(y) * stego.width + x;
      k[i] = static_cast<std::int16_t>(stego.at(x, y, carrier_channel) - m.center(i));
    }
  }
  return k;
}

}  // namespace natstego
