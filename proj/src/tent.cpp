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
#include "natstego/gaussian.hpp"
#include "natstego/kernels.hpp"
#include "natstego/parallel.hpp"
#include "natstego/rng.hpp"

namespace natstego {

std::vector<double> tent_taps(int c) {
  if (c < 1) throw UsageError("tent factor must be at least 1");
  std::vector<double> t(static_cast<std::size_t>(2 * c - 1));
  const double norm = static_cast<double>(c) * c;
  for (int d = -(c - 1); d <= c - 1; ++d) t[static_cast<std::size_t>(d + c - 1)] = (c - std::abs(d)) / norm;
  return t;
}

namespace {

inline int reflect101(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * n - 2 - i;
  return i;
}

struct Tap {
  int index;
  double weight;
};

// Taps of developed index `idx` along an axis of n photo-sites, with mirrored
// indices merged. `padded` reports whether the footprint left the axis.
std::vector<Tap> axis_taps(int idx, int c, int n, const std::vector<double>& t, bool& padded) {
  std::vector<Tap> out;
  const int centre = tent_center(idx, c);
  for (int d = -(c - 1); d <= c - 1; ++d) {
    const int raw = centre + d;
    if (raw < 0 || raw >= n) padded = true;
    const int i = reflect101(raw, n);
    const double w = t[static_cast<std::size_t>(d + c - 1)];
    bool merged = false;
    for (Tap& tap : out) {
      if (tap.index == i) {
        tap.weight += w;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back({i, w});
  }
  return out;
}

void check_tent_input(const Raster16& cover, int c) {
  if (c < 1) throw UsageError("tent factor must be at least 1");
  if (cover.channels != 1) throw UsageError("tent downsampling expects a single-channel image");
  if (cover.width % c != 0 || cover.height % c != 0) {
    throw UsageError("image dimensions must be divisible by the tent factor");
  }
}

}  // namespace

ImageD tent_filter(const Raster16& cover, int c) {
  check_tent_input(cover, c);
  const int w = cover.width;
  const int h = cover.height;
  const int W = w / c;
  const int H = h / c;
  const std::vector<double> t = tent_taps(c);

  // Horizontal pass on every photo-site row.
  std::vector<double> horiz(static_cast<std::size_t>(W) * h);
  parallel_for(static_cast<std::size_t>(h), [&](std::size_t y0, std::size_t y1) {
    for (std::size_t y = y0; y < y1; ++y) {
      const auto row = cover.row(static_cast<int>(y));
      for (int X = 0; X < W; ++X) {
        double s = 0.0;
        for (int d = -(c - 1); d <= c - 1; ++d) {
          s += t[static_cast<std::size_t>(d + c - 1)] * row[static_cast<std::size_t>(reflect101(tent_center(X, c) + d, w))];
        }
        horiz[y * W + static_cast<std::size_t>(X)] = s;
      }
    }
  });

  // Vertical pass, one weighted row at a time.
  ImageD out(W, H, 1);
  const auto& kern = simd::kernels();
  parallel_for(static_cast<std::size_t>(H), [&](std::size_t Y0, std::size_t Y1) {
    for (std::size_t Y = Y0; Y < Y1; ++Y) {
      double* dst = out.samples.data() + Y * W;
      for (int d = -(c - 1); d <= c - 1; ++d) {
        const int y = reflect101(tent_center(static_cast<int>(Y), c) + d, h);
        kern.axpy(t[static_cast<std::size_t>(d + c - 1)], horiz.data() + static_cast<std::size_t>(y) * W,
                  static_cast<std::size_t>(W), dst);
      }
    }
  });
  return out;
}

TentEmbedding downsample_tent_embed(const Raster16& cover, const StegoParams& p, int c, std::uint64_t seed, int K) {
  check_tent_input(cover, c);
  if (cover.bit_depth != p.bit_depth_in) throw UsageError("cover bit depth does not match the stego parameters");
  if (K < 0) throw UsageError("support K must be non-negative (0 selects it automatically)");
  const int w = cover.width;
  const int h = cover.height;
  const int W = w / c;
  const int H = h / c;
  const std::size_t N = static_cast<std::size_t>(W) * H;
  const std::vector<double> t = tent_taps(c);
  const Quantizer q{p.quant_step()};

  TentEmbedding out;
  out.developed_cover = tent_filter(cover, c);
  out.developed_signal = out.developed_cover;
  out.photo_stego = ImageD(w, h, 1);
  out.stego = Raster16(W, H, 1, 8);
  out.k.assign(N, 0);
  out.lattice.assign(N, 0);

  std::vector<double> site_var(cover.samples.size());
  for (std::size_t s = 0; s < site_var.size(); ++s) site_var[s] = stego_sigma2(cover.samples[s], p);
  std::vector<std::uint8_t> drawn(cover.samples.size(), 0);

  std::vector<int> center(N);
  int min_code = Quantizer::kMaxCode;
  for (std::size_t i = 0; i < N; ++i) {
    center[i] = q.code(out.developed_cover.samples[i]);
    min_code = std::min(min_code, center[i]);
  }

  ChangeProbMap m(W, H, p.quant_step());
  std::vector<std::uint8_t> fell_back(N, 0), border(N, 0);

  auto process = [&](int X, int Y) {
    const std::size_t i = static_cast<std::size_t>(Y) * W + X;
    bool padded = false;
    const std::vector<Tap> tx = axis_taps(X, c, w, t, padded);
    const std::vector<Tap> ty = axis_taps(Y, c, h, t, padded);

    // Conditional mean from committed sites, variance from the free ones.
    double mu = 0.0;
    double var = 0.0;
    for (const Tap& a : ty) {
      for (const Tap& b : tx) {
        const std::size_t s = static_cast<std::size_t>(a.index) * w + b.index;
        const double wt = a.weight * b.weight;
        if (drawn[s]) {
          mu += wt * out.photo_stego.samples[s];
        } else {
          var += wt * wt * site_var[s];
        }
      }
    }
    const double mean = out.developed_cover.samples[i] + mu;
    const double sd = std::sqrt(var);

    bool wet = padded || center[i] <= 0 || center[i] >= Quantizer::kMaxCode || (p.wet_dark && center[i] == min_code);
    if (!wet && !(sd > 0.0)) {
      if (p.perturbation) throw ModelError("zero stego variance at a non-wet pixel in perturbation mode");
      wet = true;
    }
    border[i] = padded ? 1 : 0;

    int k = 0;
    if (wet) {
      m.set(i, kWet, center[i], mean, sd, 0, {1.0});
    } else {
      CellLaw law = cell_law(center[i], mean, sd, q, K);
      Substream pick(seed, i, Stage::Embed);
      k = draw_change(law.probs, law.k_lo, pick.uniform());
      m.set(i, 0, center[i], mean, sd, law.k_lo, std::move(law.probs));
    }

    // Developed value inside the selected cell; wet pixels stay in the cover cell.
    double value = mean;
    if (sd > 0.0) {
      const int code = center[i] + k;
      Substream rng(seed, i, Stage::Latent);
      const TruncatedDraw d = sample_truncated_normal(rng, mean, sd, q.lower(code), q.upper(code));
      value = d.value;
      fell_back[i] = d.fallback ? 1 : 0;
    } else {
      k = q.code(mean) - center[i];
    }
    out.k[i] = static_cast<std::int16_t>(k);
    out.developed_signal.samples[i] = value;
    out.stego.samples[i] = static_cast<std::uint16_t>(center[i] + k);
    if (!(sd > 0.0)) return;

    // Free sites drawn jointly Gaussian given their weighted sum.
    const double target = value - mean;
    double zsum = 0.0;
    for (const Tap& a : ty) {
      for (const Tap& b : tx) {
        const std::size_t s = static_cast<std::size_t>(a.index) * w + b.index;
        if (drawn[s]) continue;
        Substream rng(seed, s, Stage::Conditional);
        const double z = std::sqrt(site_var[s]) * rng.normal();
        out.photo_stego.samples[s] = z;
        zsum += a.weight * b.weight * z;
      }
    }
    const double gain = (target - zsum) / var;
    for (const Tap& a : ty) {
      for (const Tap& b : tx) {
        const std::size_t s = static_cast<std::size_t>(a.index) * w + b.index;
        if (drawn[s]) continue;
        out.photo_stego.samples[s] += site_var[s] * a.weight * b.weight * gain;
      }
    }
    for (const Tap& a : ty) {
      for (const Tap& b : tx) drawn[static_cast<std::size_t>(a.index) * w + b.index] = 1;
    }
  };

  // Lattices by (row parity, column parity): E1 (0,0), E2 (0,1), E3 (1,0), E4 (1,1).
  // Footprints within one lattice are disjoint, so its rows may run in parallel.
  for (int lat = 0; lat < 4; ++lat) {
    const int py = lat >> 1;
    const int px = lat & 1;
    const std::size_t rows = static_cast<std::size_t>(H > py ? (H - py + 1) / 2 : 0);
    parallel_for(rows, [&](std::size_t r0, std::size_t r1) {
      for (std::size_t r = r0; r < r1; ++r) {
        const int Y = static_cast<int>(2 * r) + py;
        for (int X = px; X < W; X += 2) {
          out.lattice[static_cast<std::size_t>(Y) * W + X] = static_cast<std::uint8_t>(lat + 1);
          process(X, Y);
        }
      }
    });
  }
  m.finish();

  for (std::size_t i = 0; i < N; ++i) {
    const int lat = out.lattice[i] - 1;
    out.lattice_bits[static_cast<std::size_t>(lat)] += m.entropy(i);
    ++out.lattice_pixels[static_cast<std::size_t>(lat)];
    out.fallbacks += fell_back[i];
    out.border_pixels += border[i];
  }
  // Sites never reached by a dry footprint get unconditional stego noise.
  for (std::size_t s = 0; s < drawn.size(); ++s) {
    if (drawn[s]) continue;
    Substream rng(seed, s, Stage::Conditional);
    out.photo_stego.samples[s] = std::sqrt(site_var[s]) * rng.normal();
  }
  out.probs = std::move(m);
  out.payload = payload_entropy(out.probs);
  return out;
}

}  // namespace natstego
