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
#include <random>

#include "doctest.h"
#include "natstego/develop.hpp"
#include "natstego/errors.hpp"
#include "natstego/parallel.hpp"
#include "natstego/stats.hpp"

using namespace natstego;

namespace {

StegoParams iso_switch_params() {
  return diff_model({8.36e-5, 1.11e-6, ""}, {10.46e-5, 1.95e-6, ""}, 16);
}

Raster16 flat(int w, int h, std::uint16_t v) {
  Raster16 r(w, h, 1, 16);
  std::fill(r.samples.begin(), r.samples.end(), v);
  return r;
}

int mirror(int i, int n) { return i < 0 ? -i : i >= n ? 2 * n - 2 - i : i; }

// Direct 2D evaluation of the separable triangle with mirrored borders.
double direct_tent(const Raster16& r, int c, int X, int Y) {
  double s = 0.0;
  for (int dy = -(c - 1); dy <= c - 1; ++dy) {
    for (int dx = -(c - 1); dx <= c - 1; ++dx) {
      const double w = (c - std::abs(dx)) * (c - std::abs(dy)) / (double(c) * c * c * c);
      s += w * r.at(mirror(c * X + c / 2 + dx, r.width), mirror(c * Y + c / 2 + dy, r.height));
    }
  }
  return s;
}

}  // namespace

TEST_CASE("tent taps") {
  const auto t2 = tent_taps(2);
  REQUIRE(t2.size() == 3);
  CHECK(t2[0] == 0.25);
  CHECK(t2[1] == 0.5);
  CHECK(t2[2] == 0.25);
  for (int c = 1; c <= 6; ++c) {
    const auto t = tent_taps(c);
    CHECK(t.size() == static_cast<std::size_t>(2 * c - 1));
    double s = 0.0;
    for (double v : t) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(tent_center(3, 2) == 7);
  CHECK(tent_center(1, 5) == 7);
}

TEST_CASE("tent filter agrees with direct 2D evaluation") {
  const Raster16 r = uniform_cover(30, 20, 5);
  for (int c : {1, 2, 5}) {
    const ImageD f = tent_filter(r, c);
    for (int Y = 0; Y < f.height; ++Y) {
      for (int X = 0; X < f.width; ++X) CHECK(f.at(X, Y) == doctest::Approx(direct_tent(r, c, X, Y)).epsilon(1e-12));
    }
  }
  const ImageD fl = tent_filter(flat(12, 8, 777), 2);
  for (double v : fl.samples) CHECK(v == doctest::Approx(777.0).epsilon(1e-15));
  CHECK_THROWS_AS(tent_filter(flat(13, 8, 1), 2), UsageError);
}

TEST_CASE("tent embedding: lattices, consistency and border wetting") {
  const StegoParams p = iso_switch_params();
  const Raster16 cover = uniform_cover(64, 48, 10);
  const TentEmbedding t = downsample_tent_embed(cover, p, 2, 99);
  const int W = 32, H = 24;
  REQUIRE(t.stego.width == W);
  REQUIRE(t.stego.height == H);
  std::size_t total = 0;
  for (std::size_t n : t.lattice_pixels) total += n;
  CHECK(total == static_cast<std::size_t>(W * H));
  const Quantizer q{256};
  const auto taps = tent_taps(2);
  for (int Y = 0; Y < H; ++Y) {
    for (int X = 0; X < W; ++X) {
      const std::size_t i = static_cast<std::size_t>(Y) * W + X;
      CHECK(t.lattice[i] == 1 + (Y % 2) * 2 + (X % 2));
      CHECK(t.stego.samples[i] == t.probs.center(i) + t.k[i]);
      CHECK(q.code(t.developed_signal.samples[i]) == t.stego.samples[i]);
      // The developed signal is the tent-filtered photo-site stego field.
      double s = t.developed_cover.samples[i];
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = mirror(2 * X + 1 + dx, 64);
          const int yy = mirror(2 * Y + 1 + dy, 48);
          s += taps[dx + 1] * taps[dy + 1] * t.photo_stego.at(xx, yy);
        }
      }
      CHECK(t.developed_signal.samples[i] == doctest::Approx(s).epsilon(1e-9));
      const bool border = X == W - 1 || Y == H - 1;
      if (border) {
        CHECK(t.probs.wet(i));
        CHECK(t.k[i] == 0);
      }
    }
  }
  CHECK(t.border_pixels == static_cast<std::size_t>(W + H - 1));
  double bits = 0.0;
  for (double b : t.lattice_bits) bits += b;
  CHECK(bits == doctest::Approx(t.payload.bits));
}

TEST_CASE("tent embedding is independent of the thread count") {
  const StegoParams p = iso_switch_params();
  const Raster16 cover = uniform_cover(90, 60, 2);
  set_thread_count(1);
  const TentEmbedding a = downsample_tent_embed(cover, p, 3, 5);
  set_thread_count(8);
  const TentEmbedding b = downsample_tent_embed(cover, p, 3, 5);
  set_thread_count(1);
  CHECK(a.stego == b.stego);
  CHECK(a.photo_stego.samples == b.photo_stego.samples);
  CHECK(a.payload.bits == b.payload.bits);
}

TEST_CASE("lattice entropy ordering") {
  const StegoParams p = iso_switch_params();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const TentEmbedding t = downsample_tent_embed(uniform_cover(256, 256, seed), p, 2, seed);
    double h[4];
    for (int l = 0; l < 4; ++l) h[l] = t.lattice_bits[l] / static_cast<double>(t.lattice_pixels[l]);
    CHECK(h[3] <= h[1]);
    CHECK(h[3] <= h[2]);
    CHECK(h[1] <= h[0]);
    CHECK(h[2] <= h[0]);
  }
}

TEST_CASE("second-lattice developed values keep their unconditional variance") {
  // Marginal of an E2 value over the E1 draws: N(0, sum of squared weights
  // times the photo-site variance) for a flat cover.
  const StegoParams p = iso_switch_params();
  const double x = 30000.0;
  const double s2 = p.a_dd * x + p.b_dd;
  const TentEmbedding t = downsample_tent_embed(flat(1024, 1024, 30000), p, 2, 17);
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.lattice.size(); ++i) {
    if (t.lattice[i] != 2 || t.probs.wet(i)) continue;
    const double d = t.developed_signal.samples[i] - t.developed_cover.samples[i];
    acc += d * d;
    ++n;
  }
  const double expected = s2 * (6.0 / 16.0) * (6.0 / 16.0);
  CHECK(std::abs(acc / n - expected) / expected <= 0.02);
}

TEST_CASE("tent payload decreases with the factor") {
  const StegoParams p = iso_switch_params();
  const Raster16 cover = uniform_cover(240, 240, 3);
  double prev = payload_entropy(change_probs(cover, p)).bpp;
  for (int c = 2; c <= 5; ++c) {
    const double er = downsample_tent_embed(cover, p, c, 1).payload.bpp;
    CHECK(er < prev);
    prev = er;
  }
}
