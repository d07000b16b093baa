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

#include "doctest.h"
#include "natstego/develop.hpp"
#include "natstego/errors.hpp"
#include "natstego/stats.hpp"

using namespace natstego;

namespace {

StegoParams iso_switch_params() {
  return diff_model({8.36e-5, 1.11e-6, ""}, {10.46e-5, 1.95e-6, ""}, 16);
}

const Matrix3 kGeneric{1.2, 0.3, -0.1, -0.2, 1.4, -0.2, 0.0, -0.4, 1.4};

// Mid-range mosaic so that few developed samples saturate.
Raster16 mid_mosaic(int w, int h, std::uint64_t seed) {
  Raster16 r = uniform_cover(w, h, seed);
  for (auto& s : r.samples) s = static_cast<std::uint16_t>(8000 + s / 2);
  return r;
}

double correlation(const ColorEmbedding& e, CfaPattern cfa, int c1, int c2) {
  double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
  std::size_t n = 0;
  const int w = e.developed_stego.width;
  for (int y = 0; y < e.developed_stego.height; ++y) {
    for (int x = 0; x < w; ++x) {
      if (cfa_channel(cfa, x, y) != kGreen) continue;
      const double a = e.developed_stego.at(x, y, c1) - e.developed_cover.at(x, y, c1);
      const double b = e.developed_stego.at(x, y, c2) - e.developed_cover.at(x, y, c2);
      s1 += a;
      s2 += b;
      s11 += a * a;
      s22 += b * b;
      s12 += a * b;
      ++n;
    }
  }
  const double m1 = s1 / n, m2 = s2 / n;
  return (s12 / n - m1 * m2) / std::sqrt((s11 / n - m1 * m1) * (s22 / n - m2 * m2));
}

}  // namespace

TEST_CASE("identity matrix: green photo-sites carry the basic law") {
  const StegoParams p = iso_switch_params();
  const Raster16 mosaic = mid_mosaic(32, 24, 1);
  const ColorEmbedding e = embed_color_mosaic(mosaic, CfaPattern::RGGB, p, kIdentity3, 7);
  CHECK(e.carrier_channel == kGreen);
  const ChangeProbMap basic = change_probs(mosaic, p, 0);
  for (int y = 0; y < 24; ++y) {
    for (int x = 0; x < 32; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * 32 + x;
      if (cfa_channel(CfaPattern::RGGB, x, y) != kGreen) {
        CHECK(e.probs.non_carrier(i));
        continue;
      }
      CHECK(e.probs.sigma(i) == doctest::Approx(std::sqrt(p.a_dd * mosaic.samples[i] + p.b_dd)));
      CHECK(e.probs.center(i) == basic.center(i));
      for (int k = -3; k <= 3; ++k) CHECK(e.probs.prob(i, k) == doctest::Approx(basic.prob(i, k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("payload lives on the green half of the mosaic") {
  const ColorEmbedding e = embed_color_mosaic(mid_mosaic(40, 30, 2), CfaPattern::GBRG, iso_switch_params(), kGeneric, 3);
  std::size_t carriers = 0;
  for (std::size_t i = 0; i < e.probs.size(); ++i) carriers += !e.probs.non_carrier(i);
  CHECK(carriers == 40 * 30 / 2);
  CHECK(e.payload.bits > 0.0);
}

TEST_CASE("decoded symbols equal the drawn ones") {
  const StegoParams p = iso_switch_params();
  for (const Matrix3& c : {kIdentity3, kGeneric, Matrix3{0.9, -1.3, 0.2, 0.1, 0.8, 0.1, 0.3, 0.2, 1.1}}) {
    for (CfaPattern cfa : {CfaPattern::RGGB, CfaPattern::GRBG}) {
      const Raster16 mosaic = uniform_cover(48, 36, 5);
      const ColorEmbedding e = embed_color_mosaic(mosaic, cfa, p, c, 19);
      CHECK(decode_color_changes(e.stego, e.probs, cfa, e.carrier_channel) == e.k);
    }
  }
}

TEST_CASE("carrier channel follows the largest green coefficient") {
  const Matrix3 c{0.9, -1.3, 0.2, 0.1, 0.8, 0.1, 0.3, 0.2, 1.1};
  const ColorEmbedding e = embed_color_mosaic(mid_mosaic(8, 8, 1), CfaPattern::RGGB, iso_switch_params(), c, 1);
  CHECK(e.carrier_channel == kRed);
  const Matrix3 none{1, 1e-7, 0, 0, 0, 0, 0, -1e-7, 1};
  CHECK_THROWS_AS(embed_color_mosaic(mid_mosaic(8, 8, 1), CfaPattern::RGGB, iso_switch_params(), none, 1), ModelError);
}

TEST_CASE("colour components correlate with the sign of the green coefficients") {
  const StegoParams p = iso_switch_params();
  const Raster16 mosaic = mid_mosaic(448, 448, 9);
  const ColorEmbedding pos = embed_color_mosaic(mosaic, CfaPattern::RGGB, p, kGeneric, 21);
  CHECK(correlation(pos, CfaPattern::RGGB, kRed, kGreen) > 0.0);
  Matrix3 neg = kGeneric;
  neg[1] = -0.3;
  const ColorEmbedding n = embed_color_mosaic(mosaic, CfaPattern::RGGB, p, neg, 21);
  CHECK(correlation(n, CfaPattern::RGGB, kRed, kGreen) < 0.0);
}
