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

// Cover whose samples follow x = y_max u^4 for uniform u: most pixels dark.
Raster16 dark_cover(int w, int h, unsigned seed) {
  Raster16 r(w, h, 1, 16);
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& s : r.samples) s = static_cast<std::uint16_t>(std::nearbyint(65535.0 * std::pow(u(gen), 4.0)));
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Gamma

TEST_CASE("gamma transfer and slope") {
  const double ym = 65535.0;
  CHECK(gamma_forward(ym, 2.2, ym) == doctest::Approx(ym));
  CHECK(gamma_forward(0.0, 2.2, ym) == 0.0);
  CHECK(gamma_forward(0.25 * ym, 2.0, ym) == doctest::Approx(0.5 * ym));
  CHECK(gamma_slope(0.25 * ym, 2.0, ym) == doctest::Approx(1.0));  // (1/4)^(-1/2) / 2
  CHECK(gamma_slope(0.3 * ym, 1.0, ym) == 1.0);
  // Central difference agrees with the analytic slope.
  for (double g : {0.5, 1.5, 2.5}) {
    const double x = 20000.0, h = 1e-3;
    const double fd = (gamma_forward(x + h, g, ym) - gamma_forward(x - h, g, ym)) / (2 * h);
    CHECK(gamma_slope(x, g, ym) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("gamma probabilities use the gamma-domain centre and scaled sigma") {
  const StegoParams p = iso_switch_params();
  Raster16 r(1, 1, 1, 16);
  r.samples = {20000};
  const ChangeProbMap m = gamma_probs(r, p, 2.2);
  const double g = gamma_forward(20000, 2.2, 65535);
  CHECK(m.mean(0) == g);
  CHECK(m.center(0) == Quantizer{256}.code(g));
  CHECK(m.sigma(0) == doctest::Approx(gamma_slope(20000, 2.2, 65535) * std::sqrt(p.a_dd * 20000 + p.b_dd)));
  CHECK_THROWS_AS(gamma_probs(r, p, 0.0), UsageError);
}

TEST_CASE("gamma 2 raises the payload of a dark-heavy cover") {
  const StegoParams p = iso_switch_params();
  const Raster16 cover = dark_cover(256, 256, 31);
  const double e1 = payload_entropy(gamma_probs(cover, p, 1.0)).bpp;
  const double e2 = payload_entropy(gamma_probs(cover, p, 2.0)).bpp;
  MESSAGE("E_r gamma=1: " << e1 << "  gamma=2: " << e2);
  CHECK(e2 > e1);
}

// ---------------------------------------------------------------------------
// Demosaicing

TEST_CASE("CFA layouts") {
  CHECK(cfa_channel(CfaPattern::RGGB, 0, 0) == kRed);
  CHECK(cfa_channel(CfaPattern::RGGB, 1, 0) == kGreen);
  CHECK(cfa_channel(CfaPattern::RGGB, 0, 1) == kGreen);
  CHECK(cfa_channel(CfaPattern::RGGB, 1, 1) == kBlue);
  CHECK(cfa_channel(CfaPattern::BGGR, 0, 0) == kBlue);
  CHECK(cfa_channel(CfaPattern::GRBG, 1, 0) == kRed);
  CHECK(cfa_channel(CfaPattern::GBRG, 0, 1) == kRed);
  CHECK(cfa_channel(CfaPattern::GBRG, 1, 1) == kGreen);
}

TEST_CASE("constant mosaics demosaic to constant colour") {
  const Raster16 out = demosaic_bilinear(flat(6, 4, 1234), CfaPattern::RGGB);
  CHECK(out.channels == 3);
  for (std::uint16_t s : out.samples) CHECK(s == 1234);
}

TEST_CASE("recorded samples pass through unchanged") {
  const Raster16 mosaic = uniform_cover(16, 10, 8);
  for (CfaPattern cfa : {CfaPattern::RGGB, CfaPattern::BGGR, CfaPattern::GRBG, CfaPattern::GBRG}) {
    const Raster16 out = demosaic_bilinear(mosaic, cfa);
    for (int y = 0; y < mosaic.height; ++y) {
      for (int x = 0; x < mosaic.width; ++x) CHECK(out.at(x, y, cfa_channel(cfa, x, y)) == mosaic.at(x, y));
    }
  }
}

TEST_CASE("4x4 bilinear stencil by hand") {
  ImageD m(4, 4, 1);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) m.at(x, y) = 10.0 * y + x;
  }
  const ImageD o = demosaic_bilinear(m, CfaPattern::RGGB);
  // Blue site (1,1): red from the diagonals, green from the cross.
  CHECK(o.at(1, 1, kRed) == doctest::Approx((0 + 2 + 20 + 22) / 4.0));
  CHECK(o.at(1, 1, kGreen) == doctest::Approx((1 + 10 + 12 + 21) / 4.0));
  CHECK(o.at(1, 1, kBlue) == 11.0);
  // Green site (2,1) on a blue row: blue left/right, red above/below.
  CHECK(o.at(2, 1, kBlue) == doctest::Approx((11 + 13) / 2.0));
  CHECK(o.at(2, 1, kRed) == doctest::Approx((2 + 22) / 2.0));
  // Red corner (0,0) with mirrored neighbours.
  CHECK(o.at(0, 0, kGreen) == doctest::Approx((1 + 10 + 1 + 10) / 4.0));
  CHECK(o.at(0, 0, kBlue) == 11.0);

  Raster16 r(4, 4, 1, 16);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) r.at(x, y) = static_cast<std::uint16_t>(10 * y + x);
  }
  const Raster16 ri = demosaic_bilinear(r, CfaPattern::RGGB);
  CHECK(ri.at(0, 0, kGreen) == 6);  // 5.5 rounds half to even
  CHECK(ri.at(1, 1, kGreen) == 11);
}

TEST_CASE("odd mosaics are rejected") {
  CHECK_THROWS_AS(demosaic_bilinear(flat(5, 4, 1), CfaPattern::RGGB), UsageError);
  CHECK_THROWS_AS(demosaic_bilinear(flat(4, 3, 1), CfaPattern::RGGB), UsageError);
}

// ---------------------------------------------------------------------------
// Resampling

TEST_CASE("sub-sampling") {
  const Raster16 r = uniform_cover(4, 4, 1);
  CHECK(downsample_sub(r, 1) == r);
  const Raster16 s = downsample_sub(r, 2);
  REQUIRE(s.width == 2);
  REQUIRE(s.height == 2);
  CHECK(s.at(0, 0) == r.at(0, 0));
  CHECK(s.at(1, 0) == r.at(2, 0));
  CHECK(s.at(0, 1) == r.at(0, 2));
  CHECK(s.at(1, 1) == r.at(2, 2));
  CHECK_THROWS_AS(downsample_sub(r, 5), UsageError);
}

TEST_CASE("sub-sampling keeps the per-pixel rate on a uniform cover") {
  const StegoParams p = iso_switch_params();
  const Raster16 cover = uniform_cover(512, 512, 21);
  const double base = payload_entropy(change_probs(cover, p)).bpp;
  for (int c = 2; c <= 5; ++c) {
    const double sub = payload_entropy(change_probs(downsample_sub(cover, c), p)).bpp;
    CHECK(std::abs(sub - base) / base <= 0.01);
  }
}

TEST_CASE("box means and probabilities") {
  Raster16 r(4, 2, 1, 16);
  r.samples = {1, 2, 3, 4, 5, 6, 7, 9};
  const ImageD m = downsample_box(r, 2);
  REQUIRE(m.width == 2);
  CHECK(m.at(0, 0) == 3.5);
  CHECK(m.at(1, 0) == 5.75);
  CHECK_THROWS_AS(downsample_box(r, 3), UsageError);

  const StegoParams p = iso_switch_params();
  const Raster16 cover = uniform_cover(60, 40, 4);
  const ChangeProbMap one = downsample_box_probs(cover, p, 1);
  const ChangeProbMap basic = change_probs(cover, p);
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(one.entropy(i) == basic.entropy(i));

  const ChangeProbMap two = downsample_box_probs(cover, p, 2);
  const ImageD mean = downsample_box(cover, 2);
  for (std::size_t i = 0; i < two.size(); ++i) {
    CHECK(two.sigma(i) == doctest::Approx(std::sqrt((p.a_dd * mean.samples[i] + p.b_dd) / 4.0)));
  }
}

TEST_CASE("box c=2 on a flat cover: developed stego variance is sigma^2 / 4") {
  // Monte-Carlo averaging oracle: i.i.d. photo-site noise, 2x2 block means.
  const double x = 30000.0;
  const StegoParams p = iso_switch_params();
  const double s2 = p.a_dd * x + p.b_dd;
  std::mt19937_64 gen(7);
  std::normal_distribution<double> z(0.0, std::sqrt(s2));
  const int blocks = 1000000;
  double acc = 0.0;
  for (int b = 0; b < blocks; ++b) {
    const double m = (z(gen) + z(gen) + z(gen) + z(gen)) / 4.0;
    acc += m * m;
  }
  const double empirical = acc / blocks;
  CHECK(std::abs(empirical - s2 / 4.0) / (s2 / 4.0) <= 0.03);

  // The map uses the same variance, and the simulated latent agrees with it.
  const Raster16 cover = flat(2000, 2000, 30000);
  const ChangeProbMap m = downsample_box_probs(cover, p, 2);
  CHECK(m.sigma(0) * m.sigma(0) == doctest::Approx(s2 / 4.0));
  const Simulation sim = simulate_embedding(m, 3);
  double v = 0.0;
  for (double l : sim.latent.samples) v += (l - x) * (l - x);
  v /= static_cast<double>(sim.latent.samples.size());
  CHECK(std::abs(v - s2 / 4.0) / (s2 / 4.0) <= 0.03);
}

TEST_CASE("upsampling keeps the payload and flags duplicated pixels") {
  const StegoParams p = iso_switch_params();
  const Raster16 cover = uniform_cover(30, 20, 9);
  const ChangeProbMap m = change_probs(cover, p);
  const Simulation sim = simulate_embedding(m, 4);
  const Upsampled up = upsample(sim.stego, m, 2);
  CHECK(up.stego.width == 60);
  CHECK(payload_entropy(up.probs).bits == payload_entropy(m).bits);
  CHECK(decode_upsampled(up) == sim.k);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 60; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * 60 + x;
      CHECK(up.probs.non_carrier(i) == (x % 2 != 0 || y % 2 != 0));
    }
  }
  CHECK(probs_to_costs(up.probs).rho[1] == CostMap::kWetCost);
}
