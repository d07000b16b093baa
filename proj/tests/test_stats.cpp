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
#include "json.hpp"
#include "natstego/errors.hpp"
#include "natstego/stats.hpp"

using namespace natstego;

TEST_CASE("synthetic flat stack matches its generator") {
  const NoiseModel m{8e-5, 1e-6, ""};
  const SyntheticStack s = synth_flat_stack(1000, 1000, 0.5 * 65535, m, 2, 3);
  REQUIRE(s.frames.size() == 2);
  CHECK(s.clamped == 0);
  double sum = 0.0, sumsq = 0.0;
  for (std::uint16_t v : s.frames[0].samples) {
    sum += v;
    sumsq += static_cast<double>(v) * v;
  }
  const double n = 1e6;
  const double var = sumsq / n - (sum / n) * (sum / n);
  const double model = (m.a * 0.5 + m.b) * 65535.0 * 65535.0;
  CHECK(std::abs(var - model) / model <= 0.01);
  CHECK(sum / n == doctest::Approx(std::nearbyint(0.5 * 65535)).epsilon(1e-4));
}

TEST_CASE("zero-noise stacks reproduce the mean field") {
  const Raster16 mu = ramp_field(50, 4, 100, 60000);
  const SyntheticStack s = synth_flat_stack(mu, {0.0, 0.0, ""}, 3, 1);
  for (const Raster16& f : s.frames) CHECK(f == mu);
  CHECK_THROWS_AS(synth_flat_stack(mu, {1e-4, 0.0, ""}, 1, 1), UsageError);
  CHECK_THROWS_AS(synth_flat_stack(mu, {-1e-4, 0.0, ""}, 2, 1), ModelError);
}

TEST_CASE("seeds change frames but not their moments") {
  const NoiseModel m{8e-5, 1e-6, ""};
  const auto a = synth_flat_stack(300, 300, 20000, m, 2, 1);
  const auto b = synth_flat_stack(300, 300, 20000, m, 2, 2);
  CHECK_FALSE(a.frames[0] == b.frames[0]);
  CHECK_FALSE(a.frames[0] == a.frames[1]);
  auto var = [](const Raster16& r) {
    double s = 0, q = 0;
    for (auto v : r.samples) {
      s += v;
      q += double(v) * v;
    }
    const double n = double(r.samples.size());
    return q / n - (s / n) * (s / n);
  };
  // Relative standard error of a 9e4-sample variance is about 0.5%.
  CHECK(std::abs(var(a.frames[0]) - var(b.frames[0])) / var(a.frames[0]) <= 0.03);
}

TEST_CASE("ramp field and uniform cover") {
  const Raster16 r = ramp_field(5, 2, 0, 400);
  CHECK(r.at(0, 1) == 0);
  CHECK(r.at(2, 0) == 200);
  CHECK(r.at(4, 1) == 400);
  const Raster16 u = uniform_cover(64, 64, 1);
  CHECK(u == uniform_cover(64, 64, 1));
  CHECK_FALSE(u == uniform_cover(64, 64, 2));
}

TEST_CASE("null embedding: cover stack re-estimates its own model") {
  const NoiseModel m1{8.36e-5, 1.11e-6, "1000"}, m2{10.46e-5, 1.95e-6, "1250"};
  const auto stack = synth_flat_stack(ramp_field(256, 256, 0.05 * 65535, 0.95 * 65535), m1, 8, 4).frames;
  const MimicryReport self = mimicry_check(stack, stack, m1, 0.03, 0.2);
  CHECK(self.recovered_model.a == self.cover_model.a);
  CHECK(self.rel_error_a <= 0.05);
  const MimicryReport other = mimicry_check(stack, stack, m2, 0.03, 0.2);
  CHECK_FALSE(other.pass);
  CHECK(other.bins_used > 100);
}

TEST_CASE("payload report statistics and serializations") {
  const PayloadReport r = make_payload_report("quantize8", {1.25, 1.19, 0.9, 1.31}, 0.1);
  CHECK(r.mean == doctest::Approx(1.1625));
  CHECK(r.min == 0.9);
  CHECK(r.max == 1.31);
  REQUIRE(r.histogram.size() == 14);
  CHECK(r.histogram[9] == 1);
  CHECK(r.histogram[11] == 1);
  CHECK(r.histogram[12] == 1);
  CHECK(r.histogram[13] == 1);
  const std::string text = to_text(r);
  CHECK(text.find("mean_bpp=1.1625\n") != std::string::npos);
  const auto j = nlohmann::json::parse(to_json(std::vector<PayloadReport>{r}));
  CHECK(j["payload_reports"][0]["plan"] == "quantize8");
  CHECK(j["payload_reports"][0]["rates_bpp"].size() == 4);

  MimicryReport mr;
  mr.pass = true;
  const auto mj = nlohmann::json::parse(to_json(mr));
  CHECK(mj["verdict"] == "pass");
  CHECK(to_text(mr).find("verdict=pass") != std::string::npos);
}

TEST_CASE("payload sweep over covers and plans") {
  const StegoParams p = diff_model({8.36e-5, 1.11e-6, ""}, {10.46e-5, 1.95e-6, ""}, 16);
  const std::vector<Raster16> covers{uniform_cover(100, 100, 1), uniform_cover(100, 100, 2)};
  const auto reps = payload_sweep(covers, p, {parse_plan("quantize8"), parse_plan("downsample box 2")});
  REQUIRE(reps.size() == 2);
  CHECK(reps[0].plan == "quantize8");
  CHECK(reps[1].plan == "downsample box 2; quantize8");
  CHECK(reps[0].rates.size() == 2);
  CHECK(reps[1].mean < reps[0].mean);
  for (const auto& r : reps) {
    for (double e : r.rates) CHECK(e >= 0.0);
  }
}
