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

#include "natstego/stats.hpp"

#include <algorithm>
#include <cmath>

#include "natstego/errors.hpp"
#include "natstego/parallel.hpp"
#include "natstego/pipeline.hpp"
#include "natstego/rng.hpp"

namespace natstego {

namespace {

constexpr std::uint64_t kFrameStride = 0x9E3779B97F4A7C15ull;

std::uint32_t frame_stage(Stage s, int frame) {
  return static_cast<std::uint32_t>(s) | (static_cast<std::uint32_t>(frame) << 8);
}

std::uint16_t round_clamp(double v, std::size_t& clamped) {
  const double r = std::nearbyint(v);
  if (r <= 0.0) {
    ++clamped;
    return 0;
  }
  if (r >= kWhiteLevel) {
    ++clamped;
    return static_cast<std::uint16_t>(kWhiteLevel);
  }
  return static_cast<std::uint16_t>(r);
}

double relative_error(double got, double want) {
  return want != 0.0 ? std::abs(got - want) / std::abs(want) : std::abs(got - want);
}

}  // namespace

SyntheticStack synth_flat_stack(const Raster16& mu_field, const NoiseModel& model, int n, std::uint64_t seed) {
  if (n < 2) throw UsageError("a synthetic stack needs at least two frames");
  if (mu_field.channels != 1) throw UsageError("mean field must be single-channel");
  if (model.a < 0.0 || model.b < 0.0) throw ModelError("noise model yields negative variance");
  const std::size_t sites = mu_field.samples.size();
  std::vector<double> sd(sites);
  for (std::size_t i = 0; i < sites; ++i) {
    const double mu = mu_field.samples[i];
    sd[i] = std::sqrt(model.a * (mu / kWhiteLevel) + model.b) * kWhiteLevel;
  }
  SyntheticStack out;
  std::vector<std::size_t> clamped(static_cast<std::size_t>(n), 0);
  for (int f = 0; f < n; ++f) {
    Raster16 frame(mu_field.width, mu_field.height, 1, 16);
    std::vector<std::uint8_t> clip(sites, 0);
    parallel_for(sites, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        Substream rng(seed, i, frame_stage(Stage::Synth, f));
        std::size_t c = 0;
        frame.samples[i] = round_clamp(mu_field.samples[i] + sd[i] * rng.normal(), c);
        clip[i] = static_cast<std::uint8_t>(c);
      }
    });
    for (std::uint8_t c : clip) out.clamped += c;
    out.frames.push_back(std::move(frame));
  }
  return out;
}

SyntheticStack synth_flat_stack(int width, int height, double mu, const NoiseModel& model, int n,
                                std::uint64_t seed) {
  if (!(mu >= 0.0 && mu <= kWhiteLevel)) throw UsageError("mean outside the 16-bit range");
  Raster16 field(width, height, 1, 16);
  std::fill(field.samples.begin(), field.samples.end(), static_cast<std::uint16_t>(std::nearbyint(mu)));
  return synth_flat_stack(field, model, n, seed);
}

Raster16 ramp_field(int width, int height, double lo, double hi) {
  if (!(lo >= 0.0 && hi <= kWhiteLevel && lo <= hi)) throw UsageError("ramp limits outside the 16-bit range");
  Raster16 field(width, height, 1, 16);
  for (int x = 0; x < width; ++x) {
    const double t = width > 1 ? static_cast<double>(x) / (width - 1) : 0.0;
    const auto v = static_cast<std::uint16_t>(std::nearbyint(lo + (hi - lo) * t));
    for (int y = 0; y < height; ++y) field.at(x, y) = v;
  }
  return field;
}

std::vector<Raster16> embed_raw_stack(const std::vector<Raster16>& cover_stack, const StegoParams& p,
                                      std::uint64_t seed, std::size_t* fallbacks) {
  std::vector<Raster16> out;
  std::size_t clamped = 0;
  std::size_t fb = 0;
  for (std::size_t f = 0; f < cover_stack.size(); ++f) {
    const ChangeProbMap m = change_probs(cover_stack[f], p);
    const Simulation sim = simulate_embedding(m, seed + f * kFrameStride);
    fb += sim.fallbacks;
    Raster16 raw(m.width(), m.height(), 1, 16);
    for (std::size_t i = 0; i < raw.samples.size(); ++i) raw.samples[i] = round_clamp(sim.latent.samples[i], clamped);
    out.push_back(std::move(raw));
  }
  if (fallbacks) *fallbacks = fb;
  return out;
}

std::vector<Raster16> add_constant_noise(const std::vector<Raster16>& cover_stack, double var, std::uint64_t seed) {
  if (!(var >= 0.0)) throw ModelError("noise variance must be non-negative");
  const double sd = std::sqrt(var) * kWhiteLevel;
  std::vector<Raster16> out;
  std::size_t clamped = 0;
  for (std::size_t f = 0; f < cover_stack.size(); ++f) {
    Raster16 frame = cover_stack[f];
    for (std::size_t i = 0; i < frame.samples.size(); ++i) {
      Substream rng(seed, i, frame_stage(Stage::Control, static_cast<int>(f)));
      frame.samples[i] = round_clamp(frame.samples[i] + sd * rng.normal(), clamped);
    }
    out.push_back(std::move(frame));
  }
  return out;
}

MimicryReport mimicry_check(const std::vector<Raster16>& cover_stack, const std::vector<Raster16>& stego_stack,
                            const NoiseModel& target, double tol_a, double tol_b, double delta) {
  if (cover_stack.size() != stego_stack.size()) throw UsageError("cover and stego stacks differ in length");
  for (std::size_t f = 0; f < cover_stack.size(); ++f) {
    if (cover_stack[f].width != stego_stack[f].width || cover_stack[f].height != stego_stack[f].height) {
      throw UsageError("cover and stego stacks are not registered");
    }
  }
  MimicryReport r;
  r.target_model = target;
  r.tol_a = tol_a;
  r.tol_b = tol_b;
  r.cover_model = fit_noise_model(bin_photosites(cover_stack, delta), "cover");
  const std::vector<BinStats> bins = bin_photosites(stego_stack, delta);
  r.recovered_model = fit_noise_model(bins, "stego");
  r.bins_used = static_cast<std::size_t>(
      std::count_if(bins.begin(), bins.end(), [](const BinStats& b) { return b.population >= 2; }));
  r.rel_error_a = relative_error(r.recovered_model.a, target.a);
  r.rel_error_b = relative_error(r.recovered_model.b, target.b);
  r.pass = r.rel_error_a <= tol_a && r.rel_error_b <= tol_b;
  return r;
}

PayloadReport make_payload_report(std::string plan, std::vector<double> rates, double bin_width) {
  if (!(bin_width > 0.0)) throw UsageError("histogram bin width must be positive");
  PayloadReport r;
  r.plan = std::move(plan);
  r.rates = std::move(rates);
  r.bin_width = bin_width;
  if (r.rates.empty()) return r;
  double sum = 0.0;
  for (double v : r.rates) sum += v;
  r.mean = sum / static_cast<double>(r.rates.size());
  r.min = *std::min_element(r.rates.begin(), r.rates.end());
  r.max = *std::max_element(r.rates.begin(), r.rates.end());
  r.histogram.assign(static_cast<std::size_t>(std::floor(r.max / bin_width)) + 1, 0);
  for (double v : r.rates) ++r.histogram[static_cast<std::size_t>(std::floor(v / bin_width))];
  return r;
}

std::vector<PayloadReport> payload_sweep(const std::vector<Raster16>& covers, const StegoParams& p,
                                         const std::vector<DevelopPlan>& plans, std::uint64_t seed, int K) {
  std::vector<PayloadReport> out;
  for (const DevelopPlan& plan : plans) {
    std::vector<double> rates;
    for (const Raster16& cover : covers) rates.push_back(plan_payload(cover, p, plan, K, seed).bpp);
    std::string recipe = plan.to_recipe();
    while (!recipe.empty() && recipe.back() == '\n') recipe.pop_back();
    std::replace(recipe.begin(), recipe.end(), '\n', ';');
    std::string joined;
    for (char ch : recipe) {
      joined.push_back(ch);
      if (ch == ';') joined.push_back(' ');
    }
    out.push_back(make_payload_report(std::move(joined), std::move(rates)));
  }
  return out;
}

Raster16 uniform_cover(int width, int height, std::uint64_t seed) {
  Raster16 r(width, height, 1, 16);
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    Substream rng(seed, i, Stage::Cover);
    r.samples[i] = static_cast<std::uint16_t>(rng.next_u32() & 0xFFFFu);
  }
  return r;
}

}  // namespace natstego
