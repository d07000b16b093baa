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

#include "natstego/pipeline.hpp"

#include <cmath>

#include "natstego/errors.hpp"

namespace natstego {

std::string_view to_string(Route r) {
  switch (r) {
    case Route::Basic: return "basic";
    case Route::Gamma: return "gamma";
    case Route::Sub: return "sub";
    case Route::Box: return "box";
    case Route::Tent: return "tent";
    case Route::Color: return "color";
  }
  return "?";
}

RoutedPlan route_plan(const DevelopPlan& plan) {
  plan.validate();
  std::vector<StageSpec> st(plan.stages);
  if (!st.empty() && std::holds_alternative<Quantize8Stage>(st.back())) st.pop_back();
  RoutedPlan r;
  if (!st.empty()) {
    if (const auto* u = std::get_if<UpsampleStage>(&st.back())) {
      r.upsample = u->factor;
      st.pop_back();
    }
  }
  auto unsupported = [&] { return UsageError("plan: unsupported stage sequence:\n" + plan.to_recipe()); };
  if (st.empty()) {
    r.route = Route::Basic;
  } else if (const auto* g = std::get_if<GammaStage>(&st[0])) {
    if (st.size() != 1) throw unsupported();
    r.route = Route::Gamma;
    r.gamma = g->gamma;
  } else if (const auto* d = std::get_if<DownsampleStage>(&st[0])) {
    if (st.size() != 1) throw unsupported();
    r.factor = d->factor;
    r.route = d->kind == DownsampleKind::Sub ? Route::Sub : d->kind == DownsampleKind::Box ? Route::Box : Route::Tent;
  } else if (const auto* m = std::get_if<DemosaicStage>(&st[0])) {
    r.route = Route::Color;
    r.cfa = m->cfa;
    if (st.size() == 2) {
      const auto* c = std::get_if<ColorMatrixStage>(&st[1]);
      if (!c) throw unsupported();
      r.matrix = c->c;
    } else if (st.size() != 1) {
      throw unsupported();
    }
  } else {
    throw unsupported();
  }
  if (r.route == Route::Color && r.upsample != 1) throw unsupported();
  return r;
}

Raster16 route_input(const Raster16& cover, const RoutedPlan& r) {
  if (cover.channels != 1) throw UsageError("embedding expects a single-channel cover or mosaic");
  if (r.route == Route::Box || r.route == Route::Tent) {
    const int w = cover.width / r.factor * r.factor;
    const int h = cover.height / r.factor * r.factor;
    if (w == 0 || h == 0) throw UsageError("image smaller than the downsampling factor");
    if (w != cover.width || h != cover.height) return crop(cover, w, h);
  }
  return cover;
}

namespace {

EmbedResult from_simulation(ChangeProbMap m, Simulation sim, Route route) {
  EmbedResult out;
  out.route = route;
  out.payload = payload_entropy(m);
  out.stego = std::move(sim.stego);
  out.k = std::move(sim.k);
  out.latent = std::move(sim.latent);
  out.fallbacks = sim.fallbacks;
  out.probs = std::move(m);
  return out;
}

void apply_upsample(EmbedResult& r, int c) {
  if (c == 1) return;
  Upsampled up = upsample(r.stego, r.probs, c);
  const int w = r.stego.width;
  ImageD latent(up.stego.width, up.stego.height, 1);
  std::vector<std::int16_t> k(up.probs.size(), 0);
  for (int y = 0; y < up.stego.height; ++y) {
    for (int x = 0; x < up.stego.width; ++x) {
      const std::size_t src = static_cast<std::size_t>(y / c) * w + x / c;
      latent.at(x, y) = r.latent.samples[src];
      if (x % c == 0 && y % c == 0) k[static_cast<std::size_t>(y) * up.stego.width + x] = r.k[src];
    }
  }
  r.stego = std::move(up.stego);
  r.probs = std::move(up.probs);
  r.latent = std::move(latent);
  r.k = std::move(k);
  r.payload = payload_entropy(r.probs);
}

}  // namespace

EmbedResult run_embedding(const Raster16& cover, const StegoParams& p, const DevelopPlan& plan, std::uint64_t seed,
                          int K) {
  p.validate();
  const RoutedPlan r = route_plan(plan);
  const Raster16 in = route_input(cover, r);
  EmbedResult out;
  switch (r.route) {
    case Route::Basic: {
      ChangeProbMap m = change_probs(in, p, K);
      Simulation sim = simulate_embedding(m, seed);
      out = from_simulation(std::move(m), std::move(sim), r.route);
      break;
    }
    case Route::Gamma: {
      ChangeProbMap m = gamma_probs(in, p, r.gamma, K);
      Simulation sim = simulate_embedding(m, seed);
      out = from_simulation(std::move(m), std::move(sim), r.route);
      break;
    }
    case Route::Sub: {
      ChangeProbMap m = change_probs(downsample_sub(in, r.factor), p, K);
      Simulation sim = simulate_embedding(m, seed);
      out = from_simulation(std::move(m), std::move(sim), r.route);
      break;
    }
    case Route::Box: {
      ChangeProbMap m = downsample_box_probs(in, p, r.factor, K);
      Simulation sim = simulate_embedding(m, seed);
      out = from_simulation(std::move(m), std::move(sim), r.route);
      break;
    }
    case Route::Tent: {
      TentEmbedding t = downsample_tent_embed(in, p, r.factor, seed, K);
      out.route = r.route;
      out.stego = std::move(t.stego);
      out.k = std::move(t.k);
      out.latent = std::move(t.developed_signal);
      out.payload = t.payload;
      out.fallbacks = t.fallbacks;
      out.probs = std::move(t.probs);
      break;
    }
    case Route::Color: {
      ColorEmbedding c = embed_color_mosaic(in, r.cfa, p, r.matrix, seed, K);
      out.route = r.route;
      out.stego = std::move(c.stego);
      out.k = std::move(c.k);
      out.latent = std::move(c.developed_stego);
      out.payload = c.payload;
      out.fallbacks = c.fallbacks;
      out.probs = std::move(c.probs);
      break;
    }
  }
  apply_upsample(out, r.upsample);
  return out;
}

ChangeProbMap plan_probs(const Raster16& cover, const StegoParams& p, const DevelopPlan& plan, int K,
                         std::uint64_t seed) {
  p.validate();
  const RoutedPlan r = route_plan(plan);
  const Raster16 in = route_input(cover, r);
  ChangeProbMap m;
  switch (r.route) {
    case Route::Basic: m = change_probs(in, p, K); break;
    case Route::Gamma: m = gamma_probs(in, p, r.gamma, K); break;
    case Route::Sub: m = change_probs(downsample_sub(in, r.factor), p, K); break;
    case Route::Box: m = downsample_box_probs(in, p, r.factor, K); break;
    case Route::Tent: m = downsample_tent_embed(in, p, r.factor, seed, K).probs; break;
    case Route::Color: m = embed_color_mosaic(in, r.cfa, p, r.matrix, seed, K).probs; break;
  }
  if (r.upsample == 1 || r.route == Route::Color) return m;
  // The upsampled map only depends on the source map; stego codes are not needed.
  Raster16 codes(m.width(), m.height(), 1, 8);
  for (std::size_t i = 0; i < m.size(); ++i) codes.samples[i] = static_cast<std::uint16_t>(m.center(i));
  return upsample(codes, m, r.upsample).probs;
}

Payload plan_payload(const Raster16& cover, const StegoParams& p, const DevelopPlan& plan, int K,
                     std::uint64_t seed) {
  return payload_entropy(plan_probs(cover, p, plan, K, seed));
}

}  // namespace natstego
