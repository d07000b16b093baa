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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "natstego/develop.hpp"
#include "natstego/raster.hpp"
#include "natstego/stego.hpp"

namespace natstego {

// Supported stage sequences (a trailing quantize8 is implied):
//   []                          basic 16 -> 8 bit quantization
//   [gamma g]
//   [downsample sub|box|tent c]
//   [demosaic cfa (, colormatrix C)]
// each optionally followed by [upsample c]. Box and tent covers whose
// dimensions are not multiples of c are cropped from the top-left corner.
enum class Route { Basic, Gamma, Sub, Box, Tent, Color };

struct RoutedPlan {
  Route route = Route::Basic;
  double gamma = 1.0;
  int factor = 1;
  CfaPattern cfa = CfaPattern::RGGB;
  Matrix3 matrix = kIdentity3;
  int upsample = 1;
};

RoutedPlan route_plan(const DevelopPlan& plan);
std::string_view to_string(Route r);

// Cover actually seen by the route (single channel, cropped when needed).
Raster16 route_input(const Raster16& cover, const RoutedPlan& r);

struct EmbedResult {
  Raster16 stego;               // 8-bit developed stego
  ChangeProbMap probs;          // law used for every developed pixel
  std::vector<std::int16_t> k;  // drawn change per map entry
  ImageD latent;                // continuous developed stego before quantization
  Payload payload;
  std::size_t fallbacks = 0;
  Route route = Route::Basic;
};

EmbedResult run_embedding(const Raster16& cover, const StegoParams& p, const DevelopPlan& plan, std::uint64_t seed,
                          int K = 0);

// Probability map of a plan. Tent and colour maps depend on the draws, so
// they need the seed; other routes ignore it.
ChangeProbMap plan_probs(const Raster16& cover, const StegoParams& p, const DevelopPlan& plan, int K = 0,
                         std::uint64_t seed = 0);
Payload plan_payload(const Raster16& cover, const StegoParams& p, const DevelopPlan& plan, int K = 0,
                     std::uint64_t seed = 0);

}  // namespace natstego
