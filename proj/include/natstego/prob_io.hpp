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
#include <filesystem>
#include <vector>

#include "natstego/stego.hpp"

namespace natstego {

// Flat little-endian interchange containers for external coders.
//
// Probability map ("NSPM"):
//   char[4] magic "NSPM" | u32 version (1) | u32 width | u32 height | u32 K |
//   u32 quant_step | f64 pi[w*h][2K+1] for k = -K..K, row-major pixels |
//   u8 flags[w*h] | i16 center[w*h] | f64 mean[w*h] | f64 sigma[w*h]
// Cost map ("NSCM"):
//   char[4] magic "NSCM" | u32 version (1) | u32 width | u32 height |
//   f64 rho[w*h] (+inf marks wet pixels)
std::vector<std::uint8_t> encode_prob_map(const ChangeProbMap& m);
ChangeProbMap decode_prob_map(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_cost_map(const CostMap& c);
CostMap decode_cost_map(const std::vector<std::uint8_t>& bytes);

void save_prob_map(const ChangeProbMap& m, const std::filesystem::path& path);
ChangeProbMap load_prob_map(const std::filesystem::path& path);
void save_cost_map(const CostMap& c, const std::filesystem::path& path);
CostMap load_cost_map(const std::filesystem::path& path);

}  // namespace natstego
