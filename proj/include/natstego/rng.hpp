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

#include <array>
#include <cstdint>

namespace natstego {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

// Fixed stage identifiers so every randomized step draws from its own stream.
enum class Stage : std::uint32_t {
  Embed = 1,
  Latent = 2,
  FreeNoise = 3,
  Conditional = 4,
  Synth = 5,
  Cover = 6,
  Control = 7,
};

// Independent stream addressed by (seed, index, stage). Draws depend only on
// the address and the number of prior draws from the same stream, never on
// traversal order or thread layout.
class Substream {
 public:
  Substream(std::uint64_t seed, std::uint64_t index, Stage stage)
      : Substream(seed, index, static_cast<std::uint32_t>(stage)) {}
  Substream(std::uint64_t seed, std::uint64_t index, std::uint32_t stage)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        index_(index), stage_(stage) {}

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  double normal();

 private:
  void refill();

  PhiloxKey key_;
  std::uint64_t index_;
  std::uint32_t stage_;
  std::uint32_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace natstego
