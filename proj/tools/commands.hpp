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
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace natstego::cli {

struct EstimateOpts {
  std::vector<std::string> stack;  // files or glob patterns
  double delta = 5e-5;
  std::string iso = "";
  std::string out;
};

struct DiffOpts {
  std::string model1;
  std::string model2;
  int bit_depth = 16;
  std::string out;
};

struct PerturbOpts {
  double a = 0.0;  // normalized slope
  int bit_depth = 16;
  std::string out;
};

struct EmbedOpts {
  std::string cover;
  std::string params;
  std::string plan = "quantize8";
  std::optional<std::uint64_t> seed;
  int K = 0;
  bool wet_dark = false;
  std::string out;
  std::string out_probs;
  std::string out_costs;
  std::string out_raw;
};

struct PayloadOpts {
  std::string cover;
  std::string params;
  std::string plan = "quantize8";
  std::optional<std::uint64_t> seed;
  int K = 0;
  bool wet_dark = false;
  std::string out;
  std::string json;
};

struct TileOpts {
  std::string input;
  int tile_w = 512;
  int tile_h = 512;
  int cols = 0;  // 0: as many as fit
  int rows = 0;
  std::string out_dir;
  std::string prefix = "tile";
};

struct MimicryOpts {
  std::vector<std::string> cover_stack;
  std::vector<std::string> stego_stack;
  std::string target;
  double tol_a = 0.03;
  double tol_b = 0.20;
  double delta = 5e-5;
  std::string json;
};

struct SweepOpts {
  std::vector<std::string> covers;
  std::string params;
  std::vector<std::string> plans;
  std::optional<std::uint64_t> seed;
  int K = 0;
  bool wet_dark = false;
  std::string out;
  std::string json;
};

// Each command returns its resolved configuration when print_only is set,
// otherwise runs and returns an empty object.
nlohmann::json run_estimate(const EstimateOpts& o, bool print_only);
nlohmann::json run_diff(const DiffOpts& o, bool print_only);
nlohmann::json run_perturb(const PerturbOpts& o, bool print_only);
nlohmann::json run_embed(const EmbedOpts& o, bool print_only);
nlohmann::json run_payload(const PayloadOpts& o, bool print_only);
nlohmann::json run_tile(const TileOpts& o, bool print_only);
nlohmann::json run_mimicry(const MimicryOpts& o, bool print_only);
nlohmann::json run_sweep(const SweepOpts& o, bool print_only);

}  // namespace natstego::cli
