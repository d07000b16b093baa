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
#include "natstego/noise_model.hpp"
#include "natstego/raster.hpp"
#include "natstego/stego.hpp"

namespace natstego {

struct SyntheticStack {
  std::vector<Raster16> frames;
  std::size_t clamped = 0;  // samples saturated at 0 or 65535
};

// Frames with per-site samples N(mu, (a mu / y_max + b) y_max^2), rounded to
// 16 bits. Sample (frame f, site i) uses its own substream.
SyntheticStack synth_flat_stack(const Raster16& mu_field, const NoiseModel& model, int n, std::uint64_t seed);
SyntheticStack synth_flat_stack(int width, int height, double mu, const NoiseModel& model, int n,
                                std::uint64_t seed);

// Horizontal ramp from lo to hi (16-bit scale), the mean field used for
// estimator and mimicry checks.
Raster16 ramp_field(int width, int height, double lo, double hi);

// Embeds every frame of a stack and returns the continuous stego values
// rounded back to 16 bits (the raw-domain stego image).
std::vector<Raster16> embed_raw_stack(const std::vector<Raster16>& cover_stack, const StegoParams& p,
                                      std::uint64_t seed, std::size_t* fallbacks = nullptr);

// Control: adds constant-variance Gaussian noise (normalized variance var).
std::vector<Raster16> add_constant_noise(const std::vector<Raster16>& cover_stack, double var, std::uint64_t seed);

struct MimicryReport {
  NoiseModel cover_model;
  NoiseModel recovered_model;
  NoiseModel target_model;
  double rel_error_a = 0.0;
  double rel_error_b = 0.0;
  double tol_a = 0.03;
  double tol_b = 0.20;
  std::size_t bins_used = 0;
  bool pass = false;
};

MimicryReport mimicry_check(const std::vector<Raster16>& cover_stack, const std::vector<Raster16>& stego_stack,
                            const NoiseModel& target, double tol_a, double tol_b, double delta = 5e-5);

struct PayloadReport {
  std::string plan;           // canonical recipe, stages joined by "; "
  std::vector<double> rates;  // E_r per image, bpp
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double bin_width = 0.05;
  std::vector<std::size_t> histogram;  // counts of E_r in [j w, (j + 1) w)
};

PayloadReport make_payload_report(std::string plan, std::vector<double> rates, double bin_width = 0.05);

std::vector<PayloadReport> payload_sweep(const std::vector<Raster16>& covers, const StegoParams& p,
                                         const std::vector<DevelopPlan>& plans, std::uint64_t seed = 0, int K = 0);

Raster16 uniform_cover(int width, int height, std::uint64_t seed);

// Line-delimited key=value reports.
std::string to_text(const MimicryReport& r);
std::string to_text(const PayloadReport& r);
// Machine-readable summaries.
std::string to_json(const MimicryReport& r);
std::string to_json(const std::vector<PayloadReport>& reports);

}  // namespace natstego
