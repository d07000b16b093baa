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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "natstego/noise_model.hpp"
#include "natstego/raster.hpp"

namespace natstego {

// Stego-signal variance model on the input sample scale:
// sigma_S^2(x) = a_dd * x + b_dd.
struct StegoParams {
  double a_dd = 0.0;
  double b_dd = 0.0;
  int bit_depth_in = 16;
  bool perturbation = false;
  bool wet_dark = false;

  // Input samples per 8-bit output code: 256 for 16-bit covers, 1 for 8-bit.
  int quant_step() const { return 1 << (bit_depth_in - 8); }
  double input_max() const { return std::ldexp(1.0, bit_depth_in) - 1.0; }
  void validate() const;
};

std::string format_stego_params(const StegoParams& p);
StegoParams parse_stego_params(const std::string& text);
StegoParams load_stego_params(const std::filesystem::path& path);
void save_stego_params(const StegoParams& p, const std::filesystem::path& path);

// Variance difference between two settings scaled to an N_b-bit sample
// range: a'' = (a2 - a1)(2^Nb - 1), b'' = (b2 - b1)(2^Nb - 1)^2.
StegoParams diff_model(const NoiseModel& from, const NoiseModel& to, int bit_depth);

// Cover-source perturbation: b'' = 0, a'' = a_norm (2^Nb - 1).
StegoParams perturbation_params(double a_norm, int bit_depth);

double stego_sigma2(double x, const StegoParams& p);

// 8-bit export quantizer. Codes are round(y / step) with ties to even,
// saturated to [0, 255]; the end cells extend to infinity.
struct Quantizer {
  int step = 256;

  static constexpr int kMaxCode = 255;

  int code(double y) const {
    const double q = std::nearbyint(y / step);
    if (!(q > 0.0)) return 0;
    if (q >= kMaxCode) return kMaxCode;
    return static_cast<int>(q);
  }
  double lower(int q) const {
    return q <= 0 ? -std::numeric_limits<double>::infinity() : (q - 0.5) * step;
  }
  double upper(int q) const {
    return q >= kMaxCode ? std::numeric_limits<double>::infinity() : (q + 0.5) * step;
  }
};

// Per-pixel flags of a ChangeProbMap.
enum PixelFlag : std::uint8_t {
  kWet = 1,           // modification forbidden, pi(0) = 1
  kNonCarrier = 2,  // carries no message (interpolated or noise-only)
};

// Per-pixel discrete law of the developed stego change k = code(stego) - center.
// Each pixel stores a contiguous window [k_lo, k_lo + len) of probabilities;
// mass outside the window is folded into its end cells.
class ChangeProbMap {
 public:
  ChangeProbMap() = default;
  ChangeProbMap(int width, int height, int quant_step);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return flags_.size(); }
  int quant_step() const { return step_; }
  // Largest |k| with a stored probability.
  int support() const { return support_; }

  bool wet(std::size_t i) const { return flags_[i] & kWet; }
  bool non_carrier(std::size_t i) const { return flags_[i] & kNonCarrier; }
  std::uint8_t flags(std::size_t i) const { return flags_[i]; }
  int center(std::size_t i) const { return center_[i]; }
  double mean(std::size_t i) const { return mean_[i]; }
  double sigma(std::size_t i) const { return sigma_[i]; }
  int k_lo(std::size_t i) const { return k_lo_[i]; }
  std::span<const double> probs(std::size_t i) const {
    return {probs_.data() + offsets_[i], static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
  }
  double prob(std::size_t i, int k) const;
  double entropy(std::size_t i) const;

  // Random-access construction. set() may be called concurrently for distinct
  // pixels; finish() compacts the storage and must be called once after.
  void set(std::size_t i, std::uint8_t flags, int center, double mean, double sigma, int k_lo,
           std::vector<double> probs);
  void finish();

  // Copy of a map from its raw parts (deserialization).
  static ChangeProbMap from_parts(int width, int height, int quant_step, std::vector<std::uint8_t> flags,
                                  std::vector<std::int16_t> center, std::vector<double> mean,
                                  std::vector<double> sigma, std::vector<std::int16_t> k_lo,
                                  std::vector<std::uint64_t> offsets, std::vector<double> probs);

 private:
  int width_ = 0;
  int height_ = 0;
  int step_ = 256;
  int support_ = 0;
  std::vector<std::uint8_t> flags_;
  std::vector<std::int16_t> center_;
  std::vector<double> mean_;
  std::vector<double> sigma_;
  std::vector<std::int16_t> k_lo_;
  std::vector<std::uint64_t> offsets_;
  std::vector<double> probs_;
  std::vector<std::vector<double>> pending_;
};

// Discrete law of code(Y) - center for Y ~ N(mean, sigma^2) under the 8-bit
// quantizer. The window covers mean +- 6 sigma plus one cell, intersected
// with the code range and with center +- kcap (kcap <= 0: uncapped).
struct CellLaw {
  int k_lo = 0;
  std::vector<double> probs;
};
CellLaw cell_law(int center, double mean, double sigma, const Quantizer& q, int kcap);

// Per-pixel Gaussian model feeding assemble_prob_map.
struct CellModel {
  int center = 0;
  double mean = 0.0;
  double sigma = 0.0;
  bool wet = false;
};

// Builds a map from independent per-pixel models, applying the wet rules:
// codes 0 and 255 are wet; with wet_dark the image's minimum code is wet too;
// zero variance is wet (an error in perturbation mode). K <= 0 selects
// ceil(6 sigma_max / step) + 1 over non-wet pixels.
ChangeProbMap assemble_prob_map(int width, int height, int quant_step, int K, bool wet_dark,
                                bool perturbation, const std::function<CellModel(std::size_t)>& model);

ChangeProbMap change_probs(const Raster16& cover, const StegoParams& p, int K = 0);

struct Payload {
  double bits = 0.0;
  double bpp = 0.0;
  std::size_t pixels = 0;
};

// H = -sum pi log2 pi over all pixels; bpp divides by width * height.
Payload payload_entropy(const ChangeProbMap& m);

struct CostMap {
  int width = 0;
  int height = 0;
  std::vector<double> rho;  // +infinity marks wet pixels

  static constexpr double kWetCost = std::numeric_limits<double>::infinity();
};

// Binary flipping-lemma costs from the change/no-change collapse:
// p = 1 - pi(0), p~ = max(p, 1 - p), rho = ln(p~ / (1 - p~)).
CostMap probs_to_costs(const ChangeProbMap& m);
double flip_cost(double change_prob);

struct Simulation {
  Raster16 stego;              // 8-bit developed stego
  std::vector<std::int16_t> k;  // drawn change per pixel
  ImageD latent;               // continuous stego value consistent with k
  std::size_t fallbacks = 0;   // truncated draws that fell back to inverse CDF
};

// Draws k ~ pi per pixel, then a continuous stego value from the Gaussian
// restricted to the selected cell. Every pixel uses its own counter-based
// substream, so the result depends only on (map, seed).
Simulation simulate_embedding(const ChangeProbMap& m, std::uint64_t seed);

// Convenience overload checking the map against its cover.
Simulation simulate_embedding(const Raster16& cover, const ChangeProbMap& m, std::uint64_t seed);

// Draws k from a pixel's law with a single uniform.
int draw_change(std::span<const double> probs, int k_lo, double u);

}  // namespace natstego
