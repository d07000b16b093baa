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
#include <string>
#include <vector>

#include "natstego/raster.hpp"

namespace natstego {

// Heteroscedastic sensor noise of one acquisition setting on the normalized
// [0, 1] intensity scale: sigma^2(mu) = a * mu + b.
struct NoiseModel {
  double a = 0.0;
  double b = 0.0;
  std::string iso_label;

  double variance(double mu) const { return a * mu + b; }
  void validate() const;  // a > 0, b >= 0
};

// One intensity bin of photo-sites.
struct BinStats {
  long bin_index = 0;
  double mean = 0.0;      // normalized intensity
  double variance = 0.0;  // normalized intensity^2
  std::uint64_t population = 0;  // member samples (sites x frames)
  std::uint64_t sites = 0;
};

inline constexpr double kWhiteLevel = 65535.0;

// Groups photo-sites by their across-stack mean (bin = round(mean / delta),
// ties away from zero) and returns per-bin mean and unbiased noise variance.
// The variance pools each site's deviations from its own across-stack mean
// with N-1 degrees of freedom per site. Sites with any sample at 0 or 65535
// are skipped. Bins are returned in increasing index order.
std::vector<BinStats> bin_photosites(const std::vector<Raster16>& stack, double delta);

// Population-weighted least squares of variance on mean.
NoiseModel fit_noise_model(const std::vector<BinStats>& bins, const std::string& iso_label);

// Weighted mean of the regression residuals; zero up to rounding for an OLS fit.
double weighted_mean_residual(const std::vector<BinStats>& bins, const NoiseModel& m);

// Plain-text key/value form: a=..., b=..., iso=...
std::string format_noise_model(const NoiseModel& m);
NoiseModel parse_noise_model(const std::string& text);
NoiseModel load_noise_model(const std::filesystem::path& path);
void save_noise_model(const NoiseModel& m, const std::filesystem::path& path);

}  // namespace natstego
