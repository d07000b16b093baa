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

#include <vector>

#include "natstego/rng.hpp"

namespace natstego {

// Standard normal CDF and upper tail, both accurate far into the tails.
double normal_cdf(double z);
double normal_sf(double z);
// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

// Pr[lo <= Y < hi] for Y ~ N(mean, sigma^2); lo/hi may be infinite.
// Evaluated on the tail side of the mean to avoid cancellation.
double interval_prob(double lo, double hi, double mean, double sigma);

// Shannon entropy in bits of a discrete distribution, 0 log 0 = 0.
double entropy_bits(const double* p, std::size_t n);

struct TruncatedDraw {
  double value = 0.0;
  int attempts = 0;       // rejection attempts used
  bool fallback = false;  // true when inverse-CDF sampling was needed
};

// Draws Y ~ N(mean, sigma^2) conditioned on lo <= Y < hi. Rejection from the
// unconstrained normal for up to `cap` attempts, then exact inverse-CDF
// sampling of the truncated law.
TruncatedDraw sample_truncated_normal(Substream& rng, double mean, double sigma, double lo, double hi,
                                      int cap = 10000);

}  // namespace natstego
