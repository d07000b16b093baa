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

#include "natstego/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "natstego/errors.hpp"

namespace natstego {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double normal_sf(double z) { return 0.5 * std::erfc(z * kInvSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw UsageError("normal_quantile expects p in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double interval_prob(double lo, double hi, double mean, double sigma) {
  if (!(hi > lo)) return 0.0;
  if (sigma <= 0.0) return (mean >= lo && mean < hi) ? 1.0 : 0.0;
  const double zl = (lo - mean) / sigma;
  const double zh = (hi - mean) / sigma;
  double p;
  if (zl >= 0.0) {
    p = normal_sf(zl) - normal_sf(zh);
  } else if (zh <= 0.0) {
    p = normal_cdf(zh) - normal_cdf(zl);
  } else {
    p = 1.0 - normal_cdf(zl) - normal_sf(zh);
  }
  return std::max(p, 0.0);
}

double entropy_bits(const double* p, std::size_t n) {
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
  }
  return h;
}

namespace {

// Inverse-CDF draw of Z ~ N(0,1) restricted to [a, b). Works on the upper
// tail when the interval lies above zero, mirrored below it.
double truncated_standard_inverse(double a, double b, double u) {
  if (a >= 0.0) {
    const double qa = normal_sf(a);
    const double qb = std::isinf(b) ? 0.0 : normal_sf(b);
    double q = qa - u * (qa - qb);
    if (!(q > 0.0)) q = std::numeric_limits<double>::min();
    const double z = std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * std::min(q, 0.5));
    return std::min(std::max(z, a), b);
  }
  if (b <= 0.0) {
    return -truncated_standard_inverse(-b, -a, 1.0 - u);
  }
  const double pa = std::isinf(a) ? 0.0 : normal_cdf(a);
  const double pb = std::isinf(b) ? 1.0 : normal_cdf(b);
  const double p = std::clamp(pa + u * (pb - pa), std::numeric_limits<double>::min(), 1.0 - 1e-17);
  const double z = normal_quantile(p);
  return std::min(std::max(z, a), b);
}

}  // namespace

TruncatedDraw sample_truncated_normal(Substream& rng, double mean, double sigma, double lo, double hi,
                                      int cap) {
  TruncatedDraw out;
  if (!(hi > lo)) throw UsageError("empty truncation interval");
  if (sigma <= 0.0) {
    out.value = std::clamp(mean, lo, std::nextafter(hi, lo));
    return out;
  }
  for (; out.attempts < cap; ++out.attempts) {
    const double y = mean + sigma * rng.normal();
    if (y >= lo && y < hi) {
      ++out.attempts;
      out.value = y;
      return out;
    }
  }
  out.fallback = true;
  const double a = (lo - mean) / sigma;
  const double b = (hi - mean) / sigma;
  double y = mean + sigma * truncated_standard_inverse(a, b, rng.uniform());
  if (y >= hi) y = std::nextafter(hi, lo);
  if (y < lo) y = lo;
  out.value = y;
  return out;
}

}  // namespace natstego
