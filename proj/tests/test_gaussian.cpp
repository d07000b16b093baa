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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "natstego/gaussian.hpp"

using namespace natstego;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

// Mean of N(mu, s^2) restricted to [lo, hi].
double truncated_mean(double mu, double s, double lo, double hi) {
  const double a = (lo - mu) / s;
  const double b = (hi - mu) / s;
  const double mass = 0.5 * (std::erfc(-b / std::sqrt(2.0)) - std::erfc(-a / std::sqrt(2.0)));
  return mu + s * (pdf(a) - pdf(b)) / mass;
}

}  // namespace

TEST_CASE("normal cdf reference values") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
  CHECK(normal_cdf(-3.0) == doctest::Approx(0.0013498980316301).epsilon(1e-12));
  CHECK(normal_sf(8.0) == doctest::Approx(6.220960574271785e-16).epsilon(1e-10));
  CHECK(normal_cdf(kInf) == 1.0);
  CHECK(normal_cdf(-kInf) == 0.0);
}

TEST_CASE("quantile inverts the cdf") {
  for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1 - 1e-9}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
  }
}

TEST_CASE("interval probabilities") {
  CHECK(interval_prob(-kInf, kInf, 3.0, 2.0) == 1.0);
  CHECK(interval_prob(-1.0, 1.0, 0.0, 1.0) == doctest::Approx(0.6826894921370859).epsilon(1e-13));
  // Far-tail intervals keep relative precision.
  CHECK(interval_prob(10.0, 11.0, 0.0, 1.0) == doctest::Approx(7.619661958203076e-24).epsilon(1e-8));
  CHECK(interval_prob(-11.0, -10.0, 0.0, 1.0) == interval_prob(10.0, 11.0, 0.0, 1.0));
  CHECK(interval_prob(2.0, 1.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("entropy in bits") {
  const double coin[] = {0.5, 0.5};
  CHECK(entropy_bits(coin, 2) == doctest::Approx(1.0));
  const double det[] = {0.0, 1.0, 0.0};
  CHECK(entropy_bits(det, 3) == 0.0);
  const double four[] = {0.25, 0.25, 0.25, 0.25};
  CHECK(entropy_bits(four, 4) == doctest::Approx(2.0));
}

TEST_CASE("truncated normal by rejection") {
  Substream rng(1, 0, Stage::Latent);
  const double mu = 100.0, s = 50.0, lo = 80.0, hi = 200.0;
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const TruncatedDraw d = sample_truncated_normal(rng, mu, s, lo, hi);
    REQUIRE(d.value >= lo);
    REQUIRE(d.value <= hi);
    CHECK_FALSE(d.fallback);
    sum += d.value;
  }
  CHECK(sum / n == doctest::Approx(truncated_mean(mu, s, lo, hi)).epsilon(2e-3));
}

TEST_CASE("inverse-CDF fallback for far tails") {
  Substream rng(2, 0, Stage::Latent);
  const double mu = 0.0, s = 1.0, lo = 7.0, hi = 7.5;
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const TruncatedDraw d = sample_truncated_normal(rng, mu, s, lo, hi, 10);
    REQUIRE(d.value >= lo);
    REQUIRE(d.value <= hi);
    CHECK(d.fallback);
    sum += d.value;
  }
  CHECK(sum / n == doctest::Approx(truncated_mean(mu, s, lo, hi)).epsilon(1e-3));

  // Half-infinite cells and the lower tail.
  for (int i = 0; i < 1000; ++i) {
    const TruncatedDraw a = sample_truncated_normal(rng, 0.0, 1.0, 9.0, kInf, 5);
    REQUIRE(a.value >= 9.0);
    REQUIRE(std::isfinite(a.value));
    const TruncatedDraw b = sample_truncated_normal(rng, 0.0, 1.0, -kInf, -9.0, 5);
    REQUIRE(b.value <= -9.0);
    REQUIRE(std::isfinite(b.value));
  }
}
