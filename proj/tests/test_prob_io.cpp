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
#include <cstring>

#include "doctest.h"
#include "natstego/errors.hpp"
#include "natstego/prob_io.hpp"
#include "natstego/stats.hpp"

using namespace natstego;

namespace {

ChangeProbMap sample_map() {
  const StegoParams p = diff_model({8.36e-5, 1.11e-6, ""}, {10.46e-5, 1.95e-6, ""}, 16);
  Raster16 cover = uniform_cover(23, 11, 6);
  cover.samples[0] = 0;
  return change_probs(cover, p);
}

}  // namespace

TEST_CASE("probability map container round trip") {
  const ChangeProbMap m = sample_map();
  const auto bytes = encode_prob_map(m);
  CHECK(std::memcmp(bytes.data(), "NSPM", 4) == 0);
  const std::size_t n = m.size();
  const std::size_t K = static_cast<std::size_t>(m.support());
  CHECK(bytes.size() == 24 + n * (2 * K + 1) * 8 + n * (1 + 2 + 8 + 8));

  const ChangeProbMap back = decode_prob_map(bytes);
  REQUIRE(back.size() == n);
  CHECK(back.width() == m.width());
  CHECK(back.support() == m.support());
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(back.flags(i) == m.flags(i));
    CHECK(back.center(i) == m.center(i));
    CHECK(back.mean(i) == m.mean(i));
    CHECK(back.sigma(i) == m.sigma(i));
    for (int k = -m.support(); k <= m.support(); ++k) CHECK(back.prob(i, k) == m.prob(i, k));
  }
  CHECK(encode_prob_map(back) == bytes);
}

TEST_CASE("cost map container round trip") {
  const CostMap c = probs_to_costs(sample_map());
  const auto bytes = encode_cost_map(c);
  CHECK(bytes.size() == 16 + c.rho.size() * 8);
  const CostMap back = decode_cost_map(bytes);
  CHECK(back.width == c.width);
  CHECK(back.height == c.height);
  REQUIRE(back.rho.size() == c.rho.size());
  CHECK(std::isinf(back.rho[0]));
  for (std::size_t i = 0; i < c.rho.size(); ++i) CHECK(std::memcmp(&back.rho[i], &c.rho[i], 8) == 0);
}

TEST_CASE("malformed containers") {
  auto bytes = encode_prob_map(sample_map());
  auto cut = bytes;
  cut.resize(cut.size() - 3);
  CHECK_THROWS_AS(decode_prob_map(cut), IoError);
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode_prob_map(bad), IoError);
  auto extra = bytes;
  extra.push_back(0);
  CHECK_THROWS_AS(decode_prob_map(extra), IoError);
  CHECK_THROWS_AS(decode_cost_map(bytes), IoError);
}
