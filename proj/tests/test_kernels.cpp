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

#include <cstring>
#include <random>

#include "doctest.h"
#include "natstego/kernels.hpp"

using namespace natstego::simd;

namespace {

std::vector<const KernelTable*> variants() {
  std::vector<const KernelTable*> v{&scalar_kernels()};
  if (const KernelTable* a = avx2_kernels()) v.push_back(a);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("selected kernel table is one of the variants") {
  const KernelTable& k = kernels();
  bool found = false;
  for (const KernelTable* v : variants()) found |= v == &k;
  CHECK(found);
  MESSAGE("kernels: " << k.name);
}

TEST_CASE("accumulate_frame variants agree with the scalar reference") {
  std::mt19937 gen(11);
  std::uniform_int_distribution<int> d(0, 65535);
  for (std::size_t n : {0u, 1u, 3u, 15u, 16u, 17u, 1000u, 4099u}) {
    std::vector<std::uint16_t> f(n);
    for (auto& v : f) v = static_cast<std::uint16_t>(d(gen));
    if (n > 2) {
      f[1] = 0;
      f[n - 1] = 65535;
    }
    std::vector<std::uint64_t> s0(n, 5), q0(n, 7);
    std::vector<std::uint8_t> z0(n, 0);
    scalar_kernels().accumulate_frame(f.data(), n, s0.data(), q0.data(), z0.data());
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(s0[i] == 5u + f[i]);
      REQUIRE(q0[i] == 7u + static_cast<std::uint64_t>(f[i]) * f[i]);
      REQUIRE(z0[i] == (f[i] == 0 || f[i] == 65535));
    }
    for (const KernelTable* k : variants()) {
      std::vector<std::uint64_t> s(n, 5), q(n, 7);
      std::vector<std::uint8_t> z(n, 0);
      k->accumulate_frame(f.data(), n, s.data(), q.data(), z.data());
      CHECK(s == s0);
      CHECK(q == q0);
      CHECK(z == z0);
    }
  }
}

TEST_CASE("add_u16_u32 variants agree") {
  std::mt19937 gen(12);
  std::uniform_int_distribution<int> d(0, 65535);
  for (std::size_t n : {1u, 7u, 8u, 9u, 31u, 513u}) {
    std::vector<std::uint16_t> src(n);
    for (auto& v : src) v = static_cast<std::uint16_t>(d(gen));
    std::vector<std::uint32_t> ref(n, 100000);
    for (std::size_t i = 0; i < n; ++i) ref[i] += src[i];
    for (const KernelTable* k : variants()) {
      std::vector<std::uint32_t> acc(n, 100000);
      k->add_u16_u32(src.data(), n, acc.data());
      CHECK(acc == ref);
    }
  }
}

TEST_CASE("affine and axpy variants are bit-identical to scalar") {
  std::mt19937 gen(13);
  std::uniform_real_distribution<double> d(-1e5, 1e5);
  for (std::size_t n : {1u, 3u, 4u, 5u, 63u, 1001u}) {
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = d(gen);
    for (auto& v : y) v = d(gen);
    std::vector<double> ref(n), yref = y;
    scalar_kernels().affine(x.data(), n, 1.376235, 3607.66, 0.04, ref.data());
    scalar_kernels().axpy(0.1875, x.data(), n, yref.data());
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(ref[i] == (1.376235 * x[i] + 3607.66) * 0.04);
    }
    for (const KernelTable* k : variants()) {
      std::vector<double> out(n), yy = y;
      k->affine(x.data(), n, 1.376235, 3607.66, 0.04, out.data());
      k->axpy(0.1875, x.data(), n, yy.data());
      CHECK(same_bits(out, ref));
      CHECK(same_bits(yy, yref));
    }
  }
}
