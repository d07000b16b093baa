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

#include "natstego/kernels.hpp"

namespace natstego::simd {

namespace {

void accumulate_frame(const std::uint16_t* frame, std::size_t n, std::uint64_t* sum,
                      std::uint64_t* sumsq, std::uint8_t* saturated) {
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t v = frame[i];
    sum[i] += v;
    sumsq[i] += v * v;
    saturated[i] |= static_cast<std::uint8_t>(v == 0 || v == 65535);
  }
}

void add_u16_u32(const std::uint16_t* src, std::size_t n, std::uint32_t* acc) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += src[i];
}

void affine(const double* x, std::size_t n, double a, double b, double scale, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = a * x[i];
    out[i] = (t + b) * scale;
  }
}

void axpy(double w, const double* x, std::size_t n, double* y) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = w * x[i];
    y[i] = y[i] + t;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", accumulate_frame, add_u16_u32, affine, axpy};
  return table;
}

}  // namespace natstego::simd
