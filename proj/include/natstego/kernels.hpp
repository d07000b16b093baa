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

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops. Each kernel has a scalar reference and, on x86-64
// builds, an AVX2 variant; the variant is chosen once at runtime. Variants
// are required to agree bit-for-bit with the reference.
namespace natstego::simd {

struct KernelTable {
  const char* name;
  // sum[i] += f[i]; sumsq[i] += f[i]^2; saturated[i] |= (f[i] == 0 || f[i] == 65535)
  void (*accumulate_frame)(const std::uint16_t* frame, std::size_t n, std::uint64_t* sum,
                           std::uint64_t* sumsq, std::uint8_t* saturated);
  // acc[i] += src[i]
  void (*add_u16_u32)(const std::uint16_t* src, std::size_t n, std::uint32_t* acc);
  // out[i] = (a * x[i] + b) * scale
  void (*affine)(const double* x, std::size_t n, double a, double b, double scale, double* out);
  // y[i] = y[i] + w * x[i]
  void (*axpy)(double w, const double* x, std::size_t n, double* y);
};

const KernelTable& scalar_kernels();
// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

// Selected table: AVX2 when available unless NATSTEGO_SIMD=scalar.
const KernelTable& kernels();

}  // namespace natstego::simd
