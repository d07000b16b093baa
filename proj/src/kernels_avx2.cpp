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

#include <immintrin.h>

#include "natstego/kernels.hpp"

namespace natstego::simd {

namespace {

void accumulate_frame(const std::uint16_t* frame, std::size_t n, std::uint64_t* sum,
                      std::uint64_t* sumsq, std::uint8_t* saturated) {
  const __m256i zero = _mm256_setzero_si256();
  const __m256i ones = _mm256_set1_epi16(-1);
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const __m256i v16 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(frame + i));
    const __m256i sat = _mm256_or_si256(_mm256_cmpeq_epi16(v16, zero), _mm256_cmpeq_epi16(v16, ones));
    const unsigned mask = static_cast<unsigned>(_mm256_movemask_epi8(sat));
    if (mask != 0) {
      for (int lane = 0; lane < 16; ++lane) {
        saturated[i + lane] |= static_cast<std::uint8_t>((mask >> (2 * lane)) & 1u);
      }
    }
    for (int half = 0; half < 2; ++half) {
      const __m128i part = half == 0 ? _mm256_castsi256_si128(v16) : _mm256_extracti128_si256(v16, 1);
      const __m256i v32 = _mm256_cvtepu16_epi32(part);
      const __m256i sq32 = _mm256_mullo_epi32(v32, v32);  // < 2^32, no overflow
      for (int q = 0; q < 2; ++q) {
        const std::size_t base = i + static_cast<std::size_t>(half) * 8 + static_cast<std::size_t>(q) * 4;
        const __m128i v4 = q == 0 ? _mm256_castsi256_si128(v32) : _mm256_extracti128_si256(v32, 1);
        const __m128i s4 = q == 0 ? _mm256_castsi256_si128(sq32) : _mm256_extracti128_si256(sq32, 1);
        __m256i* ps = reinterpret_cast<__m256i*>(sum + base);
        __m256i* pq = reinterpret_cast<__m256i*>(sumsq + base);
        _mm256_storeu_si256(ps, _mm256_add_epi64(_mm256_loadu_si256(ps), _mm256_cvtepu32_epi64(v4)));
        _mm256_storeu_si256(pq, _mm256_add_epi64(_mm256_loadu_si256(pq), _mm256_cvtepu32_epi64(s4)));
      }
    }
  }
  scalar_kernels().accumulate_frame(frame + i, n - i, sum + i, sumsq + i, saturated + i);
}

void add_u16_u32(const std::uint16_t* src, std::size_t n, std::uint32_t* acc) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i v = _mm256_cvtepu16_epi32(_mm_loadu_si128(reinterpret_cast<const __m128i*>(src + i)));
    __m256i* pa = reinterpret_cast<__m256i*>(acc + i);
    _mm256_storeu_si256(pa, _mm256_add_epi32(_mm256_loadu_si256(pa), v));
  }
  scalar_kernels().add_u16_u32(src + i, n - i, acc + i);
}

void affine(const double* x, std::size_t n, double a, double b, double scale, double* out) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_add_pd(t, vb), vs));
  }
  scalar_kernels().affine(x + i, n - i, a, b, scale, out + i);
}

void axpy(double w, const double* x, std::size_t n, double* y) {
  const __m256d vw = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_mul_pd(vw, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), t));
  }
  scalar_kernels().axpy(w, x + i, n - i, y + i);
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", accumulate_frame, add_u16_u32, affine, axpy};
  return table;
}

}  // namespace natstego::simd
