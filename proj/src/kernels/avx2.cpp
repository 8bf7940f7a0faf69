// Copyright 2026 The grmcurate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <immintrin.h>

#include "grmcurate/kernels/kernels.hpp"

namespace grmcurate::kernels {
namespace {

double horizontal(__m256d acc) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t blocked = n - n % 4;
  for (std::size_t i = 0; i < blocked; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  double total = horizontal(acc);
  for (std::size_t i = blocked; i < n; ++i) total += x[i];
  return total;
}

double sum_squared_deviations_avx2(const double* x, std::size_t n, double c) {
  const __m256d center = _mm256_set1_pd(c);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t blocked = n - n % 4;
  for (std::size_t i = 0; i < blocked; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), center);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = horizontal(acc);
  for (std::size_t i = blocked; i < n; ++i) {
    const double d = x[i] - c;
    total += d * d;
  }
  return total;
}

bool all_in_unit_interval_avx2(const double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const std::size_t blocked = n - n % 4;
  for (std::size_t i = 0; i < blocked; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    // Ordered compares are false for NaN.
    const __m256d ok = _mm256_and_pd(_mm256_cmp_pd(v, zero, _CMP_GE_OQ),
                                     _mm256_cmp_pd(v, one, _CMP_LE_OQ));
    if (_mm256_movemask_pd(ok) != 0xF) return false;
  }
  for (std::size_t i = blocked; i < n; ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0)) return false;
  }
  return true;
}

constexpr KernelTable kAvx2{Isa::Avx2, &sum_avx2, &sum_squared_deviations_avx2,
                            &all_in_unit_interval_avx2};

}  // namespace

const KernelTable* avx2_table() noexcept {
  return __builtin_cpu_supports("avx2") ? &kAvx2 : nullptr;
}

}  // namespace grmcurate::kernels
