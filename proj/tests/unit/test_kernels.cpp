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

#include <doctest.h>

#include <bit>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "grmcurate/kernels/kernels.hpp"
#include "test_support.hpp"

using namespace grmcurate;
using namespace grmcurate::testing;

namespace {

std::vector<const kernels::KernelTable*> vector_tables() {
  std::vector<const kernels::KernelTable*> out;
  if (auto* t = kernels::avx2_table()) out.push_back(t);
  if (auto* t = kernels::neon_table()) out.push_back(t);
  return out;
}

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar kernels on small inputs") {
    const auto& s = kernels::scalar_table();
    const std::vector<double> xs = {0.5, 1.0};
    CHECK(s.sum(xs.data(), 0) == 0.0);
    CHECK(s.sum(xs.data(), 2) == 1.5);
    CHECK(s.sum_squared_deviations(xs.data(), 2, 0.75) == 0.125);
    CHECK(s.all_in_unit_interval(xs.data(), 2));
    const std::vector<double> bad = {0.5, 1.0000001};
    CHECK_FALSE(s.all_in_unit_interval(bad.data(), 2));
    const std::vector<double> nan = {std::numeric_limits<double>::quiet_NaN()};
    CHECK_FALSE(s.all_in_unit_interval(nan.data(), 1));
  }

  TEST_CASE("scalar sum tracks the extended-precision oracle") {
    std::mt19937_64 rng(11);
    for (std::size_t n = 1; n <= 2000; n += 37) {
      auto xs = random_probs(rng, n);
      CHECK(rel_err(kernels::scalar_table().sum(xs.data(), n),
                    static_cast<double>(naive_sum(xs))) <= 1e-13);
    }
  }

  TEST_CASE("vector variants are bit-identical to scalar") {
    const auto tables = vector_tables();
    if (tables.empty()) {
      MESSAGE("no vector kernels on this machine; scalar only");
      return;
    }
    const auto& s = kernels::scalar_table();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> wide(-1e6, 1e6);
    for (const auto* t : tables) {
      CAPTURE(kernels::to_string(t->isa));
      for (std::size_t n = 0; n < 300; ++n) {
        std::vector<double> xs(n);
        for (auto& x : xs) x = (n % 3 == 0) ? wide(rng) : std::uniform_real_distribution<>(0, 1)(rng);
        const double c = n == 0 ? 0.0 : xs[n / 2];
        CHECK(same_bits(t->sum(xs.data(), n), s.sum(xs.data(), n)));
        CHECK(same_bits(t->sum_squared_deviations(xs.data(), n, c),
                        s.sum_squared_deviations(xs.data(), n, c)));
        CHECK(t->all_in_unit_interval(xs.data(), n) == s.all_in_unit_interval(xs.data(), n));
      }
    }
  }

  TEST_CASE("unit-interval check finds an outlier at any position") {
    for (const auto* t : [] {
           auto v = vector_tables();
           v.push_back(&kernels::scalar_table());
           return v;
         }()) {
      for (std::size_t n = 1; n < 40; ++n) {
        for (std::size_t k = 0; k < n; ++k) {
          std::vector<double> xs(n, 0.5);
          xs[k] = (k % 2 == 0) ? -0.0001 : std::numeric_limits<double>::quiet_NaN();
          CHECK_FALSE(t->all_in_unit_interval(xs.data(), n));
        }
      }
    }
  }

  TEST_CASE("active table is one of the compiled variants") {
    const auto isa = kernels::active_isa();
    if (isa == kernels::Isa::Avx2) CHECK(kernels::avx2_table() != nullptr);
    if (isa == kernels::Isa::Neon) CHECK(kernels::neon_table() != nullptr);
    CHECK(kernels::sum(std::vector<double>{1.0, 2.0, 3.0}) == 6.0);
  }
}
