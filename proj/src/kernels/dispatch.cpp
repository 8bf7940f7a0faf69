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

#include <cstdlib>

#include "grmcurate/kernels/kernels.hpp"

namespace grmcurate::kernels {

#if !defined(GRMCURATE_HAVE_AVX2)
const KernelTable* avx2_table() noexcept { return nullptr; }
#endif
#if !defined(GRMCURATE_HAVE_NEON)
const KernelTable* neon_table() noexcept { return nullptr; }
#endif

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
    case Isa::Scalar:
      break;
  }
  return "scalar";
}

namespace {

const KernelTable& select() noexcept {
  const char* force = std::getenv("GRMCURATE_FORCE_SCALAR");
  if (force != nullptr && *force != '\0' && *force != '0') return scalar_table();
  if (const KernelTable* t = avx2_table()) return *t;
  if (const KernelTable* t = neon_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

Isa active_isa() noexcept { return active().isa; }

}  // namespace grmcurate::kernels
