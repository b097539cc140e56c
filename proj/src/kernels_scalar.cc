// Copyright 2026 The sdnfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <cstring>

#include "sdnfuzz/kernels.h"

namespace sdnfuzz::kernels {

namespace scalar {

void FilterColumn(std::span<const std::uint64_t> column, Op op,
                  std::uint64_t constant, std::span<std::uint8_t> mask) {
  const std::size_t n = column.size();
  for (std::size_t i = 0; i < n; ++i)
    mask[i] &= static_cast<std::uint8_t>(Compare(column[i], op, constant));
}

Coverage CountCovered(std::span<const std::uint8_t> mask,
                      std::span<const std::uint8_t> labels) {
  Coverage c;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    c.covered += mask[i];
    c.positives += mask[i] & labels[i];
  }
  return c;
}

}  // namespace scalar

std::string_view IsaName(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

bool Supported(Isa isa) {
  if (isa == Isa::kScalar) return true;
#ifdef SDNFUZZ_HAVE_AVX2_KERNELS
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa ActiveIsa() {
  static const Isa active = [] {
    const char* forced = std::getenv("SDNFUZZ_ISA");
    if (forced && std::strcmp(forced, "scalar") == 0) return Isa::kScalar;
    return Supported(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
  }();
  return active;
}

void FilterColumn(std::span<const std::uint64_t> column, Op op,
                  std::uint64_t constant, std::span<std::uint8_t> mask) {
#ifdef SDNFUZZ_HAVE_AVX2_KERNELS
  if (ActiveIsa() == Isa::kAvx2) return avx2::FilterColumn(column, op, constant, mask);
#endif
  scalar::FilterColumn(column, op, constant, mask);
}

Coverage CountCovered(std::span<const std::uint8_t> mask,
                      std::span<const std::uint8_t> labels) {
#ifdef SDNFUZZ_HAVE_AVX2_KERNELS
  if (ActiveIsa() == Isa::kAvx2) return avx2::CountCovered(mask, labels);
#endif
  return scalar::CountCovered(mask, labels);
}

}  // namespace sdnfuzz::kernels
