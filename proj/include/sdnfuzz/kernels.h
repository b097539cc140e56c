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

// Column kernels behind rule coverage: filtering a uint64 feature column by
// one comparison atom into a byte mask, and counting covered / positive rows.
//
// `scalar::` is the reference. `avx2::` must agree with it bit for bit and is
// only called when the CPU reports AVX2. The unqualified entry points dispatch
// at runtime; SDNFUZZ_ISA=scalar forces the reference path.

#ifndef SDNFUZZ_KERNELS_H_
#define SDNFUZZ_KERNELS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "sdnfuzz/condition.h"

namespace sdnfuzz::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);
bool Supported(Isa isa);
Isa ActiveIsa();

struct Coverage {
  std::size_t covered = 0;
  std::size_t positives = 0;

  friend bool operator==(const Coverage&, const Coverage&) = default;
};

// mask[i] &= (column[i] op constant). mask bytes are 0 or 1.
void FilterColumn(std::span<const std::uint64_t> column, Op op,
                  std::uint64_t constant, std::span<std::uint8_t> mask);
// covered = #{i : mask[i]}, positives = #{i : mask[i] && labels[i]}.
Coverage CountCovered(std::span<const std::uint8_t> mask,
                      std::span<const std::uint8_t> labels);

namespace scalar {
void FilterColumn(std::span<const std::uint64_t> column, Op op,
                  std::uint64_t constant, std::span<std::uint8_t> mask);
Coverage CountCovered(std::span<const std::uint8_t> mask,
                      std::span<const std::uint8_t> labels);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SDNFUZZ_HAVE_AVX2_KERNELS 1
namespace avx2 {
void FilterColumn(std::span<const std::uint64_t> column, Op op,
                  std::uint64_t constant, std::span<std::uint8_t> mask);
Coverage CountCovered(std::span<const std::uint8_t> mask,
                      std::span<const std::uint8_t> labels);
}  // namespace avx2
#endif

}  // namespace sdnfuzz::kernels

#endif  // SDNFUZZ_KERNELS_H_
