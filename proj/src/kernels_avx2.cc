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

// Built with -mavx2; nothing here may run before the dispatcher has checked
// the CPU.

#include <immintrin.h>

#include <bit>
#include <cstring>

#include "sdnfuzz/kernels.h"

namespace sdnfuzz::kernels::avx2 {
namespace {

// Unsigned 64-bit lanes compared through signed compares after flipping the
// sign bit. Returns all-ones lanes where `x op c` holds.
inline __m256i CompareLanes(__m256i x, __m256i c, Op op, __m256i sign) {
  const __m256i xs = _mm256_xor_si256(x, sign);
  const __m256i cs = _mm256_xor_si256(c, sign);
  const __m256i ones = _mm256_set1_epi64x(-1);
  switch (op) {
    case Op::kEq: return _mm256_cmpeq_epi64(x, c);
    case Op::kNe: return _mm256_xor_si256(_mm256_cmpeq_epi64(x, c), ones);
    case Op::kGt: return _mm256_cmpgt_epi64(xs, cs);
    case Op::kLt: return _mm256_cmpgt_epi64(cs, xs);
    case Op::kLe: return _mm256_xor_si256(_mm256_cmpgt_epi64(xs, cs), ones);
    case Op::kGe: return _mm256_xor_si256(_mm256_cmpgt_epi64(cs, xs), ones);
  }
  return _mm256_setzero_si256();
}

// Four-bit lane mask -> four 0/1 bytes, little-endian packed.
constexpr std::uint32_t kSpread[16] = {
    0x00000000, 0x00000001, 0x00000100, 0x00000101,
    0x00010000, 0x00010001, 0x00010100, 0x00010101,
    0x01000000, 0x01000001, 0x01000100, 0x01000101,
    0x01010000, 0x01010001, 0x01010100, 0x01010101,
};

}  // namespace

void FilterColumn(std::span<const std::uint64_t> column, Op op,
                  std::uint64_t constant, std::span<std::uint8_t> mask) {
  const std::size_t n = column.size();
  const __m256i c = _mm256_set1_epi64x(static_cast<long long>(constant));
  const __m256i sign =
      _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i x = _mm256_loadu_si256(
        reinterpret_cast<const __m256i*>(column.data() + i));
    const int bits =
        _mm256_movemask_pd(_mm256_castsi256_pd(CompareLanes(x, c, op, sign)));
    std::uint32_t word;
    std::memcpy(&word, mask.data() + i, sizeof(word));
    word &= kSpread[bits];
    std::memcpy(mask.data() + i, &word, sizeof(word));
  }
  for (; i < n; ++i)
    mask[i] &= static_cast<std::uint8_t>(Compare(column[i], op, constant));
}

Coverage CountCovered(std::span<const std::uint8_t> mask,
                      std::span<const std::uint8_t> labels) {
  const std::size_t n = mask.size();
  const __m256i zero = _mm256_setzero_si256();
  Coverage cov;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i m =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mask.data() + i));
    const __m256i l =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(labels.data() + i));
    const auto covered = static_cast<std::uint32_t>(
        _mm256_movemask_epi8(_mm256_cmpgt_epi8(m, zero)));
    const auto pos = static_cast<std::uint32_t>(_mm256_movemask_epi8(
        _mm256_cmpgt_epi8(_mm256_and_si256(m, l), zero)));
    cov.covered += static_cast<std::size_t>(std::popcount(covered));
    cov.positives += static_cast<std::size_t>(std::popcount(pos));
  }
  for (; i < n; ++i) {
    cov.covered += mask[i];
    cov.positives += mask[i] & labels[i];
  }
  return cov;
}

}  // namespace sdnfuzz::kernels::avx2
