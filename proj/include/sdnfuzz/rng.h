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

#ifndef SDNFUZZ_RNG_H_
#define SDNFUZZ_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace sdnfuzz {

using Rng = std::mt19937_64;

// Independent stream for (seed, k0, k1, ...). std::seed_seq's mixing is fully
// specified, so streams are stable across platforms.
inline Rng MakeRng(std::uint64_t seed,
                   std::initializer_list<std::uint64_t> stream = {}) {
  std::vector<std::uint32_t> words;
  words.push_back(static_cast<std::uint32_t>(seed));
  words.push_back(static_cast<std::uint32_t>(seed >> 32));
  for (std::uint64_t k : stream) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

// Uniform integer in [lo, hi]; handles the full 64-bit range.
inline std::uint64_t UniformU64(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

inline double UniformUnit(Rng& rng) {
  return std::generate_canonical<double, 53>(rng);
}

}  // namespace sdnfuzz

#endif  // SDNFUZZ_RNG_H_
