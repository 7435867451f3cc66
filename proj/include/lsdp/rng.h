// Copyright 2026 The lsdp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded randomness with a platform-independent stream.
//
// Standard distributions are implementation-defined, so every draw the
// library makes goes through the helpers below, which depend only on the
// raw mt19937_64 output.

#ifndef LSDP_RNG_H_
#define LSDP_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace lsdp {

using Rng = std::mt19937_64;

std::uint64_t SplitMix64(std::uint64_t x);

// Independent seed for sub-stream `stream` of `master`.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream);

// Uniform on the open interval (0, 1), 53 bits of resolution.
double UniformOpen01(Rng& rng);

// Uniform on {0, ..., n-1} by rejection; n must be positive.
std::size_t UniformIndex(Rng& rng, std::size_t n);

template <typename T>
void Shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[UniformIndex(rng, i)]);
  }
}

}  // namespace lsdp

#endif  // LSDP_RNG_H_
