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

#ifndef LSDP_BIT_VECTOR_H_
#define LSDP_BIT_VECTOR_H_

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace lsdp {

// Fixed-length packed bit vector. Used both for hypothesis values (one bit
// per domain point) and for member sets (one bit per member of a root
// class). Bits beyond size() are always zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false);

  // Parses a string of '0'/'1' characters; character i becomes bit i.
  static BitVector FromString(std::string_view bits);

  std::size_t size() const { return size_; }

  bool Get(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void Set(std::size_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  std::size_t Count() const;
  bool None() const;
  bool Any() const { return !None(); }
  // Index of the lowest set bit, or size() if none.
  std::size_t FindFirst() const;
  // Index of the lowest set bit strictly after `i`, or size() if none.
  std::size_t FindNext(std::size_t i) const;
  bool IsSubsetOf(const BitVector& other) const;

  BitVector& operator&=(const BitVector& other);
  BitVector& operator|=(const BitVector& other);
  BitVector& operator^=(const BitVector& other);
  BitVector operator~() const;

  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  bool operator==(const BitVector& other) const = default;
  // Lexicographic order on (bit 0, bit 1, ...), with 0 < 1. Vectors of
  // different lengths order by length first.
  std::strong_ordering operator<=>(const BitVector& other) const;

  std::string ToString() const;
  std::size_t Hash() const;

 private:
  void ClearTail();

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitVectorHash {
  std::size_t operator()(const BitVector& v) const { return v.Hash(); }
};

}  // namespace lsdp

template <>
struct std::hash<lsdp::BitVector> {
  std::size_t operator()(const lsdp::BitVector& v) const { return v.Hash(); }
};

#endif  // LSDP_BIT_VECTOR_H_
