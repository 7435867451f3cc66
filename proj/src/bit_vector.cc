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

#include "lsdp/bit_vector.h"

#include <stdexcept>

namespace lsdp {

BitVector::BitVector(std::size_t size, bool value)
    : size_(size),
      words_((size + 63) / 64, value ? ~std::uint64_t{0} : std::uint64_t{0}) {
  ClearTail();
}

BitVector BitVector::FromString(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.Set(i, true);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("bit string may only contain '0' and '1'");
    }
  }
  return v;
}

std::size_t BitVector::Count() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

bool BitVector::None() const {
  for (std::uint64_t w : words_) {
    if (w != 0) return false;
  }
  return true;
}

std::size_t BitVector::FindFirst() const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return w * 64 + std::countr_zero(words_[w]);
  }
  return size_;
}

std::size_t BitVector::FindNext(std::size_t i) const {
  std::size_t start = i + 1;
  if (start >= size_) return size_;
  std::size_t w = start >> 6;
  std::uint64_t word = words_[w] & (~std::uint64_t{0} << (start & 63));
  while (true) {
    if (word != 0) return w * 64 + std::countr_zero(word);
    if (++w >= words_.size()) return size_;
    word = words_[w];
  }
}

bool BitVector::IsSubsetOf(const BitVector& other) const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] & ~other.words_[w]) return false;
  }
  return true;
}

BitVector& BitVector::operator&=(const BitVector& other) {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

BitVector& BitVector::operator|=(const BitVector& other) {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

BitVector BitVector::operator~() const {
  BitVector out = *this;
  for (std::uint64_t& w : out.words_) w = ~w;
  out.ClearTail();
  return out;
}

std::strong_ordering BitVector::operator<=>(const BitVector& other) const {
  if (size_ != other.size_) return size_ <=> other.size_;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    const std::uint64_t diff = words_[w] ^ other.words_[w];
    if (diff != 0) {
      // The first differing bit decides; whoever holds a 0 there is smaller.
      const std::uint64_t lowest = diff & (~diff + 1);
      return (words_[w] & lowest) ? std::strong_ordering::greater
                                  : std::strong_ordering::less;
    }
  }
  return std::strong_ordering::equal;
}

std::string BitVector::ToString() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (Get(i)) s[i] = '1';
  }
  return s;
}

std::size_t BitVector::Hash() const {
  // splitmix-style mixing of each word.
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ size_;
  for (std::uint64_t w : words_) {
    std::uint64_t z = w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    h ^= z ^ (z >> 31);
  }
  return static_cast<std::size_t>(h);
}

void BitVector::ClearTail() {
  if (size_ % 64 != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }
}

}  // namespace lsdp
