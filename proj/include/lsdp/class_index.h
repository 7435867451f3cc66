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

#ifndef LSDP_CLASS_INDEX_H_
#define LSDP_CLASS_INDEX_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "lsdp/bit_vector.h"
#include "lsdp/hypothesis.h"

namespace lsdp {

// A subclass of a root class, as one bit per root member (in the root's
// canonical order). Equal member sets encode equal classes, so MemberSet is
// the memoization key for every restriction-closed search.
using MemberSet = BitVector;

// Memoizing engine over the subclasses of one fixed root class.
//
// Not thread-safe: the memo tables are mutated by const-looking queries.
// Give each thread its own ClassIndex.
class ClassIndex {
 public:
  explicit ClassIndex(HypothesisClass root);

  ClassIndex(const ClassIndex&) = delete;
  ClassIndex& operator=(const ClassIndex&) = delete;

  const HypothesisClass& root() const { return root_; }
  std::size_t domain_size() const { return root_.domain_size(); }
  std::size_t num_members() const { return root_.size(); }

  MemberSet All() const { return MemberSet(root_.size(), true); }
  MemberSet Empty() const { return MemberSet(root_.size()); }

  MemberSet Restrict(const MemberSet& s, std::size_t x, bool label) const {
    return s & by_label_[x][label ? 1 : 0];
  }
  MemberSet RestrictSeq(MemberSet s, std::span<const LabeledExample> sample) const;
  // True if members of s disagree at x (both restrictions nonempty).
  bool Splits(const MemberSet& s, std::size_t x) const;

  // Member set of `sub` inside the root. Throws DomainMismatchError if some
  // member of `sub` is not in the root.
  MemberSet MembersOf(const HypothesisClass& sub) const;
  HypothesisClass Materialize(const MemberSet& s) const;

  int Ldim(const MemberSet& s);
  bool Soa(const MemberSet& s, std::size_t x);
  const Hypothesis& SoaHypothesis(const MemberSet& s);

  // Shortest sequence of distinct points, labeled by SOA of `s` itself,
  // whose restriction lowers ldim(s). nullopt if no such sequence exists at
  // any length (singletons and the empty class).
  const std::optional<std::vector<std::size_t>>& ShortestReducingSequence(
      const MemberSet& s);
  bool IsIrreducible(const MemberSet& s, std::int64_t k);

  std::size_t ldim_cache_size() const { return ldim_memo_.size(); }

 private:
  HypothesisClass root_;
  // by_label_[x][b] = members h with h(x) == b.
  std::vector<std::array<MemberSet, 2>> by_label_;

  std::unordered_map<MemberSet, int, BitVectorHash> ldim_memo_;
  std::unordered_map<MemberSet, Hypothesis, BitVectorHash> soa_memo_;
  std::unordered_map<MemberSet, std::optional<std::vector<std::size_t>>,
                     BitVectorHash>
      reduce_memo_;
};

}  // namespace lsdp

#endif  // LSDP_CLASS_INDEX_H_
