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

// Finite domains, hypotheses, hypothesis classes and labeled samples.
//
// A domain is {0, ..., n-1}. A hypothesis is its truth table over the
// domain. A class is a deduplicated set of hypotheses kept in canonical
// (lexicographic) order, which is also the tie-breaking order used by every
// search in the library.

#ifndef LSDP_HYPOTHESIS_H_
#define LSDP_HYPOTHESIS_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsdp/bit_vector.h"
#include "lsdp/rational.h"

namespace lsdp {

struct DomainPoint {
  std::size_t index = 0;
  auto operator<=>(const DomainPoint&) const = default;
};

struct LabeledExample {
  DomainPoint point;
  bool label = false;
  bool operator==(const LabeledExample&) const = default;
};

using LabeledSequence = std::vector<LabeledExample>;

class Hypothesis {
 public:
  Hypothesis() = default;
  explicit Hypothesis(BitVector values) : values_(std::move(values)) {}

  static Hypothesis Constant(std::size_t domain_size, bool value) {
    return Hypothesis(BitVector(domain_size, value));
  }
  static Hypothesis FromString(std::string_view bits) {
    return Hypothesis(BitVector::FromString(bits));
  }

  std::size_t domain_size() const { return values_.size(); }
  const BitVector& values() const { return values_; }
  // Unchecked evaluation; see Evaluate() for the checked form.
  bool operator()(std::size_t x) const { return values_.Get(x); }

  std::string ToString() const { return values_.ToString(); }

  bool operator==(const Hypothesis&) const = default;
  auto operator<=>(const Hypothesis& other) const {
    return values_ <=> other.values_;
  }

 private:
  BitVector values_;
};

struct HypothesisHash {
  std::size_t operator()(const Hypothesis& h) const {
    return h.values().Hash();
  }
};

class HypothesisClass {
 public:
  explicit HypothesisClass(std::size_t domain_size = 0)
      : domain_size_(domain_size) {}

  // Deduplicates and sorts `members`. Throws DomainMismatchError if a member
  // is defined on a different domain.
  HypothesisClass(std::size_t domain_size, std::vector<Hypothesis> members);

  std::size_t domain_size() const { return domain_size_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<Hypothesis>& members() const { return members_; }
  const Hypothesis& operator[](std::size_t i) const { return members_[i]; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  bool Contains(const Hypothesis& h) const;
  // Members sorted, so subset testing is a merge.
  bool IsSubsetOf(const HypothesisClass& other) const;

  bool operator==(const HypothesisClass&) const = default;

 private:
  std::size_t domain_size_;
  std::vector<Hypothesis> members_;
};

// Returns h(x). Throws DomainMismatchError when x is outside h's domain.
bool Evaluate(const Hypothesis& h, DomainPoint x);

// Fraction of examples in `sample` that h mislabels. Throws EmptySampleError
// on an empty sample.
Rational EmpiricalError(const Hypothesis& h, std::span<const LabeledExample> sample);
std::size_t CountMistakes(const Hypothesis& h, std::span<const LabeledExample> sample);

bool IsConsistent(const Hypothesis& h, std::span<const LabeledExample> sample);

HypothesisClass Restrict(const HypothesisClass& h, const LabeledExample& e);
HypothesisClass RestrictSeq(const HypothesisClass& h,
                            std::span<const LabeledExample> sample);

// Littlestone dimension; -1 for the empty class.
int Ldim(const HypothesisClass& h);

// SOA_H(x): 0 iff ldim(H|(x,0)) == ldim(H). Throws UndefinedSoaError for
// an empty class.
bool Soa(const HypothesisClass& h, DomainPoint x);
Hypothesis SoaHypothesis(const HypothesisClass& h);

// A set of at most k distinct points x_1..x_j such that restricting H by
// (x_i, SOA_H(x_i)) strictly lowers ldim, or nullopt if H is k-irreducible.
// The returned witness is a shortest one; ties go to the smallest indices.
std::optional<std::vector<DomainPoint>> FindReducingSequence(
    const HypothesisClass& h, std::int64_t k);
bool IsIrreducible(const HypothesisClass& h, std::int64_t k);

// Class file: first line is the domain size n, every other non-empty line is
// one hypothesis as n characters in {0,1}. Duplicate lines are rejected.
HypothesisClass ParseClass(std::istream& in);
HypothesisClass ReadClassFile(const std::string& path);
void WriteClass(std::ostream& out, const HypothesisClass& h);

// Dataset/stream file: one "point_index label" pair per line.
LabeledSequence ParseSequence(std::istream& in, std::size_t domain_size);
LabeledSequence ReadSequenceFile(const std::string& path, std::size_t domain_size);
void WriteSequence(std::ostream& out, std::span<const LabeledExample> sample);

}  // namespace lsdp

#endif  // LSDP_HYPOTHESIS_H_
