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

#include "lsdp/class_index.h"

#include <algorithm>
#include <bit>
#include <deque>

#include "lsdp/errors.h"

namespace lsdp {
namespace {

int FloorLog2(std::size_t c) { return static_cast<int>(std::bit_width(c)) - 1; }

}  // namespace

ClassIndex::ClassIndex(HypothesisClass root) : root_(std::move(root)) {
  const std::size_t n = root_.domain_size();
  const std::size_t m = root_.size();
  by_label_.assign(n, {MemberSet(m), MemberSet(m)});
  for (std::size_t i = 0; i < m; ++i) {
    const Hypothesis& h = root_[i];
    for (std::size_t x = 0; x < n; ++x) {
      by_label_[x][h(x) ? 1 : 0].Set(i, true);
    }
  }
}

MemberSet ClassIndex::RestrictSeq(MemberSet s,
                                  std::span<const LabeledExample> sample) const {
  for (const LabeledExample& e : sample) {
    if (e.point.index >= domain_size()) {
      throw DomainMismatchError("example point outside the class domain");
    }
    s &= by_label_[e.point.index][e.label ? 1 : 0];
  }
  return s;
}

bool ClassIndex::Splits(const MemberSet& s, std::size_t x) const {
  const MemberSet s0 = s & by_label_[x][0];
  return s0.Any() && s0 != s;
}

MemberSet ClassIndex::MembersOf(const HypothesisClass& sub) const {
  if (sub.domain_size() != domain_size()) {
    throw DomainMismatchError("subclass is defined on a different domain");
  }
  MemberSet s = Empty();
  for (const Hypothesis& h : sub) {
    auto it = std::lower_bound(root_.begin(), root_.end(), h);
    if (it == root_.end() || *it != h) {
      throw DomainMismatchError("hypothesis " + h.ToString() +
                                " is not a member of the root class");
    }
    s.Set(static_cast<std::size_t>(it - root_.begin()), true);
  }
  return s;
}

HypothesisClass ClassIndex::Materialize(const MemberSet& s) const {
  std::vector<Hypothesis> members;
  members.reserve(s.Count());
  for (std::size_t i = s.FindFirst(); i < s.size(); i = s.FindNext(i)) {
    members.push_back(root_[i]);
  }
  return HypothesisClass(domain_size(), std::move(members));
}

int ClassIndex::Ldim(const MemberSet& s) {
  const std::size_t count = s.Count();
  if (count == 0) return -1;
  if (count == 1) return 0;
  if (auto it = ldim_memo_.find(s); it != ldim_memo_.end()) return it->second;

  // A shattered tree of depth d needs 2^d distinct members.
  const int upper = FloorLog2(count);
  int best = 0;
  for (std::size_t x = 0; x < domain_size() && best < upper; ++x) {
    MemberSet zero = s & by_label_[x][0];
    const std::size_t c0 = zero.Count();
    if (c0 == 0 || c0 == count) continue;
    MemberSet one = s ^ zero;
    const std::size_t c1 = count - c0;
    if (1 + FloorLog2(std::min(c0, c1)) <= best) continue;
    const bool zero_smaller = c0 <= c1;
    const int first = Ldim(zero_smaller ? zero : one);
    if (first + 1 <= best) continue;
    const int second = Ldim(zero_smaller ? one : zero);
    best = std::max(best, 1 + std::min(first, second));
  }
  ldim_memo_.emplace(s, best);
  return best;
}

bool ClassIndex::Soa(const MemberSet& s, std::size_t x) {
  if (s.None()) throw UndefinedSoaError("SOA of an empty class is undefined");
  if (x >= domain_size()) throw DomainMismatchError("point outside the domain");
  return Ldim(s & by_label_[x][0]) != Ldim(s);
}

const Hypothesis& ClassIndex::SoaHypothesis(const MemberSet& s) {
  if (s.None()) throw UndefinedSoaError("SOA of an empty class is undefined");
  if (auto it = soa_memo_.find(s); it != soa_memo_.end()) return it->second;
  BitVector values(domain_size());
  const int dim = Ldim(s);
  for (std::size_t x = 0; x < domain_size(); ++x) {
    values.Set(x, Ldim(s & by_label_[x][0]) != dim);
  }
  return soa_memo_.emplace(s, Hypothesis(std::move(values))).first->second;
}

const std::optional<std::vector<std::size_t>>&
ClassIndex::ShortestReducingSequence(const MemberSet& s) {
  if (auto it = reduce_memo_.find(s); it != reduce_memo_.end()) {
    return it->second;
  }
  std::optional<std::vector<std::size_t>> result;
  const int dim = Ldim(s);
  // Restricting a singleton by its own SOA keeps it, so only dim >= 1 can
  // reduce.
  if (dim >= 1) {
    const Hypothesis soa = SoaHypothesis(s);
    std::vector<const MemberSet*> agree(domain_size());
    for (std::size_t x = 0; x < domain_size(); ++x) {
      agree[x] = &by_label_[x][soa(x) ? 1 : 0];
    }
    // Labels are fixed, so restrictions commute and the state is just the
    // restricted member set. Level-order BFS with ascending point order gives
    // a shortest witness, lexicographically smallest among shortest.
    struct Parent {
      MemberSet prev;
      std::size_t point;
    };
    std::unordered_map<MemberSet, Parent, BitVectorHash> parent;
    std::deque<MemberSet> frontier{s};
    parent.emplace(s, Parent{s, domain_size()});
    while (!frontier.empty() && !result) {
      MemberSet state = std::move(frontier.front());
      frontier.pop_front();
      for (std::size_t x = 0; x < domain_size(); ++x) {
        MemberSet next = state & *agree[x];
        if (next == state || parent.contains(next)) continue;
        parent.emplace(next, Parent{state, x});
        if (Ldim(next) < dim) {
          std::vector<std::size_t> path;
          for (MemberSet cur = next; cur != s;) {
            const Parent& p = parent.at(cur);
            path.push_back(p.point);
            cur = p.prev;
          }
          std::reverse(path.begin(), path.end());
          result = std::move(path);
          break;
        }
        frontier.push_back(std::move(next));
      }
    }
  }
  return reduce_memo_.emplace(s, std::move(result)).first->second;
}

bool ClassIndex::IsIrreducible(const MemberSet& s, std::int64_t k) {
  if (k <= 0) return true;
  const auto& witness = ShortestReducingSequence(s);
  return !witness.has_value() || static_cast<std::int64_t>(witness->size()) > k;
}

}  // namespace lsdp
