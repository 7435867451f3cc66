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

// Brute-force reference implementations used only by tests. They share no
// code with the library beyond the plain data types and are deliberately
// slow: no memoization, no pruning, strings as hypotheses.

#ifndef LSDP_TESTS_ORACLES_H_
#define LSDP_TESTS_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lsdp/hypothesis.h"

namespace lsdp::oracle {

using Cls = std::vector<std::string>;

inline Cls ToCls(const HypothesisClass& h) {
  Cls out;
  for (const auto& m : h) out.push_back(m.ToString());
  return out;
}

inline Cls Filter(const Cls& h, std::size_t x, char b) {
  Cls out;
  for (const auto& m : h) {
    if (m[x] == b) out.push_back(m);
  }
  return out;
}

// True if h shatters a complete mistake tree of depth `depth`.
inline bool Shatters(const Cls& h, int depth, std::size_t n) {
  if (h.empty()) return false;
  if (depth == 0) return true;
  for (std::size_t x = 0; x < n; ++x) {
    if (Shatters(Filter(h, x, '0'), depth - 1, n) &&
        Shatters(Filter(h, x, '1'), depth - 1, n)) {
      return true;
    }
  }
  return false;
}

inline int Ldim(const Cls& h, std::size_t n) {
  if (h.empty()) return -1;
  int d = 0;
  while (Shatters(h, d + 1, n)) ++d;
  return d;
}

inline std::string Soa(const Cls& h, std::size_t n) {
  const int l = Ldim(h, n);
  std::string out(n, '0');
  for (std::size_t x = 0; x < n; ++x) {
    out[x] = Ldim(Filter(h, x, '0'), n) == l ? '0' : '1';
  }
  return out;
}

// Tries every ordered sequence of distinct points of length <= k.
inline bool Reducible(const Cls& h, std::size_t n, int k) {
  if (h.empty()) return false;
  const int l = Ldim(h, n);
  const std::string soa = Soa(h, n);
  std::vector<char> used(n, 0);
  auto rec = [&](auto&& self, const Cls& cur, int left) -> bool {
    if (Ldim(cur, n) < l) return true;
    if (left == 0) return false;
    for (std::size_t x = 0; x < n; ++x) {
      if (used[x]) continue;
      used[x] = 1;
      const bool hit = self(self, Filter(cur, x, soa[x]), left - 1);
      used[x] = 0;
      if (hit) return true;
    }
    return false;
  };
  return rec(rec, h, k);
}

inline std::int64_t Pow2(int e) { return std::int64_t{1} << e; }

// Leaf signature of one valid tree: (ldim, SOA) of each nonempty leaf.
using Signature = std::set<std::pair<int, std::string>>;

// Every valid (p,d) subtree rooted at class h at the given depth, as leaf
// signatures. Internal nodes may split at any point where h disagrees.
inline std::set<Signature> AllTrees(const Cls& h, std::size_t n, std::int64_t p,
                                    int d, std::int64_t depth) {
  std::set<Signature> out;
  const int l = Ldim(h, n);
  const std::int64_t k = p * Pow2(d - l);
  const int kk = static_cast<int>(std::min<std::int64_t>(k, n));
  if (depth <= p * (Pow2(d - l) - 1) && !Reducible(h, n, kk)) {
    out.insert(Signature{{l, Soa(h, n)}});
  }
  if (depth <= p * (Pow2(d - l + 1) - 1)) {
    for (std::size_t x = 0; x < n; ++x) {
      const Cls h0 = Filter(h, x, '0');
      const Cls h1 = Filter(h, x, '1');
      if (h0.empty() || h1.empty()) continue;
      const auto t0 = AllTrees(h0, n, p, d, depth + 1);
      if (t0.empty()) continue;
      const auto t1 = AllTrees(h1, n, p, d, depth + 1);
      for (const auto& a : t0) {
        for (const auto& b : t1) {
          Signature s = a;
          s.insert(b.begin(), b.end());
          out.insert(std::move(s));
        }
      }
    }
  }
  return out;
}

inline int Degree(const Signature& s) {
  int out = -1;
  for (const auto& [l, f] : s) out = std::max(out, l);
  return out;
}

struct DecompositionFacts {
  int ddim = -1;
  std::set<std::string> achievable;  // dim-t leaf SOAs over optimal trees
  std::set<std::string> essential;   // present in every optimal tree
};

inline DecompositionFacts Decompose(const Cls& h, std::size_t n, std::int64_t p,
                                    int d) {
  DecompositionFacts out;
  if (h.empty()) return out;
  const auto trees = AllTrees(h, n, p, d, 0);
  out.ddim = 1 << 20;
  for (const auto& t : trees) out.ddim = std::min(out.ddim, Degree(t));
  bool first = true;
  for (const auto& t : trees) {
    if (Degree(t) != out.ddim) continue;
    std::set<std::string> here;
    for (const auto& [l, f] : t) {
      if (l == out.ddim) here.insert(f);
    }
    out.achievable.insert(here.begin(), here.end());
    if (first) {
      out.essential = here;
      first = false;
    } else {
      std::set<std::string> keep;
      std::set_intersection(out.essential.begin(), out.essential.end(),
                            here.begin(), here.end(),
                            std::inserter(keep, keep.begin()));
      out.essential = std::move(keep);
    }
  }
  return out;
}

inline HypothesisClass RandomClass(std::mt19937_64& rng, std::size_t n,
                                   std::size_t max_members) {
  std::uniform_int_distribution<std::size_t> count(1, max_members);
  std::bernoulli_distribution bit(0.5);
  const std::size_t m = count(rng);
  std::vector<Hypothesis> members;
  for (std::size_t i = 0; i < m; ++i) {
    std::string s(n, '0');
    for (auto& c : s) c = bit(rng) ? '1' : '0';
    members.push_back(Hypothesis::FromString(s));
  }
  return HypothesisClass(n, std::move(members));
}

}  // namespace lsdp::oracle

#endif  // LSDP_TESTS_ORACLES_H_
