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

#include "lsdp/decomposition.h"

#include <algorithm>
#include <limits>
#include <set>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

#include "lsdp/errors.h"

namespace lsdp {
namespace {

constexpr std::int64_t kInt64Max = std::numeric_limits<std::int64_t>::max();
constexpr int kInfeasible = std::numeric_limits<int>::max();

// p * 2^e, saturating; e < 0 yields 0.
std::int64_t ScaledPow2(std::int64_t p, int e) {
  if (e < 0) return 0;
  if (e >= 62) return kInt64Max;
  std::int64_t out = 0;
  if (__builtin_mul_overflow(p, std::int64_t{1} << e, &out)) return kInt64Max;
  return out;
}

// p * (2^e - 1), saturating; e < 0 yields -1 (no depth is admissible).
std::int64_t ScaledPow2Minus1(std::int64_t p, int e) {
  if (e < 0) return -1;
  const std::int64_t scaled = ScaledPow2(p, e);
  return scaled == kInt64Max ? kInt64Max : scaled - p;
}

void CheckParams(const HypothesisClass& h, DecompositionParams params,
                 ClassIndex& index) {
  if (params.p < 1) throw ParameterError("p must be at least 1");
  if (params.d < 0) throw ParameterError("d must be nonnegative");
  const int l = index.Ldim(index.All());
  if (l > params.d) {
    throw ParameterError("ldim(H) = " + std::to_string(l) + " exceeds d = " +
                         std::to_string(params.d));
  }
  (void)h;
}

bool PathLess(const LabeledSequence& a, const LabeledSequence& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(),
      [](const LabeledExample& u, const LabeledExample& v) {
        return std::pair(u.point.index, u.label) <
               std::pair(v.point.index, v.label);
      });
}

// Exact search over valid subtrees. Every node class is a member set of the
// root index; keys pair a member set with a depth, where depth -1 stands for
// "no depth bound can bind in this subtree".
class Searcher {
 public:
  Searcher(ClassIndex& index, DecompositionParams params,
           const SearchLimits& limits, const HypothesisClass& h)
      : index_(index), params_(params), limits_(limits), h_(h) {}

  int Best(const MemberSet& s, std::int64_t depth) {
    const std::size_t count = s.Count();
    if (count == 0) return -1;
    const Key key{s, Normalize(s, count, depth)};
    if (auto it = best_memo_.find(key); it != best_memo_.end()) {
      return it->second;
    }
    Expand();
    const int l = index_.Ldim(s);
    int best = kInfeasible;
    if (LeafValid(s, depth, l)) best = l;
    if (best > 0 && depth <= InternalDepthBound(params_.p, params_.d, l)) {
      for (std::size_t x = 0; x < index_.domain_size() && best > 0; ++x) {
        if (!index_.Splits(s, x)) continue;
        const MemberSet s0 = index_.Restrict(s, x, false);
        const int first = Best(s0, depth + 1);
        if (first >= best) continue;
        const int second = Best(s ^ s0, depth + 1);
        best = std::min(best, std::max(first, second));
      }
    }
    best_memo_.emplace(key, best);
    return best;
  }

  void SetTarget(int t) { t_ = t; }

  // SOAs of dimension-t leaves over feasible subtrees whose leaves all have
  // ldim <= t. Requires Best(s, depth) <= t.
  const std::vector<Hypothesis>& Achievable(const MemberSet& s,
                                            std::int64_t depth) {
    const std::size_t count = s.Count();
    const Key key{s, Normalize(s, count, depth)};
    if (auto it = ach_memo_.find(key); it != ach_memo_.end()) {
      return it->second;
    }
    Expand();
    std::set<Hypothesis> out;
    const int l = count == 0 ? -1 : index_.Ldim(s);
    if (l >= t_) {
      if (l == t_ && LeafValid(s, depth, l)) {
        out.insert(index_.SoaHypothesis(s));
      }
      if (depth <= InternalDepthBound(params_.p, params_.d, l)) {
        for (std::size_t x = 0; x < index_.domain_size(); ++x) {
          if (!index_.Splits(s, x)) continue;
          const MemberSet s0 = index_.Restrict(s, x, false);
          const MemberSet s1 = s ^ s0;
          if (Best(s0, depth + 1) > t_ || Best(s1, depth + 1) > t_) continue;
          for (const MemberSet* child : {&s0, &s1}) {
            const auto& sub = Achievable(*child, depth + 1);
            out.insert(sub.begin(), sub.end());
          }
        }
      }
    }
    return ach_memo_
        .emplace(key, std::vector<Hypothesis>(out.begin(), out.end()))
        .first->second;
  }

  // True if some feasible subtree with leaves <= t has no dimension-t leaf
  // whose SOA is f. Requires Best(s, depth) <= t.
  bool Avoid(const MemberSet& s, std::int64_t depth, const Hypothesis& f,
             std::size_t f_id) {
    const std::size_t count = s.Count();
    if (count == 0) return true;
    const auto& ach = Achievable(s, depth);
    if (!std::binary_search(ach.begin(), ach.end(), f)) return true;
    const AvoidKey key{s, Normalize(s, count, depth), f_id};
    if (auto it = avoid_memo_.find(key); it != avoid_memo_.end()) {
      return it->second;
    }
    Expand();
    const int l = index_.Ldim(s);
    bool avoid = false;
    if (LeafValid(s, depth, l) && l <= t_ &&
        !(l == t_ && index_.SoaHypothesis(s) == f)) {
      avoid = true;
    }
    if (!avoid && depth <= InternalDepthBound(params_.p, params_.d, l)) {
      for (std::size_t x = 0; x < index_.domain_size() && !avoid; ++x) {
        if (!index_.Splits(s, x)) continue;
        const MemberSet s0 = index_.Restrict(s, x, false);
        const MemberSet s1 = s ^ s0;
        if (Best(s0, depth + 1) > t_ || Best(s1, depth + 1) > t_) continue;
        avoid = Avoid(s0, depth + 1, f, f_id) && Avoid(s1, depth + 1, f, f_id);
      }
    }
    avoid_memo_.emplace(key, avoid);
    return avoid;
  }

  // Expands leaf `i` of `tree` into the canonical optimal subtree.
  void BuildCanonical(DecompositionTree& tree, std::size_t i) {
    const MemberSet s = tree.node(i).members;
    const std::int64_t depth = static_cast<std::int64_t>(tree.node(i).depth());
    if (s.None()) return;
    const int l = tree.node(i).ldim;
    if (l <= t_ && LeafValid(s, depth, l)) return;
    for (std::size_t x = 0; x < index_.domain_size(); ++x) {
      if (!index_.Splits(s, x)) continue;
      const MemberSet s0 = index_.Restrict(s, x, false);
      if (Best(s0, depth + 1) > t_ || Best(s ^ s0, depth + 1) > t_) continue;
      const auto kids = tree.Split(i, x, index_);
      BuildCanonical(tree, static_cast<std::size_t>(kids[0]));
      BuildCanonical(tree, static_cast<std::size_t>(kids[1]));
      return;
    }
    throw Error("canonical tree construction reached an infeasible node");
  }

 private:
  struct Key {
    MemberSet s;
    std::int64_t depth;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return k.s.Hash() ^ (static_cast<std::size_t>(k.depth) * 0x9e3779b97f4a7c15ULL);
    }
  };
  struct AvoidKey {
    MemberSet s;
    std::int64_t depth;
    std::size_t f;
    bool operator==(const AvoidKey&) const = default;
  };
  struct AvoidKeyHash {
    std::size_t operator()(const AvoidKey& k) const {
      return KeyHash()(Key{k.s, k.depth}) ^ (k.f * 0xc2b2ae3d27d4eb4fULL);
    }
  };

  // Splitting points strictly shrink the class, so no descendant lies
  // deeper than depth + count - 1, and descendants have ldim <= l, hence
  // looser bounds. If even the tightest bound holds there, depth is moot.
  std::int64_t Normalize(const MemberSet& s, std::size_t count,
                         std::int64_t depth) {
    const int l = index_.Ldim(s);
    const std::int64_t deepest = depth + static_cast<std::int64_t>(count) - 1;
    return deepest <= LeafDepthBound(params_.p, params_.d, l) ? -1 : depth;
  }

  bool LeafValid(const MemberSet& s, std::int64_t depth, int l) {
    if (l < 0) return true;
    return depth <= LeafDepthBound(params_.p, params_.d, l) &&
           index_.IsIrreducible(s, LeafIrreducibility(params_.p, params_.d, l));
  }

  void Expand() {
    if (++expansions_ > limits_.max_expansions) {
      const int greedy = GreedyDecomposition(h_, params_).Degree();
      throw BudgetExceededError(
          "decomposition search exceeded " +
              std::to_string(limits_.max_expansions) + " node expansions",
          greedy);
    }
  }

  ClassIndex& index_;
  DecompositionParams params_;
  SearchLimits limits_;
  const HypothesisClass& h_;
  int t_ = -1;
  std::uint64_t expansions_ = 0;
  std::unordered_map<Key, int, KeyHash> best_memo_;
  std::unordered_map<Key, std::vector<Hypothesis>, KeyHash> ach_memo_;
  std::unordered_map<AvoidKey, bool, AvoidKeyHash> avoid_memo_;
};

void CheckLimits(const HypothesisClass& h, DecompositionParams params,
                 const SearchLimits& limits) {
  if (h.domain_size() > limits.max_domain || h.size() > limits.max_members) {
    const int greedy = GreedyDecomposition(h, params).Degree();
    throw BudgetExceededError(
        "instance too large for exact search: |X| = " +
            std::to_string(h.domain_size()) + ", |H| = " +
            std::to_string(h.size()),
        greedy);
  }
}

// ddim is 0 without search when h is a singleton, or when p >= |X| and
// d >= 1: every leaf of dimension >= 1 is then reducible within its budget
// (restricting by its own SOA on all points isolates at most one member),
// while splitting down to singletons never exceeds the depth bounds.
bool TriviallyZero(const HypothesisClass& h, DecompositionParams params) {
  if (h.size() == 1) return true;
  return params.d >= 1 &&
         params.p >= static_cast<std::int64_t>(h.domain_size());
}

// Restriction path isolating h: ascending points at which the remaining
// class still disagrees, labeled by h.
LabeledSequence IsolatingPath(ClassIndex& index, std::size_t member) {
  const Hypothesis& h = index.root()[member];
  MemberSet s = index.All();
  LabeledSequence path;
  for (std::size_t x = 0; x < index.domain_size() && s.Count() > 1; ++x) {
    if (!index.Splits(s, x)) continue;
    s = index.Restrict(s, x, h(x));
    path.push_back({DomainPoint{x}, h(x)});
  }
  return path;
}

EssentialSet AllMembers(const HypothesisClass& h, DecompositionMode mode) {
  ClassIndex index(h);
  EssentialSet out;
  out.t = 0;
  out.mode = mode;
  for (std::size_t i = 0; i < h.size(); ++i) {
    out.hypotheses.push_back(h[i]);
    out.witness_paths.push_back(IsolatingPath(index, i));
    out.witness_classes.push_back(HypothesisClass(h.domain_size(), {h[i]}));
  }
  return out;
}

}  // namespace

const char* ModeName(DecompositionMode mode) {
  return mode == DecompositionMode::kExact ? "EXACT" : "APPROXIMATE";
}

std::int64_t InternalDepthBound(std::int64_t p, int d, int ldim) {
  return ScaledPow2Minus1(p, d - ldim + 1);
}

std::int64_t LeafDepthBound(std::int64_t p, int d, int ldim) {
  return ScaledPow2Minus1(p, d - ldim);
}

std::int64_t LeafIrreducibility(std::int64_t p, int d, int ldim) {
  return ScaledPow2(p, d - ldim);
}

DecompositionTree::DecompositionTree(HypothesisClass root_class,
                                     DecompositionParams params)
    : root_class_(std::move(root_class)), params_(params) {
  ClassIndex index(root_class_);
  DecompositionNode root;
  root.members = index.All();
  root.ldim = index.Ldim(root.members);
  nodes_.push_back(std::move(root));
}

std::vector<std::size_t> DecompositionTree::Preorder() const {
  std::vector<std::size_t> order;
  if (nodes_.empty()) return order;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    order.push_back(i);
    const auto& kids = nodes_[i].children;
    for (int b : {1, 0}) {
      if (kids[b] >= 0 && static_cast<std::size_t>(kids[b]) < nodes_.size()) {
        stack.push_back(static_cast<std::size_t>(kids[b]));
      }
    }
  }
  return order;
}

std::vector<std::size_t> DecompositionTree::Leaves() const {
  std::vector<std::size_t> leaves;
  for (std::size_t i : Preorder()) {
    if (nodes_[i].is_leaf()) leaves.push_back(i);
  }
  return leaves;
}

int DecompositionTree::Degree() const {
  int degree = -1;
  for (std::size_t i : Leaves()) {
    if (nodes_[i].members.Any()) degree = std::max(degree, nodes_[i].ldim);
  }
  return degree;
}

HypothesisClass DecompositionTree::NodeClass(std::size_t i) const {
  const MemberSet& s = nodes_[i].members;
  std::vector<Hypothesis> members;
  for (std::size_t m = s.FindFirst(); m < s.size(); m = s.FindNext(m)) {
    members.push_back(root_class_[m]);
  }
  return HypothesisClass(root_class_.domain_size(), std::move(members));
}

std::array<int, 2> DecompositionTree::Split(std::size_t i, std::size_t x,
                                            ClassIndex& index) {
  nodes_[i].point = DomainPoint{x};
  std::array<int, 2> kids{};
  for (int b : {0, 1}) {
    DecompositionNode child;
    child.parent = static_cast<int>(i);
    child.path = nodes_[i].path;
    child.path.push_back({DomainPoint{x}, b == 1});
    child.members = index.Restrict(nodes_[i].members, x, b == 1);
    child.ldim = index.Ldim(child.members);
    kids[b] = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(child));
  }
  nodes_[i].children = kids;
  return kids;
}

const char* ViolationName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kRootMismatch:
      return "root-mismatch";
    case ViolationKind::kStructure:
      return "structure";
    case ViolationKind::kLdimMismatch:
      return "ldim-mismatch";
    case ViolationKind::kInternalDepth:
      return "internal-depth";
    case ViolationKind::kLeafDepth:
      return "leaf-depth";
    case ViolationKind::kReducibleLeaf:
      return "reducible-leaf";
  }
  return "unknown";
}

ValidationReport ValidateTree(const DecompositionTree& tree,
                              const HypothesisClass& h) {
  if (!(tree.root_class() == h)) {
    throw DomainMismatchError("tree root class differs from the given class");
  }
  ValidationReport report;
  auto fail = [&report](ViolationKind kind, std::size_t node,
                        std::string message) {
    report.valid = false;
    report.violation = Violation{kind, node, std::move(message)};
    return report;
  };
  if (tree.size() == 0) {
    return fail(ViolationKind::kStructure, 0, "tree has no root");
  }
  ClassIndex index(h);
  const auto& p = tree.params();
  const auto& nodes = tree.nodes();
  const std::string at = "node ";

  if (!nodes[0].path.empty() || nodes[0].members != index.All() ||
      nodes[0].parent != -1) {
    return fail(ViolationKind::kRootMismatch, 0,
                "root must have an empty path and the full class");
  }
  std::vector<char> seen(nodes.size(), 0);
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const DecompositionNode& v = nodes[i];
    const std::string where = at + std::to_string(i);
    if (seen[i]) return fail(ViolationKind::kStructure, i, where + " reached twice");
    seen[i] = 1;
    if (v.members.size() != index.num_members()) {
      return fail(ViolationKind::kStructure, i, where + " has a malformed member set");
    }
    if (!v.is_leaf()) {
      if (v.point->index >= h.domain_size()) {
        return fail(ViolationKind::kStructure, i, where + " splits outside the domain");
      }
      for (int b : {0, 1}) {
        const int c = v.children[b];
        if (c < 0 || static_cast<std::size_t>(c) >= nodes.size()) {
          return fail(ViolationKind::kStructure, i,
                      where + " is missing its " + std::to_string(b) + "-child");
        }
        const DecompositionNode& child = nodes[c];
        LabeledSequence expected = v.path;
        expected.push_back({*v.point, b == 1});
        if (child.parent != static_cast<int>(i) || child.path != expected ||
            child.members != index.Restrict(v.members, v.point->index, b == 1)) {
          return fail(ViolationKind::kStructure, static_cast<std::size_t>(c),
                      at + std::to_string(c) +
                          " is inconsistent with its parent edge");
        }
      }
    } else if (v.children[0] != -1 || v.children[1] != -1) {
      return fail(ViolationKind::kStructure, i, where + " is a leaf with children");
    }
    const int l = index.Ldim(v.members);
    if (v.ldim != l) {
      return fail(ViolationKind::kLdimMismatch, i,
                  where + " records ldim " + std::to_string(v.ldim) +
                      " but its class has ldim " + std::to_string(l));
    }
    const auto depth = static_cast<std::int64_t>(v.depth());
    const std::int64_t node_bound = InternalDepthBound(p.p, p.d, l);
    if (depth > node_bound) {
      return fail(ViolationKind::kInternalDepth, i,
                  where + " has depth " + std::to_string(depth) + " > " +
                      std::to_string(node_bound));
    }
    if (v.is_leaf()) {
      const std::int64_t leaf_bound = LeafDepthBound(p.p, p.d, l);
      if (depth > leaf_bound) {
        return fail(ViolationKind::kLeafDepth, i,
                    where + " is a leaf at depth " + std::to_string(depth) +
                        " > " + std::to_string(leaf_bound));
      }
      const std::int64_t k = LeafIrreducibility(p.p, p.d, l);
      if (l >= 0 && !index.IsIrreducible(v.members, k)) {
        return fail(ViolationKind::kReducibleLeaf, i,
                    where + " is a " + std::to_string(k) + "-reducible leaf");
      }
    } else {
      stack.push_back(static_cast<std::size_t>(v.children[1]));
      stack.push_back(static_cast<std::size_t>(v.children[0]));
    }
  }
  return report;
}

DecompositionTree GreedyDecomposition(const HypothesisClass& h,
                                      DecompositionParams params) {
  ClassIndex index(h);
  CheckParams(h, params, index);
  DecompositionTree tree(h, params);
  auto less = [&tree](std::size_t a, std::size_t b) {
    const auto& pa = tree.node(a).path;
    const auto& pb = tree.node(b).path;
    if (PathLess(pa, pb)) return true;
    if (PathLess(pb, pa)) return false;
    return a < b;
  };
  std::set<std::size_t, decltype(less)> pending(less);
  pending.insert(0);
  while (!pending.empty()) {
    const std::size_t i = *pending.begin();
    pending.erase(pending.begin());
    const int l = tree.node(i).ldim;
    if (l <= 0) continue;
    const MemberSet s = tree.node(i).members;
    const auto& witness = index.ShortestReducingSequence(s);
    if (!witness ||
        static_cast<std::int64_t>(witness->size()) >
            LeafIrreducibility(params.p, params.d, l)) {
      continue;
    }
    const Hypothesis soa = index.SoaHypothesis(s);
    const std::vector<std::size_t> points = *witness;
    std::size_t cur = i;
    for (std::size_t x : points) {
      const auto kids = tree.Split(cur, x, index);
      const int along = soa(x) ? 1 : 0;
      pending.insert(static_cast<std::size_t>(kids[1 - along]));
      cur = static_cast<std::size_t>(kids[along]);
    }
    pending.insert(cur);
  }
  return tree;
}

int Ddim(const HypothesisClass& h, DecompositionParams params,
         const SearchLimits& limits) {
  ClassIndex index(h);
  CheckParams(h, params, index);
  if (h.empty()) return -1;
  if (TriviallyZero(h, params)) return 0;
  CheckLimits(h, params, limits);
  Searcher search(index, params, limits, h);
  return search.Best(index.All(), 0);
}

bool EssentialSet::Contains(const Hypothesis& f) const {
  return std::binary_search(hypotheses.begin(), hypotheses.end(), f);
}

std::vector<Hypothesis> AchievableLeafSoas(const HypothesisClass& h,
                                           DecompositionParams params,
                                           const SearchLimits& limits) {
  ClassIndex index(h);
  CheckParams(h, params, index);
  if (h.empty()) return {};
  if (TriviallyZero(h, params)) return h.members();
  CheckLimits(h, params, limits);
  Searcher search(index, params, limits, h);
  search.SetTarget(search.Best(index.All(), 0));
  return search.Achievable(index.All(), 0);
}

DecompositionTree CanonicalOptimalTree(const HypothesisClass& h,
                                       DecompositionParams params,
                                       const SearchLimits& limits) {
  ClassIndex index(h);
  CheckParams(h, params, index);
  DecompositionTree tree(h, params);
  if (h.empty()) return tree;
  CheckLimits(h, params, limits);
  Searcher search(index, params, limits, h);
  search.SetTarget(search.Best(index.All(), 0));
  search.BuildCanonical(tree, 0);
  return tree;
}

EssentialSet EssentialHypotheses(const HypothesisClass& h,
                                 DecompositionParams params,
                                 DecompositionMode mode,
                                 const SearchLimits& limits) {
  ClassIndex index(h);
  CheckParams(h, params, index);
  EssentialSet out;
  out.mode = mode;
  if (h.empty()) return out;
  if (TriviallyZero(h, params)) return AllMembers(h, mode);

  if (mode == DecompositionMode::kApproximate) {
    const DecompositionTree tree = GreedyDecomposition(h, params);
    out.t = tree.Degree();
    if (out.t == 0) return AllMembers(h, mode);
    std::vector<std::pair<Hypothesis, std::size_t>> found;
    for (std::size_t leaf : tree.Leaves()) {
      const auto& node = tree.node(leaf);
      if (node.ldim != out.t || node.members.None()) continue;
      found.emplace_back(index.SoaHypothesis(node.members), leaf);
    }
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [f, leaf] : found) {
      if (!out.hypotheses.empty() && out.hypotheses.back() == f) continue;
      out.hypotheses.push_back(f);
      out.witness_paths.push_back(tree.node(leaf).path);
      out.witness_classes.push_back(tree.NodeClass(leaf));
    }
    return out;
  }

  CheckLimits(h, params, limits);
  Searcher search(index, params, limits, h);
  const MemberSet all = index.All();
  out.t = search.Best(all, 0);
  if (out.t == 0) return AllMembers(h, mode);
  search.SetTarget(out.t);
  const std::vector<Hypothesis> pool = search.Achievable(all, 0);
  for (std::size_t id = 0; id < pool.size(); ++id) {
    if (!search.Avoid(all, 0, pool[id], id)) out.hypotheses.push_back(pool[id]);
  }
  if (out.hypotheses.empty()) return out;

  DecompositionTree canonical(h, params);
  search.BuildCanonical(canonical, 0);
  for (const Hypothesis& f : out.hypotheses) {
    bool found = false;
    for (std::size_t leaf : canonical.Leaves()) {
      const auto& node = canonical.node(leaf);
      if (node.ldim == out.t && index.SoaHypothesis(node.members) == f) {
        out.witness_paths.push_back(node.path);
        out.witness_classes.push_back(canonical.NodeClass(leaf));
        found = true;
        break;
      }
    }
    if (!found) throw Error("essential hypothesis missing from the canonical tree");
  }
  return out;
}

TraversalResult TraverseWithSoa(const DecompositionTree& tree,
                                const Hypothesis& f, std::int64_t step_cap) {
  if (f.domain_size() != tree.root_class().domain_size()) {
    throw DomainMismatchError("traversal hypothesis has the wrong domain");
  }
  TraversalResult out;
  if (tree.size() == 0) return out;
  std::int64_t steps = 0;
  while (steps < step_cap && !tree.node(out.node).is_leaf()) {
    const auto& v = tree.node(out.node);
    const bool b = f(v.point->index);
    out.path.push_back({*v.point, b});
    out.node = static_cast<std::size_t>(v.children[b ? 1 : 0]);
    ++steps;
  }
  return out;
}

int LdimOfSoaClass(const HypothesisClass& h, int d, const SearchLimits& limits) {
  ClassIndex index(h);
  if (index.Ldim(index.All()) > d) {
    throw ParameterError("ldim(H) exceeds d");
  }
  if (h.size() > limits.max_enumeration_members || h.size() >= 63) {
    throw BudgetExceededError("too many members to enumerate subsets", -2);
  }
  const std::uint64_t total = std::uint64_t{1} << h.size();
  std::vector<Hypothesis> soas;
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    MemberSet s = index.Empty();
    for (std::size_t i = 0; i < h.size(); ++i) {
      if ((mask >> i) & 1u) s.Set(i, true);
    }
    if (index.IsIrreducible(s, d + 1)) soas.push_back(index.SoaHypothesis(s));
  }
  return Ldim(HypothesisClass(h.domain_size(), std::move(soas)));
}

std::optional<std::size_t> FindPotentialViolation(const DecompositionTree& tree) {
  using boost::multiprecision::cpp_int;
  const auto& params = tree.params();
  const cpp_int top = cpp_int(params.p) << params.d;
  auto phi = [&](const DecompositionNode& v) -> cpp_int {
    if (v.members.None() || v.ldim < 0) return 0;
    return boost::multiprecision::pow(top - v.depth(),
                                      static_cast<unsigned>(v.ldim));
  };
  for (std::size_t i : tree.Preorder()) {
    const auto& u = tree.node(i);
    if (u.is_leaf()) continue;
    if (phi(tree.node(u.children[0])) + phi(tree.node(u.children[1])) > phi(u)) {
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace lsdp
