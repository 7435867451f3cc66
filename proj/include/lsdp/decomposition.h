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

// (p,d)-decomposition trees: validation, greedy construction, exact
// decomposition dimension and essential hypotheses.
//
// A node at depth k carries the restriction path S_v = ((x_1,y_1), ...,
// (x_k,y_k)) and the class H_v = H|S_v. A tree is valid when every node v
// satisfies depth(v) <= p(2^{d-l+1}-1) and every leaf satisfies
// depth <= p(2^{d-l}-1) and is (p 2^{d-l})-irreducible, where l is the
// ldim of the node class. Empty node classes are legal leaves with ldim -1;
// they are vacuously irreducible and never count towards the degree.

#ifndef LSDP_DECOMPOSITION_H_
#define LSDP_DECOMPOSITION_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lsdp/class_index.h"
#include "lsdp/hypothesis.h"

namespace lsdp {

struct DecompositionParams {
  std::int64_t p = 1;
  int d = 0;
};

// Limits for the exponential searches (ddim, essential sets, SOA-class
// enumeration). Exceeding any of them raises BudgetExceededError.
struct SearchLimits {
  std::size_t max_domain = 10;
  std::size_t max_members = 64;
  std::uint64_t max_expansions = 1'000'000;
  // Cap on |H| for subset enumeration in LdimOfSoaClass.
  std::size_t max_enumeration_members = 16;
};

enum class DecompositionMode { kExact, kApproximate };

const char* ModeName(DecompositionMode mode);

// Saturating p * (2^e - 1) and p * 2^e for e >= 0, clamped to INT64_MAX.
std::int64_t InternalDepthBound(std::int64_t p, int d, int ldim);
std::int64_t LeafDepthBound(std::int64_t p, int d, int ldim);
std::int64_t LeafIrreducibility(std::int64_t p, int d, int ldim);

struct DecompositionNode {
  // Split point; absent at leaves.
  std::optional<DomainPoint> point;
  // children[b] follows the edge (point, b); -1 at leaves.
  std::array<int, 2> children = {-1, -1};
  int parent = -1;
  LabeledSequence path;
  MemberSet members;
  int ldim = -1;

  std::size_t depth() const { return path.size(); }
  bool is_leaf() const { return !point.has_value(); }
};

class DecompositionTree {
 public:
  DecompositionTree() = default;
  DecompositionTree(HypothesisClass root_class, DecompositionParams params);

  const HypothesisClass& root_class() const { return root_class_; }
  const DecompositionParams& params() const { return params_; }
  const std::vector<DecompositionNode>& nodes() const { return nodes_; }
  const DecompositionNode& node(std::size_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }

  // Indices of leaves in preorder (0-edge first).
  std::vector<std::size_t> Leaves() const;
  std::vector<std::size_t> Preorder() const;
  // Largest ldim over nonempty leaves; -1 if every leaf is empty.
  int Degree() const;
  HypothesisClass NodeClass(std::size_t i) const;

  // Turns leaf `i` into an internal node split at `x` and returns the
  // indices of the new (x,0) and (x,1) children. Member sets and ldims of
  // the children are filled in from `index`, which must share the root.
  std::array<int, 2> Split(std::size_t i, std::size_t x, ClassIndex& index);

 private:
  friend DecompositionTree ParseTree(std::istream& in, const HypothesisClass& h,
                                     DecompositionParams params);

  HypothesisClass root_class_;
  DecompositionParams params_;
  std::vector<DecompositionNode> nodes_;
};

enum class ViolationKind {
  kRootMismatch,
  kStructure,
  kLdimMismatch,
  kInternalDepth,
  kLeafDepth,
  kReducibleLeaf,
};

const char* ViolationName(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::size_t node = 0;
  std::string message;
};

struct ValidationReport {
  bool valid = true;
  // First violation in preorder; within one node, structure is checked
  // before depth and irreducibility.
  std::optional<Violation> violation;
};

// Checks T for (p,d)-validity and the structural invariants of its
// nodes. Throws DomainMismatchError if T's root class differs from h.
ValidationReport ValidateTree(const DecompositionTree& tree,
                              const HypothesisClass& h);

// Greedy restriction-path construction. Leaves are processed breadth-first;
// a leaf of dimension l is expanded along the shortest SOA-labeled reducing
// sequence whenever one of length <= p 2^{d-l} exists. Throws ParameterError
// when ldim(h) > d or p < 1.
DecompositionTree GreedyDecomposition(const HypothesisClass& h,
                                      DecompositionParams params);

// Exact DDim_{p,d}(h); -1 for the empty class.
int Ddim(const HypothesisClass& h, DecompositionParams params,
         const SearchLimits& limits = {});

struct EssentialSet {
  int t = -1;
  DecompositionMode mode = DecompositionMode::kExact;
  // Sorted canonical order.
  std::vector<Hypothesis> hypotheses;
  // witness_paths[i] leads to a leaf of dimension t whose SOA equals
  // hypotheses[i]; witness_classes[i] is that leaf's class.
  std::vector<LabeledSequence> witness_paths;
  std::vector<HypothesisClass> witness_classes;

  bool Contains(const Hypothesis& f) const;
};

// Essential hypotheses of h at (p,d). In kExact mode this is exactly the set
// of f that occur as the SOA of a dimension-t leaf of every optimal tree. In
// kApproximate mode it is the dimension-t leaf SOAs of the greedy tree.
EssentialSet EssentialHypotheses(const HypothesisClass& h,
                                 DecompositionParams params,
                                 DecompositionMode mode = DecompositionMode::kExact,
                                 const SearchLimits& limits = {});

// SOAs of dimension-t leaves over all optimal trees (t = DDim).
std::vector<Hypothesis> AchievableLeafSoas(const HypothesisClass& h,
                                           DecompositionParams params,
                                           const SearchLimits& limits = {});

// The canonical optimal tree: at every node a valid leaf is preferred,
// otherwise the smallest split point keeping both subtrees optimal.
DecompositionTree CanonicalOptimalTree(const HypothesisClass& h,
                                       DecompositionParams params,
                                       const SearchLimits& limits = {});

struct TraversalResult {
  std::size_t node = 0;
  LabeledSequence path;
};

// Walks from the root following (x, f(x)) at each internal node, stopping
// at a leaf or after step_cap steps.
TraversalResult TraverseWithSoa(const DecompositionTree& tree,
                                const Hypothesis& f, std::int64_t step_cap);

// LDim of {SOA_G : G subset of h, G (d+1)-irreducible}, by enumerating the
// nonempty subsets of h.
int LdimOfSoaClass(const HypothesisClass& h, int d,
                   const SearchLimits& limits = {});

// First internal node u (preorder) whose children violate
// Phi(v1) + Phi(v2) <= Phi(u), Phi(u) = (p 2^d - depth(u))^{ldim(H_u)}.
// Empty children contribute 0.
std::optional<std::size_t> FindPotentialViolation(const DecompositionTree& tree);

// Tree dump: preorder, one node per line, indented by two spaces per level:
//   <depth> <point|LEAF> <edge> <ldim>
// where edge is "-" at the root and "x=b" otherwise.
void WriteTree(std::ostream& out, const DecompositionTree& tree);
// Parses a dump against its root class; member sets are recomputed and the
// recorded ldims are kept as written so the validator can check them.
DecompositionTree ParseTree(std::istream& in, const HypothesisClass& h,
                            DecompositionParams params);

}  // namespace lsdp

#endif  // LSDP_DECOMPOSITION_H_
