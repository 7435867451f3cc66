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

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "lsdp/decomposition.h"
#include "lsdp/errors.h"

namespace lsdp {

void WriteTree(std::ostream& out, const DecompositionTree& tree) {
  for (std::size_t i : tree.Preorder()) {
    const DecompositionNode& v = tree.node(i);
    out << std::string(2 * v.depth(), ' ') << v.depth() << ' ';
    if (v.is_leaf()) {
      out << "LEAF";
    } else {
      out << v.point->index;
    }
    out << ' ';
    if (v.path.empty()) {
      out << '-';
    } else {
      out << v.path.back().point.index << '=' << (v.path.back().label ? 1 : 0);
    }
    out << ' ' << v.ldim << '\n';
  }
}

DecompositionTree ParseTree(std::istream& in, const HypothesisClass& h,
                            DecompositionParams params) {
  ClassIndex index(h);
  DecompositionTree tree;
  tree.root_class_ = h;
  tree.params_ = params;
  // open[k] = most recent node at depth k.
  std::vector<std::size_t> open;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    std::istringstream ss(line);
    long long depth = -1;
    std::string point, edge, extra;
    int ldim = -2;
    if (!(ss >> depth >> point >> edge >> ldim) || (ss >> extra) || depth < 0) {
      throw ParseError(where + "expected \"<depth> <point|LEAF> <edge> <ldim>\"");
    }
    DecompositionNode node;
    node.ldim = ldim;
    if (point != "LEAF") {
      try {
        std::size_t used = 0;
        const unsigned long long x = std::stoull(point, &used);
        if (used != point.size()) throw ParseError(where + "bad point " + point);
        node.point = DomainPoint{static_cast<std::size_t>(x)};
      } catch (const std::logic_error&) {
        throw ParseError(where + "bad point " + point);
      }
    }
    const auto d = static_cast<std::size_t>(depth);
    if (d == 0) {
      if (!tree.nodes_.empty() || edge != "-") {
        throw ParseError(where + "the root must come first with edge \"-\"");
      }
      node.members = index.All();
    } else {
      if (d > open.size()) throw ParseError(where + "depth jumps past its parent");
      const std::size_t parent = open[d - 1];
      DecompositionNode& pv = tree.nodes_[parent];
      const auto eq = edge.find('=');
      if (eq == std::string::npos || eq + 2 != edge.size() ||
          (edge[eq + 1] != '0' && edge[eq + 1] != '1')) {
        throw ParseError(where + "bad edge " + edge);
      }
      std::size_t x = 0;
      try {
        x = std::stoull(edge.substr(0, eq));
      } catch (const std::logic_error&) {
        throw ParseError(where + "bad edge " + edge);
      }
      const int b = edge[eq + 1] - '0';
      if (pv.is_leaf() || pv.point->index != x) {
        throw ParseError(where + "edge does not match the parent's split point");
      }
      if (pv.children[b] != -1) throw ParseError(where + "duplicate edge " + edge);
      if (x >= h.domain_size()) throw ParseError(where + "point outside the domain");
      node.parent = static_cast<int>(parent);
      node.path = pv.path;
      node.path.push_back({DomainPoint{x}, b == 1});
      node.members = index.Restrict(pv.members, x, b == 1);
      pv.children[b] = static_cast<int>(tree.nodes_.size());
    }
    open.resize(d);
    open.push_back(tree.nodes_.size());
    tree.nodes_.push_back(std::move(node));
  }
  if (tree.nodes_.empty()) throw ParseError("tree dump is empty");
  return tree;
}

}  // namespace lsdp
