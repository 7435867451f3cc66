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

#include "lsdp/hypothesis.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "lsdp/class_index.h"
#include "lsdp/errors.h"

namespace lsdp {

HypothesisClass::HypothesisClass(std::size_t domain_size,
                                 std::vector<Hypothesis> members)
    : domain_size_(domain_size), members_(std::move(members)) {
  for (const Hypothesis& h : members_) {
    if (h.domain_size() != domain_size_) {
      throw DomainMismatchError("member defined on a domain of size " +
                                std::to_string(h.domain_size()) +
                                ", expected " + std::to_string(domain_size_));
    }
  }
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool HypothesisClass::Contains(const Hypothesis& h) const {
  return std::binary_search(members_.begin(), members_.end(), h);
}

bool HypothesisClass::IsSubsetOf(const HypothesisClass& other) const {
  return domain_size_ == other.domain_size_ &&
         std::includes(other.members_.begin(), other.members_.end(),
                       members_.begin(), members_.end());
}

bool Evaluate(const Hypothesis& h, DomainPoint x) {
  if (x.index >= h.domain_size()) {
    throw DomainMismatchError("point " + std::to_string(x.index) +
                              " outside domain of size " +
                              std::to_string(h.domain_size()));
  }
  return h(x.index);
}

std::size_t CountMistakes(const Hypothesis& h,
                          std::span<const LabeledExample> sample) {
  std::size_t mistakes = 0;
  for (const LabeledExample& e : sample) {
    if (Evaluate(h, e.point) != e.label) ++mistakes;
  }
  return mistakes;
}

Rational EmpiricalError(const Hypothesis& h,
                        std::span<const LabeledExample> sample) {
  if (sample.empty()) {
    throw EmptySampleError("empirical error of an empty sample");
  }
  return Rational(static_cast<std::int64_t>(CountMistakes(h, sample)),
                  static_cast<std::int64_t>(sample.size()));
}

bool IsConsistent(const Hypothesis& h, std::span<const LabeledExample> sample) {
  return CountMistakes(h, sample) == 0;
}

HypothesisClass Restrict(const HypothesisClass& h, const LabeledExample& e) {
  return RestrictSeq(h, std::span<const LabeledExample>(&e, 1));
}

HypothesisClass RestrictSeq(const HypothesisClass& h,
                            std::span<const LabeledExample> sample) {
  for (const LabeledExample& e : sample) {
    if (e.point.index >= h.domain_size()) {
      throw DomainMismatchError("example point outside the class domain");
    }
  }
  std::vector<Hypothesis> kept;
  for (const Hypothesis& member : h) {
    if (IsConsistent(member, sample)) kept.push_back(member);
  }
  return HypothesisClass(h.domain_size(), std::move(kept));
}

int Ldim(const HypothesisClass& h) {
  ClassIndex index(h);
  return index.Ldim(index.All());
}

bool Soa(const HypothesisClass& h, DomainPoint x) {
  if (h.empty()) throw UndefinedSoaError("SOA of an empty class is undefined");
  ClassIndex index(h);
  return index.Soa(index.All(), x.index);
}

Hypothesis SoaHypothesis(const HypothesisClass& h) {
  if (h.empty()) throw UndefinedSoaError("SOA of an empty class is undefined");
  ClassIndex index(h);
  return index.SoaHypothesis(index.All());
}

std::optional<std::vector<DomainPoint>> FindReducingSequence(
    const HypothesisClass& h, std::int64_t k) {
  if (h.empty() || k < 1) return std::nullopt;
  ClassIndex index(h);
  const auto& witness = index.ShortestReducingSequence(index.All());
  if (!witness || static_cast<std::int64_t>(witness->size()) > k) {
    return std::nullopt;
  }
  std::vector<DomainPoint> out;
  for (std::size_t x : *witness) out.push_back(DomainPoint{x});
  return out;
}

bool IsIrreducible(const HypothesisClass& h, std::int64_t k) {
  return !FindReducingSequence(h, k).has_value();
}

HypothesisClass ParseClass(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  bool have_size = false;
  std::vector<Hypothesis> members;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (line.empty()) continue;
    if (!have_size) {
      std::istringstream ss(line);
      long long value = -1;
      if (!(ss >> value) || value < 0 || !ss.eof()) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected domain size");
      }
      n = static_cast<std::size_t>(value);
      have_size = true;
      continue;
    }
    if (line.size() != n ||
        line.find_first_not_of("01") != std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(n) + " characters in {0,1}");
    }
    if (!seen.insert(line).second) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": duplicate hypothesis " + line);
    }
    members.push_back(Hypothesis::FromString(line));
  }
  if (!have_size) throw ParseError("class file is empty");
  return HypothesisClass(n, std::move(members));
}

HypothesisClass ReadClassFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open class file " + path);
  return ParseClass(in);
}

void WriteClass(std::ostream& out, const HypothesisClass& h) {
  out << h.domain_size() << "\n";
  for (const Hypothesis& member : h) out << member.ToString() << "\n";
}

LabeledSequence ParseSequence(std::istream& in, std::size_t domain_size) {
  LabeledSequence out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    long long point = -1;
    int label = -1;
    std::string rest;
    if (!(ss >> point >> label) || (ss >> rest) || point < 0 ||
        (label != 0 && label != 1)) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected \"point_index label\"");
    }
    if (static_cast<std::size_t>(point) >= domain_size) {
      throw DomainMismatchError("line " + std::to_string(line_no) + ": point " +
                                std::to_string(point) + " outside domain");
    }
    out.push_back({DomainPoint{static_cast<std::size_t>(point)}, label == 1});
  }
  return out;
}

LabeledSequence ReadSequenceFile(const std::string& path,
                                 std::size_t domain_size) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sequence file " + path);
  return ParseSequence(in, domain_size);
}

void WriteSequence(std::ostream& out, std::span<const LabeledExample> sample) {
  for (const LabeledExample& e : sample) {
    out << e.point.index << " " << (e.label ? 1 : 0) << "\n";
  }
}

}  // namespace lsdp
