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

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lsdp/class_index.h"
#include "lsdp/errors.h"
#include "oracles.h"

namespace lsdp {
namespace {

Hypothesis H(const char* bits) { return Hypothesis::FromString(bits); }

HypothesisClass Thresholds(std::size_t n) {
  std::vector<Hypothesis> members;
  for (std::size_t t = 0; t <= n; ++t) {
    std::string s(n, '0');
    for (std::size_t x = t; x < n; ++x) s[x] = '1';
    members.push_back(Hypothesis::FromString(s));
  }
  return HypothesisClass(n, std::move(members));
}

HypothesisClass FullCube(std::size_t n) {
  std::vector<Hypothesis> members;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    std::string s(n, '0');
    for (std::size_t x = 0; x < n; ++x) s[x] = ((m >> x) & 1) ? '1' : '0';
    members.push_back(Hypothesis::FromString(s));
  }
  return HypothesisClass(n, std::move(members));
}

TEST(EvaluateTest, ConstantsAndIndicator) {
  EXPECT_FALSE(Evaluate(Hypothesis::Constant(5, false), DomainPoint{2}));
  EXPECT_TRUE(Evaluate(Hypothesis::Constant(5, true), DomainPoint{4}));
  EXPECT_TRUE(Evaluate(H("00010"), DomainPoint{3}));
  EXPECT_THROW(Evaluate(H("00010"), DomainPoint{5}), DomainMismatchError);
}

TEST(EmpiricalErrorTest, ExactRationals) {
  const LabeledSequence s = {{{0}, true}, {{1}, false}, {{2}, true}, {{3}, true}};
  EXPECT_EQ(EmpiricalError(H("1011"), s), Rational(0));
  EXPECT_EQ(EmpiricalError(H("0100"), s), Rational(1));
  EXPECT_EQ(EmpiricalError(H("1010"), s), Rational(1, 4));
  EXPECT_THROW(EmpiricalError(H("1010"), LabeledSequence{}), EmptySampleError);
}

TEST(RestrictTest, FilterAndPartition) {
  const HypothesisClass h(3, {H("000"), H("111")});
  const HypothesisClass one = Restrict(h, {{1}, true});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], H("111"));
  EXPECT_TRUE(Restrict(one, {{1}, false}).empty());

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const HypothesisClass c = oracle::RandomClass(rng, 5, 12);
    for (std::size_t x = 0; x < 5; ++x) {
      EXPECT_EQ(Restrict(c, {{x}, false}).size() + Restrict(c, {{x}, true}).size(),
                c.size());
    }
  }
}

TEST(RestrictTest, SequenceIsOrderIndependent) {
  const HypothesisClass h = Thresholds(6);
  LabeledSequence s = {{{4}, true}, {{1}, false}, {{3}, true}};
  EXPECT_EQ(RestrictSeq(h, {}), h);
  const HypothesisClass forward = RestrictSeq(h, s);
  std::reverse(s.begin(), s.end());
  EXPECT_EQ(RestrictSeq(h, s), forward);
  EXPECT_TRUE(forward.Contains(H("001111")));
}

TEST(LdimTest, KnownValues) {
  EXPECT_EQ(Ldim(HypothesisClass(4)), -1);
  EXPECT_EQ(Ldim(HypothesisClass(4, {H("0110")})), 0);
  for (std::size_t n = 1; n <= 5; ++n) {
    EXPECT_EQ(Ldim(FullCube(n)), static_cast<int>(n));
  }
  // Thresholds over 7 points; value frozen from the naive recursion.
  EXPECT_EQ(oracle::Ldim(oracle::ToCls(Thresholds(7)), 7), 3);
  EXPECT_EQ(Ldim(Thresholds(7)), 3);
}

TEST(LdimTest, MatchesNaiveRecursion) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const HypothesisClass h = oracle::RandomClass(rng, n, 20);
    EXPECT_EQ(Ldim(h), oracle::Ldim(oracle::ToCls(h), n)) << trial;
  }
}

TEST(LdimTest, MonotoneUnderSubsets) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const HypothesisClass h = oracle::RandomClass(rng, 4, 8);
    ClassIndex index(h);
    const std::uint64_t total = std::uint64_t{1} << h.size();
    for (std::uint64_t a = 0; a < total; ++a) {
      MemberSet sa = index.Empty();
      for (std::size_t i = 0; i < h.size(); ++i) sa.Set(i, (a >> i) & 1);
      // Drop one member at a time.
      for (std::size_t i = sa.FindFirst(); i < sa.size(); i = sa.FindNext(i)) {
        MemberSet sb = sa;
        sb.Set(i, false);
        EXPECT_LE(index.Ldim(sb), index.Ldim(sa));
      }
    }
  }
}

TEST(SoaTest, ConstantsAndEmpty) {
  const HypothesisClass zeros(4, {H("0000")});
  const HypothesisClass ones(4, {H("1111")});
  for (std::size_t x = 0; x < 4; ++x) {
    EXPECT_FALSE(Soa(zeros, DomainPoint{x}));
    EXPECT_TRUE(Soa(ones, DomainPoint{x}));
  }
  EXPECT_THROW(Soa(HypothesisClass(4), DomainPoint{0}), UndefinedSoaError);
  EXPECT_THROW(SoaHypothesis(HypothesisClass(4)), UndefinedSoaError);
  EXPECT_EQ(SoaHypothesis(HypothesisClass(4, {H("0110")})), H("0110"));
}

TEST(SoaTest, DichotomyAndPointwiseAgreement) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const HypothesisClass h = oracle::RandomClass(rng, n, 12);
    const int l = Ldim(h);
    const Hypothesis soa = SoaHypothesis(h);
    EXPECT_EQ(soa.ToString(), oracle::Soa(oracle::ToCls(h), n));
    for (std::size_t x = 0; x < n; ++x) {
      EXPECT_EQ(soa(x), Soa(h, DomainPoint{x}));
      EXPECT_LT(std::min(Ldim(Restrict(h, {{x}, false})),
                         Ldim(Restrict(h, {{x}, true}))),
                l);
    }
  }
}

TEST(SoaTest, ThresholdsOverFourPoints) {
  const HypothesisClass h = Thresholds(4);
  const Hypothesis soa = SoaHypothesis(h);
  for (std::size_t x = 0; x < 4; ++x) EXPECT_EQ(soa(x), Soa(h, DomainPoint{x}));
  EXPECT_EQ(soa.ToString(), oracle::Soa(oracle::ToCls(h), 4));
}

TEST(SoaTest, MistakeBoundOnRealizableSequences) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 6;
    const HypothesisClass h = oracle::RandomClass(rng, n, 16);
    const Hypothesis target = h[rng() % h.size()];
    HypothesisClass version = h;
    int mistakes = 0;
    for (int t = 0; t < 30; ++t) {
      const DomainPoint x{rng() % n};
      const bool y = target(x.index);
      if (Soa(version, x) != y) ++mistakes;
      version = Restrict(version, {x, y});
    }
    EXPECT_LE(mistakes, Ldim(h));
  }
}

TEST(ReducingSequenceTest, DimensionZeroPairsAndReplay) {
  EXPECT_FALSE(FindReducingSequence(HypothesisClass(3, {H("010")}), 3));
  const HypothesisClass pair(2, {H("00"), H("01")});
  ASSERT_EQ(Ldim(pair), 1);
  const auto w = FindReducingSequence(pair, 2);
  ASSERT_TRUE(w.has_value());

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const HypothesisClass h = oracle::RandomClass(rng, 4, 10);
    const Hypothesis soa = SoaHypothesis(h);
    for (int k = 1; k <= 4; ++k) {
      const auto seq = FindReducingSequence(h, k);
      EXPECT_EQ(seq.has_value(),
                oracle::Reducible(oracle::ToCls(h), 4, k)) << trial << " " << k;
      EXPECT_EQ(IsIrreducible(h, k), !seq.has_value());
      if (!seq) continue;
      EXPECT_LE(static_cast<int>(seq->size()), k);
      LabeledSequence path;
      for (DomainPoint x : *seq) path.push_back({x, soa(x.index)});
      EXPECT_LT(Ldim(RestrictSeq(h, path)), Ldim(h));
    }
  }
}

TEST(ReducingSequenceTest, FullCubeNeedsManyPoints) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const HypothesisClass cube = FullCube(n);
    // Each SOA-labeled point removes exactly one dimension.
    EXPECT_TRUE(IsIrreducible(cube, 0));
    for (int k = 1; k <= 3; ++k) {
      EXPECT_EQ(IsIrreducible(cube, k),
                !oracle::Reducible(oracle::ToCls(cube), n, k));
    }
  }
  EXPECT_TRUE(IsIrreducible(Thresholds(5), 0));
}

TEST(ClassFileTest, RoundTripAndErrors) {
  std::stringstream in("3\n010\n111\n\n000\n");
  const HypothesisClass h = ParseClass(in);
  EXPECT_EQ(h.size(), 3u);
  std::stringstream out;
  WriteClass(out, h);
  EXPECT_EQ(out.str(), "3\n000\n010\n111\n");

  std::stringstream dup("2\n01\n01\n");
  EXPECT_THROW(ParseClass(dup), ParseError);
  std::stringstream bad("2\n012\n");
  EXPECT_THROW(ParseClass(bad), ParseError);
}

TEST(SequenceFileTest, RoundTripAndErrors) {
  std::stringstream in("0 1\n3 0\n");
  const LabeledSequence s = ParseSequence(in, 4);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].point.index, 3u);
  EXPECT_FALSE(s[1].label);
  std::stringstream out;
  WriteSequence(out, s);
  EXPECT_EQ(out.str(), "0 1\n3 0\n");
  std::stringstream outside("4 1\n");
  EXPECT_THROW(ParseSequence(outside, 4), DomainMismatchError);
  std::stringstream label("1 2\n");
  EXPECT_THROW(ParseSequence(label, 4), ParseError);
}

TEST(HypothesisClassTest, DeduplicatesAndChecksDomain) {
  const HypothesisClass h(2, {H("11"), H("00"), H("11")});
  EXPECT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0], H("00"));
  EXPECT_THROW(HypothesisClass(3, {H("11")}), DomainMismatchError);
  EXPECT_TRUE(HypothesisClass(2, {H("00")}).IsSubsetOf(h));
}

}  // namespace
}  // namespace lsdp
