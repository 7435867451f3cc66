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

#include "lsdp/mechanisms.h"

#include <gtest/gtest.h>

#include <cmath>

#include "lsdp/errors.h"

namespace lsdp {
namespace {

Hypothesis H(const char* bits) { return Hypothesis::FromString(bits); }

TEST(RngTest, DerivedStreamsAreReproducibleAndDistinct) {
  EXPECT_EQ(DeriveSeed(7, 3), DeriveSeed(7, 3));
  EXPECT_NE(DeriveSeed(7, 3), DeriveSeed(7, 4));
  EXPECT_NE(DeriveSeed(7, 3), DeriveSeed(8, 3));
  Rng a(1), b(1);
  std::vector<int> xs = {0, 1, 2, 3, 4, 5, 6, 7};
  std::vector<int> ys = xs;
  Shuffle(xs, a);
  Shuffle(ys, b);
  EXPECT_EQ(xs, ys);
  std::sort(xs.begin(), xs.end());
  EXPECT_EQ(xs, (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7}));
  for (int i = 0; i < 1000; ++i) {
    const double u = UniformOpen01(a);
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(UniformIndex(a, 3), 3u);
  }
}

TEST(LaplaceTest, MomentsAndTail) {
  Rng rng(42);
  const int n = 1'000'000;
  double sum = 0.0;
  int beyond = 0;
  for (int i = 0; i < n; ++i) {
    const double z = Laplace(1.0, rng);
    sum += z;
    if (std::abs(z) > std::log(2.0)) ++beyond;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(static_cast<double>(beyond) / n, 0.5, 0.01);
  EXPECT_THROW(Laplace(0.0, rng), ParameterError);
}

TEST(LaplaceTest, FixedSeedIsDeterministic) {
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(Laplace(2.0, a), Laplace(2.0, b));
}

TEST(CandidateListTest, TruncatesInCanonicalOrder) {
  const CandidateList list =
      MakeCandidateList({H("11"), H("01"), H("10"), H("01"), H("00")}, 2);
  ASSERT_EQ(list.items.size(), 2u);
  EXPECT_EQ(list.items[0], H("00"));
  EXPECT_EQ(list.items[1], H("01"));
}

TEST(SparseSampleTest, TwoPointSoftmax) {
  std::vector<CandidateList> lists(3, MakeCandidateList({H("01")}, 4));
  const auto probs = SparseSampleDistribution(lists, 1.0, 1.0);
  ASSERT_EQ(probs.size(), 2u);
  EXPECT_NEAR(probs[0], std::exp(3.0) / (std::exp(3.0) + std::exp(1.0)), 1e-12);
  EXPECT_NEAR(probs[0], 0.8808, 1e-4);
}

TEST(SparseSampleTest, EmptyListsAlwaysFail) {
  std::vector<CandidateList> lists(4);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(SparseSample(lists, 1.0, 0.5, rng).is_bottom());
  EXPECT_DOUBLE_EQ(BottomProbability(lists, 1.0, 0.5), 1.0);
  EXPECT_THROW(SparseSample(lists, 1.0, -INFINITY, rng), ParameterError);
}

TEST(SparseSampleTest, EmpiricalFrequenciesMatchSoftmax) {
  // Five lists; scores 5, 3, 1 for a, b, c.
  const Hypothesis a = H("000"), b = H("011"), c = H("111");
  std::vector<CandidateList> lists = {
      MakeCandidateList({a, b, c}, 8), MakeCandidateList({a, b}, 8),
      MakeCandidateList({a, b}, 8), MakeCandidateList({a}, 8),
      MakeCandidateList({a}, 8)};
  const double eps = 0.5, bottom = 2.0;
  const double za = std::exp(eps * 5), zb = std::exp(eps * 3),
               zc = std::exp(eps * 1), zbot = std::exp(eps * bottom);
  const double z = za + zb + zc + zbot;
  const std::vector<double> expected = {za / z, zb / z, zc / z, zbot / z};
  std::vector<int> counts(4, 0);
  Rng rng(99);
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    const auto out = SparseSample(lists, eps, bottom, rng);
    if (out.is_bottom()) {
      ++counts[3];
      EXPECT_EQ(out.score, bottom);
    } else if (*out.hypothesis == a) {
      ++counts[0];
    } else if (*out.hypothesis == b) {
      ++counts[1];
    } else {
      ++counts[2];
    }
  }
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(static_cast<double>(counts[i]) / n, expected[i], 0.01) << i;
  }
  EXPECT_NEAR(BottomProbability(lists, eps, bottom), expected[3], 1e-12);
}

TEST(SparseSampleTest, BottomProbabilityLowerBound) {
  const int k = 20;
  std::vector<CandidateList> lists(k, MakeCandidateList({H("10")}, 1));
  const double eps = 1.0, bottom = k / 10.0;
  const double p = BottomProbability(lists, eps, bottom);
  EXPECT_LT(p, 0.01);
  EXPECT_GE(p, std::exp(eps * bottom) / (1 * std::exp(eps * k) + std::exp(eps * bottom)) - 1e-15);
}

TEST(SparseSampleTest, PrivacyPrecondition) {
  EXPECT_TRUE(CheckSparsePrivacyPrecondition(1, 10.0, 0.5, 1.0));
  EXPECT_FALSE(CheckSparsePrivacyPrecondition(1, 1.0, 0.5, 0.0));
  EXPECT_FALSE(CheckSparsePrivacyPrecondition(5, 1.0, 1e-6, 0.0));
  EXPECT_NEAR(SparseSampleMinBottomScore(1, 10.0, 0.5), std::log(2.0), 1e-12);
}

TEST(AboveThresholdTest, NoiselessComparisons) {
  Rng rng(1);
  AboveThreshold at(5.0, 1.0, 10, CountingMode::kAbove, /*noiseless=*/true);
  EXPECT_EQ(at.Query(5.0, rng), ThresholdOutcome::kAbove);
  EXPECT_EQ(at.Query(4.0, rng), ThresholdOutcome::kBelow);
  EXPECT_EQ(at.counter(), 1);
}

TEST(AboveThresholdTest, HaltsPastBudget) {
  Rng rng(1);
  AboveThreshold below(0.0, 1.0, 2, CountingMode::kBelow, true);
  EXPECT_EQ(below.Query(-1, rng), ThresholdOutcome::kBelow);
  EXPECT_EQ(below.Query(1, rng), ThresholdOutcome::kAbove);
  EXPECT_EQ(below.Query(-1, rng), ThresholdOutcome::kBelow);
  EXPECT_EQ(below.Query(-1, rng), ThresholdOutcome::kHalted);
  EXPECT_TRUE(below.halted());
  EXPECT_EQ(below.Query(1, rng), ThresholdOutcome::kHalted);
  EXPECT_EQ(below.counter(), 2);
}

TEST(AboveThresholdTest, TailFrequencyMatchesLaplace) {
  const double eps = 0.5;
  const double m = 2.0;
  Rng rng(17);
  AboveThreshold at(0.0, eps, 1'000'000, CountingMode::kBelow);
  int above = 0;
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    if (at.Query(-m, rng) == ThresholdOutcome::kAbove) ++above;
  }
  EXPECT_NEAR(static_cast<double>(above) / n, 0.5 * std::exp(-eps * m), 0.01);
}

TEST(LedgerTest, BasicComposition) {
  BudgetLedger one({1.0, 1e-5});
  one.Add("x", 0.7, 1e-6);
  EXPECT_DOUBLE_EQ(one.Basic().epsilon, 0.7);
  EXPECT_DOUBLE_EQ(one.Basic().delta, 1e-6);
  BudgetLedger two({1.0, 1e-5});
  two.Add("a", 0.3, 0.0);
  two.Add("b", 0.3, 0.0);
  EXPECT_DOUBLE_EQ(two.Basic().epsilon, 0.6);
  EXPECT_TRUE(two.WithinTarget());
}

TEST(LedgerTest, AdvancedCompositionFormula) {
  BudgetLedger ledger({10.0, 1e-3}, 1e-6);
  ledger.Add("sparse", 0.01, 0.0, 100);
  const double expected =
      std::sqrt(2 * 100 * std::log(1e6)) * 0.01 + 100 * 0.01 * (std::exp(0.01) - 1);
  EXPECT_NEAR(ledger.Advanced().epsilon, expected, 1e-12);
  EXPECT_NEAR(ledger.Advanced().delta, 1e-6, 1e-18);
  // Same total split into individual entries.
  BudgetLedger split({10.0, 1e-3}, 1e-6);
  for (int i = 0; i < 100; ++i) split.Add("sparse", 0.01, 0.0);
  EXPECT_NEAR(split.Advanced().epsilon, expected, 1e-12);

  BudgetLedger many({10.0, 1e-3}, 1e-6);
  many.Add("tiny", 0.001, 0.0, 100000);
  EXPECT_LT(many.Advanced().epsilon, many.Basic().epsilon);
  EXPECT_EQ(many.Best().epsilon, many.Advanced().epsilon);
}

TEST(LedgerTest, BlockCostAndCertification) {
  const double block = AboveThresholdBlockEpsilon(0.1, 4, 1e-3);
  EXPECT_NEAR(block, 0.1 * (std::sqrt(32 * std::log(2000.0)) + std::log(2000.0)), 1e-12);
  EXPECT_NEAR(AboveThresholdQueryEpsilon(block, 4, 1e-3), 0.1, 1e-12);
  BudgetLedger ledger({1.0, 1e-3});
  EXPECT_FALSE(ledger.AddSparseSample("s", 10, 1.0, 1e-3, 2.0));
  EXPECT_FALSE(ledger.AllCertified());
  EXPECT_DOUBLE_EQ(ledger.Basic().epsilon, 2.0);
}

TEST(DpAuditTest, IdenticalNeighborsPass) {
  const AuditedMechanism coin = [](Rng& rng) {
    return UniformIndex(rng, 2) ? std::string("h") : std::string("t");
  };
  const AuditReport r = DpAudit("coin", coin, coin, 20000, 0.1, 0.0, 3);
  EXPECT_TRUE(r.passed()) << r.max_ratio_violation;
  EXPECT_NE(FormatAuditReport(r).find("max_ratio_violation"), std::string::npos);
}

TEST(DpAuditTest, NoiselessMechanismIsFlagged) {
  const AuditedMechanism zero = [](Rng&) { return std::string("0"); };
  const AuditedMechanism one = [](Rng&) { return std::string("1"); };
  const AuditReport r = DpAudit("broken", zero, one, 10000, 1.0, 1e-3, 3);
  EXPECT_FALSE(r.passed());
  EXPECT_GT(r.max_ratio_violation, 0.9);
  EXPECT_THROW(DpAudit("few", zero, one, 100, 1.0, 0.0, 3), ParameterError);
}

TEST(DpAuditTest, SparseSampleAtCompliantParameters) {
  const double eps = 1.0, delta = 0.05;
  const double bottom = SparseSampleMinBottomScore(1, eps, delta);
  std::vector<CandidateList> d(30, MakeCandidateList({H("01")}, 1));
  std::vector<CandidateList> nb(d.begin(), d.end() - 1);
  auto run = [&](const std::vector<CandidateList>& lists) {
    return [&lists, eps, bottom](Rng& rng) {
      const auto out = SparseSample(lists, eps, bottom, rng);
      return out.is_bottom() ? std::string("bot") : out.hypothesis->ToString();
    };
  };
  const AuditReport r = DpAudit("sparse", run(d), run(nb), 50000, 2 * eps, delta, 8);
  EXPECT_TRUE(r.passed()) << FormatAuditReport(r);
}

}  // namespace
}  // namespace lsdp
