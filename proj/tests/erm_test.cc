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

#include "lsdp/erm.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

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

LabeledSequence UniformSample(const Hypothesis& target, std::size_t n, Rng& rng) {
  LabeledSequence out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t x = UniformIndex(rng, target.domain_size());
    out.push_back({DomainPoint{x}, target(x)});
  }
  return out;
}

ErmConfig DeskConfig() {
  ErmConfig c;
  c.alpha = Rational(1, 5);
  c.privacy = {1.0, 1e-3};
  c.d = 3;
  c.k = 600;
  return c;
}

TEST(ErmConfigTest, DefaultsAndValidation) {
  ErmConfig c;
  c.d = 3;
  EXPECT_EQ(c.InternalAlpha(), Rational(1, 10));
  EXPECT_EQ(c.Gamma(), Rational(5, 6));
  EXPECT_EQ(c.EgoodSlack(), Rational(1, 15));
  EXPECT_NO_THROW(c.Validate());
  c.alpha = Rational(1);
  EXPECT_THROW(c.Validate(), ParameterError);
  c.alpha = Rational(1, 5);
  c.k = 0;
  EXPECT_THROW(c.Validate(), ParameterError);
  c.k = 3;
  c.privacy.delta = 0.0;
  EXPECT_THROW(c.Validate(), ParameterError);
}

TEST(PartitionTest, EqualChunksAndRemainderDiscarded) {
  Rng rng(1);
  const LabeledSequence s = UniformSample(H("0011"), 23, rng);
  const ChunkPartition part = PartitionIntoChunks(s, 5, rng);
  ASSERT_EQ(part.chunks.size(), 5u);
  EXPECT_EQ(part.chunk_size(), 4u);
  EXPECT_EQ(part.order.size(), 20u);
  std::vector<std::size_t> sorted = part.order;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (std::size_t r = 0; r < part.order.size(); ++r) {
    EXPECT_EQ(part.chunks[r / 4][r % 4], s[part.order[r]]);
  }
  EXPECT_THROW(PartitionIntoChunks(s, 24, rng), EmptySampleError);
}

TEST(DefineThresholdClassesTest, TargetAlwaysRetained) {
  const HypothesisClass h = Thresholds(6);
  const Hypothesis target = h[2];
  Rng rng(2);
  const LabeledSequence s = UniformSample(target, 60, rng);
  const ChunkPartition part = PartitionIntoChunks(s, 4, rng);
  for (int j = 1; j <= 5; ++j) {
    for (const HypothesisClass& c :
         DefineThresholdClasses(h, part, j, Rational(1, 4), Rational(3, 4))) {
      EXPECT_TRUE(c.Contains(target));
    }
  }
}

TEST(DefineThresholdClassesTest, SmallThresholdKeepsOnlyConsistent) {
  const HypothesisClass h = Thresholds(6);
  Rng rng(3);
  const LabeledSequence s = UniformSample(h[3], 40, rng);
  const ChunkPartition part = PartitionIntoChunks(s, 4, rng);
  // (1/2)^5 / 4 < 1/10 = 1/|S_i|.
  const auto classes = DefineThresholdClasses(h, part, 5, Rational(1, 4), Rational(1, 2));
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (const Hypothesis& member : h) {
      EXPECT_EQ(classes[i].Contains(member), IsConsistent(member, part.chunks[i]));
    }
  }
}

TEST(DefineThresholdClassesTest, ExactBoundary) {
  const HypothesisClass h(2, {H("00"), H("01"), H("11")});
  const LabeledSequence chunk = {{DomainPoint{0}, false}, {DomainPoint{0}, false},
                                 {DomainPoint{1}, true}, {DomainPoint{1}, false}};
  const ChunkPartition part = PartitionFromOrder(chunk, 1, {0, 1, 2, 3});
  // Errors: 00 -> 1/4, 01 -> 1/4, 11 -> 3/4. Threshold (1/2)^1 * (1/2) = 1/4.
  const auto classes = DefineThresholdClasses(h, part, 1, Rational(1, 2), Rational(1, 2));
  EXPECT_EQ(classes[0], HypothesisClass(2, {H("00"), H("01")}));
}

TEST(CheckEgoodTest, SingleChunkAlwaysHolds) {
  const HypothesisClass h = Thresholds(5);
  Rng rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    const LabeledSequence s = UniformSample(h[UniformIndex(rng, h.size())], 7, rng);
    const ChunkPartition part = PartitionIntoChunks(s, 1, rng);
    EXPECT_TRUE(CheckEgood(h, s, part, Rational(1, 5), Rational(1, 5)));
  }
}

TEST(CheckEgoodTest, AdversarialPartitionFails) {
  // Target 0000; hypothesis 1111 errs everywhere, 0001 errs only on point 3.
  const HypothesisClass h(4, {H("0000"), H("0001")});
  LabeledSequence s;
  for (int i = 0; i < 8; ++i) {
    s.push_back({DomainPoint{static_cast<std::size_t>(i % 4)}, false});
  }
  // Both examples at point 3 (indices 3 and 7) go to the first chunk.
  const ChunkPartition part = PartitionFromOrder(s, 2, {3, 7, 0, 1, 2, 4, 5, 6});
  EXPECT_FALSE(CheckEgood(h, s, part, Rational(1, 5), Rational(1, 5)));
  const ChunkPartition fair = PartitionFromOrder(s, 2, {0, 1, 2, 3, 4, 5, 6, 7});
  EXPECT_TRUE(CheckEgood(h, s, fair, Rational(1, 5), Rational(1, 5)));
}

TEST(CheckEgoodTest, RandomPartitionsOfLargeChunksUsuallyHold) {
  const HypothesisClass h = Thresholds(2);
  Rng rng(5);
  const LabeledSequence s = UniformSample(h[1], 40000, rng);
  int good = 0;
  for (int seed = 0; seed < 100; ++seed) {
    Rng r(DeriveSeed(5, seed));
    if (CheckEgood(h, s, PartitionIntoChunks(s, 2, r), Rational(1, 10),
                   Rational(1, 5))) {
      ++good;
    }
  }
  EXPECT_GE(good, 90);
}

TEST(InterleavingTest, ChainHoldsUnderEgood) {
  Rng gen(6);
  int checked = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 3 + rep % 4;
    const HypothesisClass h = Thresholds(n);
    const int d = Ldim(h);
    const Hypothesis target = h[UniformIndex(gen, h.size())];
    LabeledSequence s;
    for (std::size_t i = 0; i < 60; ++i) {
      const std::size_t x = UniformIndex(gen, n);
      // One label in six is flipped so nonzero errors occur on the chunks.
      const bool flip = UniformIndex(gen, 6) == 0;
      s.push_back({DomainPoint{x}, target(x) != flip});
    }
    const ChunkPartition part = PartitionIntoChunks(s, 3, gen);
    const Rational alpha(2, 5);
    const Rational slack(1, 5 * d);
    if (!CheckEgood(h, s, part, alpha, slack)) continue;
    const Rational gamma = Rational(1) - Rational(1, 2 * d);
    for (int j = 1; j <= d; ++j) {
      const auto lo = DefineThresholdClasses(h, part, j, alpha, gamma);
      const auto hi = DefineThresholdClasses(h, part, j + 1, alpha, gamma);
      for (const HypothesisClass& inner : hi) {
        for (const HypothesisClass& outer : lo) {
          ++checked;
          EXPECT_TRUE(inner.IsSubsetOf(outer));
        }
      }
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(InterleavingTest, LargeChunksSatisfyEgoodAndChain) {
  const HypothesisClass h = Thresholds(3);
  const int d = 2;
  const Rational alpha(1, 10);
  const Rational gamma = Rational(1) - Rational(1, 2 * d);
  Rng rng(7);
  const LabeledSequence s = UniformSample(h[1], 60000, rng);
  int good = 0;
  for (int seed = 0; seed < 20; ++seed) {
    Rng r(DeriveSeed(7, seed));
    const ChunkPartition part = PartitionIntoChunks(s, 3, r);
    if (!CheckEgood(h, s, part, alpha, Rational(1, 5 * d))) continue;
    ++good;
    for (int j = 1; j <= d; ++j) {
      const auto lo = DefineThresholdClasses(h, part, j, alpha, gamma);
      const auto hi = DefineThresholdClasses(h, part, j + 1, alpha, gamma);
      for (const auto& inner : hi) {
        for (const auto& outer : lo) EXPECT_TRUE(inner.IsSubsetOf(outer));
      }
    }
  }
  EXPECT_GE(good, 18);
}

TEST(ErmLearnTest, SingletonReturnsAtStageOne) {
  const HypothesisClass h(4, {H("0110")});
  Rng rng(8);
  const LabeledSequence s = UniformSample(h[0], 1200, rng);
  ErmConfig c;
  c.d = 1;
  c.k = 600;
  const ErmResult r = ErmLearn(h, s, c, rng);
  ASSERT_EQ(r.status, ErmStatus::kSuccess);
  EXPECT_EQ(*r.hypothesis, h[0]);
  ASSERT_EQ(r.stages.size(), 1u);
  EXPECT_EQ(r.stages[0].max_frequency, 600);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_TRUE(VerifyErmWitness(h, s, *r.hypothesis, *r.witness, c.d).ok);
}

TEST(ErmLearnTest, RejectsBadInputs) {
  const HypothesisClass h = Thresholds(4);
  Rng rng(9);
  ErmConfig c;
  c.d = 1;
  c.k = 2;
  const LabeledSequence s = UniformSample(h[0], 10, rng);
  EXPECT_THROW(ErmLearn(h, s, c, rng), ParameterError);
  c.d = 2;
  EXPECT_THROW(ErmLearn(h, {}, c, rng), EmptySampleError);
  EXPECT_THROW(ErmLearn(HypothesisClass(4), s, c, rng), ParameterError);
}

TEST(ErmLearnTest, DeskThresholdsMonteCarlo) {
  const HypothesisClass h = Thresholds(8);
  const ErmConfig c = DeskConfig();
  ASSERT_EQ(Ldim(h), c.d);
  int good = 0;
  const int runs = 20;
  for (int seed = 0; seed < runs; ++seed) {
    Rng rng(DeriveSeed(10, seed));
    const Hypothesis target = h[UniformIndex(rng, h.size())];
    const LabeledSequence s = UniformSample(target, 9600, rng);
    const ErmResult r = ErmLearn(h, s, c, rng);
    EXPECT_TRUE(r.ledger.WithinTarget());
    EXPECT_TRUE(r.ledger.AllCertified());
    if (r.status != ErmStatus::kSuccess) continue;
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_TRUE(VerifyErmWitness(h, s, *r.hypothesis, *r.witness, c.d).ok);
    if (EmpiricalError(*r.hypothesis, s) <= Rational(2) * c.alpha) ++good;
  }
  EXPECT_GE(good, 19);
}

TEST(ErmLearnTest, TranscriptListsStagesAndLedger) {
  const HypothesisClass h = Thresholds(8);
  Rng rng(11);
  const LabeledSequence s = UniformSample(h[4], 9600, rng);
  const ErmResult r = ErmLearn(h, s, DeskConfig(), rng);
  std::ostringstream out;
  WriteErmTranscript(out, r);
  const std::string text = out.str();
  EXPECT_NE(text.find("status: "), std::string::npos);
  EXPECT_NE(text.find("stage: j=1"), std::string::npos);
  EXPECT_NE(text.find("ledger: stage-test"), std::string::npos);
  EXPECT_NE(text.find("ledger_within_target: 1"), std::string::npos);
}

TEST(ErmLearnTest, PrivacyBudgetSplit) {
  const HypothesisClass h = Thresholds(8);
  Rng rng(12);
  const LabeledSequence s = UniformSample(h[2], 9600, rng);
  const ErmConfig c = DeskConfig();
  const ErmResult r = ErmLearn(h, s, c, rng);
  ASSERT_EQ(r.status, ErmStatus::kSuccess);
  EXPECT_NEAR(AboveThresholdBlockEpsilon(r.eps_query, c.d + 1, 5e-4), 0.5, 1e-9);
  EXPECT_DOUBLE_EQ(r.eps_sparse, 0.25);
  EXPECT_NEAR(r.bottom_score, 10.0 * std::log(9.0 / 5e-4) / 0.25, 1e-9);
  const PrivacyParams basic = r.ledger.Basic();
  EXPECT_NEAR(basic.epsilon, 1.0, 1e-9);
  EXPECT_NEAR(basic.delta, 1e-3, 1e-15);
}

TEST(VerifyErmWitnessTest, RejectsForgedWitnesses) {
  const HypothesisClass h = Thresholds(3);
  const LabeledSequence s = {{DomainPoint{0}, false}, {DomainPoint{2}, true}};
  ErmWitness w;
  w.leaf_class = HypothesisClass(3, {H("011")});
  w.t = 0;
  EXPECT_TRUE(VerifyErmWitness(h, s, H("011"), w, 2).ok);
  EXPECT_FALSE(VerifyErmWitness(h, s, H("001"), w, 2).ok);
  w.leaf_class = HypothesisClass(3, {H("010")});
  EXPECT_FALSE(VerifyErmWitness(h, s, H("010"), w, 2).ok);
  w.leaf_class = HypothesisClass(3);
  EXPECT_FALSE(VerifyErmWitness(h, s, H("011"), w, 2).ok);
}

// When the stage test fails with noise removed, the largest teacher ddim
// drops at the next stage (checked whenever the chunks are concentrated).
TEST(StageProgressTest, DdimDropsAfterFailedStage) {
  std::mt19937_64 gen(3);
  int checked = 0;
  for (int rep = 0; rep < 20000; ++rep) {
    const std::size_t n = 2 + rep % 3;
    const HypothesisClass h = oracle::RandomClass(gen, n, 8);
    const int d = Ldim(h);
    if (d < 1) continue;
    const std::size_t k = 2 + gen() % 3;
    const std::size_t m = k * (2 + gen() % 4);
    LabeledSequence s;
    for (std::size_t i = 0; i < m; ++i) {
      s.push_back({DomainPoint{gen() % n}, gen() % 2 == 1});
    }
    ErmConfig c;
    c.d = d;
    c.k = k;
    c.alpha = Rational(9, 10);
    c.p_unit = 1;
    c.noiseless_tests = true;
    Rng rng(gen());
    const ChunkPartition part = PartitionIntoChunks(s, k, rng);
    if (!CheckEgood(h, s, part, c.InternalAlpha(), c.EgoodSlack())) continue;
    for (int j = 1; j <= d; ++j) {
      const StageEvaluation a = EvaluateStage(h, part, j, 1, c, h.size());
      if (2 * a.max_frequency >= static_cast<int>(k)) break;
      const StageEvaluation b = EvaluateStage(h, part, j + 1, 1, c, h.size());
      ++checked;
      if (b.max_ddim >= 0) EXPECT_LE(b.max_ddim, a.max_ddim - 1);
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(PacLearnTest, PointMassIsLearnedExactly) {
  const HypothesisClass h = Thresholds(8);
  DistributionSpec dist{std::vector<double>(8, 0.0), h[5]};
  dist.weights[3] = 1.0;
  PacConfig pc;
  pc.erm = DeskConfig();
  pc.sample_size = 9600;
  int correct = 0;
  for (int seed = 0; seed < 10; ++seed) {
    Rng rng(DeriveSeed(13, seed));
    const PacResult r = PacLearn(h, dist, pc, rng);
    if (r.erm.status == ErmStatus::kSuccess && (*r.erm.hypothesis)(3) == h[5](3)) {
      ++correct;
    }
  }
  EXPECT_GE(correct, 9);
}

TEST(PacLearnTest, UniformThresholdsPopulationError) {
  const HypothesisClass h = Thresholds(8);
  PacConfig pc;
  pc.erm = DeskConfig();
  pc.sample_size = 9600;
  int good = 0;
  const int runs = 50;
  for (int seed = 0; seed < runs; ++seed) {
    Rng rng(DeriveSeed(14, seed));
    const DistributionSpec dist{std::vector<double>(8, 1.0),
                                h[UniformIndex(rng, h.size())]};
    const PacResult r = PacLearn(h, dist, pc, rng);
    EXPECT_TRUE(r.erm.ledger.WithinTarget());
    if (r.erm.status != ErmStatus::kSuccess) continue;
    const double est = EstimatePopulationError(*r.erm.hypothesis, dist, 20000, rng);
    EXPECT_NEAR(est, PopulationError(*r.erm.hypothesis, dist), 0.02);
    if (est <= 2 * 0.2 + 0.05) ++good;
  }
  EXPECT_GE(good, 45);
}

TEST(PacLearnTest, SampleSizeFormula) {
  PacConfig pc;
  pc.erm.d = 2;
  pc.erm.alpha = Rational(1, 4);
  pc.erm.privacy = {0.5, 1e-2};
  EXPECT_EQ(pc.SampleSize(),
            static_cast<std::size_t>(std::ceil(32.0 * std::log(100.0) / 0.125)));
  pc.sample_size = 77;
  EXPECT_EQ(pc.SampleSize(), 77u);
}

}  // namespace
}  // namespace lsdp
