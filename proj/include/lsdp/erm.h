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

// Private empirical risk minimization for finite Littlestone classes, and a
// PAC wrapper around it.
//
// The sample is split into k chunks S_1..S_k. In stage j = 1..d+1 teacher i
// holds H_i^j = {h : err_{S_i}(h) <= gamma^j alpha} and proposes its
// (p_j, d)-essential hypotheses, p_j = 2^j p_unit. A noisy test asks whether
// some hypothesis is proposed by at least k/2 teachers; if so one proposal
// is drawn by sparse selection and returned.
//
// Privacy split: the stage-test block spends (eps/2, delta/2) and the single
// sparse selection runs at eps/4 per unit score, i.e. (eps/2, delta/2).

#ifndef LSDP_ERM_H_
#define LSDP_ERM_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lsdp/decomposition.h"
#include "lsdp/hypothesis.h"
#include "lsdp/mechanisms.h"
#include "lsdp/rational.h"
#include "lsdp/rng.h"

namespace lsdp {

struct ErmConfig {
  // Target empirical error; stages run at alpha / 2 internally.
  Rational alpha{1, 5};
  PrivacyParams privacy{1.0, 1e-3};
  int d = 1;
  std::size_t k = 600;
  // Class shrink factor; 1 - 1/(2d) when unset.
  std::optional<Rational> gamma;
  // Relative deviation allowed by the chunk-concentration event; 1/(5d)
  // when unset.
  std::optional<Rational> egood_slack;
  double stage_threshold_fraction = 0.5;
  // p_j = 2^j p_unit; n d when unset.
  std::optional<std::int64_t> p_unit;
  double block_constant = 8.0;
  DecompositionMode mode = DecompositionMode::kExact;
  SearchLimits limits;
  // Replaces the stage-test noise with zero; for deterministic tests only.
  bool noiseless_tests = false;

  Rational InternalAlpha() const { return alpha / Rational(2); }
  Rational Gamma() const;
  Rational EgoodSlack() const;
  // Throws ParameterError on an invalid configuration.
  void Validate() const;
};

// Randomly permuted sample cut into k equal chunks; the remainder of
// |S| mod k examples is discarded.
struct ChunkPartition {
  std::vector<LabeledSequence> chunks;
  // order[r] = index into S of the r-th retained example.
  std::vector<std::size_t> order;

  std::size_t chunk_size() const { return chunks.empty() ? 0 : chunks[0].size(); }
};

ChunkPartition PartitionIntoChunks(std::span<const LabeledExample> sample,
                                   std::size_t k, Rng& rng);
// Deterministic partition following `order` (a list of sample indices).
ChunkPartition PartitionFromOrder(std::span<const LabeledExample> sample,
                                  std::size_t k, std::vector<std::size_t> order);

// H_i^j for every chunk, by exact rational comparison.
std::vector<HypothesisClass> DefineThresholdClasses(const HypothesisClass& h,
                                                    const ChunkPartition& partition,
                                                    int j, const Rational& alpha,
                                                    const Rational& gamma);

// The chunk-concentration event: for every h and chunk i,
// err_{S_i}(h) in [(1-s) err_S(h), (1+s) err_S(h)] when err_S(h) > alpha/3,
// and err_{S_i}(h) <= alpha/2 otherwise.
bool CheckEgood(const HypothesisClass& h, std::span<const LabeledExample> sample,
                const ChunkPartition& partition, const Rational& alpha,
                const Rational& slack);

struct StageEvaluation {
  int j = 0;
  std::int64_t p = 0;
  std::vector<HypothesisClass> classes;
  std::vector<EssentialSet> essential;
  std::vector<CandidateList> lists;
  int max_frequency = 0;
  // Largest ddim over the teachers (the t of their essential sets).
  int max_ddim = -1;
};

StageEvaluation EvaluateStage(const HypothesisClass& h,
                              const ChunkPartition& partition, int j,
                              std::int64_t p_unit, const ErmConfig& config,
                              std::size_t list_cap);

struct StageRecord {
  int j = 0;
  std::int64_t p = 0;
  int max_frequency = 0;
  int max_ddim = -1;
  double noisy_value = 0.0;
  ThresholdOutcome outcome = ThresholdOutcome::kBelow;
};

// Leaf G behind the returned hypothesis: SOA_G is the output, G has ldim t
// and is `irreducibility`-irreducible with irreducibility = p_j 2^{d-t}.
struct ErmWitness {
  std::size_t teacher = 0;
  int stage = 0;
  HypothesisClass leaf_class;
  LabeledSequence path;
  int t = -1;
  std::int64_t irreducibility = 0;
};

enum class ErmStatus { kSuccess, kBottom, kStagesExhausted, kHalted };

const char* ErmStatusName(ErmStatus status);

struct ErmResult {
  ErmStatus status = ErmStatus::kStagesExhausted;
  std::optional<Hypothesis> hypothesis;
  std::optional<ErmWitness> witness;
  std::vector<StageRecord> stages;
  BudgetLedger ledger;
  std::size_t chunk_size = 0;
  double bottom_score = 0.0;
  double eps_query = 0.0;
  double eps_sparse = 0.0;
  std::int64_t p_unit = 0;
  std::size_t list_cap = 0;
};

// Runs the private ERM on `sample`. Privacy holds for any input; the error
// guarantee err_S <= alpha assumes `sample` is realizable by h.
ErmResult ErmLearn(const HypothesisClass& h, std::span<const LabeledExample> sample,
                   const ErmConfig& config, Rng& rng);

struct WitnessCheck {
  bool ok = true;
  std::string reason;
};

// Replays the output-form guarantee: the witness leaf is a nonempty subset
// of h, its SOA is the output, it is (d+1)-irreducible, and restricting it by
// the output's own labels on the points of `sample` never empties it.
WitnessCheck VerifyErmWitness(const HypothesisClass& h,
                              std::span<const LabeledExample> sample,
                              const Hypothesis& output, const ErmWitness& witness,
                              int d);

void WriteErmTranscript(std::ostream& out, const ErmResult& result);

// A distribution over the domain (weights, normalized on use) with a
// labeling target.
struct DistributionSpec {
  std::vector<double> weights;
  Hypothesis target;
};

LabeledSequence DrawSample(const DistributionSpec& dist, std::size_t n, Rng& rng);
// Exact population error of h under dist.
double PopulationError(const Hypothesis& h, const DistributionSpec& dist);
// Monte-Carlo estimate from `draws` fresh examples.
double EstimatePopulationError(const Hypothesis& h, const DistributionSpec& dist,
                               std::size_t draws, Rng& rng);

struct PacConfig {
  ErmConfig erm;
  // n = ceil(C d^5 ln(1/delta) / (eps alpha)) unless sample_size is set.
  double sample_constant = 1.0;
  std::optional<std::size_t> sample_size;

  std::size_t SampleSize() const;
};

struct PacResult {
  ErmResult erm;
  LabeledSequence sample;
};

PacResult PacLearn(const HypothesisClass& h, const DistributionSpec& dist,
                   const PacConfig& config, Rng& rng);

}  // namespace lsdp

#endif  // LSDP_ERM_H_
