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

// Privacy mechanisms: Laplace noise, sparse exponential selection with a
// failure symbol, AboveThreshold, composition accounting and an empirical
// auditor. All logarithms are natural.

#ifndef LSDP_MECHANISMS_H_
#define LSDP_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lsdp/hypothesis.h"
#include "lsdp/rng.h"

namespace lsdp {

struct PrivacyParams {
  double epsilon = 1.0;
  double delta = 0.0;

  // Throws ParameterError unless epsilon > 0 and 0 <= delta < 1.
  void Validate() const;
};

// One draw from Laplace(0, scale) by inverting the CDF at a single uniform.
double Laplace(double scale, Rng& rng);

// A teacher's candidate list. Items are deduplicated, sorted canonically
// and truncated to the first `cap` entries.
struct CandidateList {
  std::vector<Hypothesis> items;
  std::size_t cap = 0;
};

CandidateList MakeCandidateList(std::vector<Hypothesis> items, std::size_t cap);

struct ScoredCandidate {
  Hypothesis hypothesis;
  int score = 0;  // number of lists containing the hypothesis
};

// Union of the lists with scores, in canonical hypothesis order.
std::vector<ScoredCandidate> ScoreCandidates(std::span<const CandidateList> lists);

// Largest score over the union, 0 when every list is empty.
int MaxFrequency(std::span<const CandidateList> lists);

struct SparseSampleOutcome {
  std::optional<Hypothesis> hypothesis;  // nullopt is the failure symbol
  double score = 0.0;

  bool is_bottom() const { return !hypothesis.has_value(); }
};

// Probabilities proportional to exp(epsilon * score) over the scored
// candidates followed by the failure symbol with score `bottom_score`.
// The last entry is the failure probability.
std::vector<double> SparseSampleDistribution(std::span<const CandidateList> lists,
                                             double epsilon, double bottom_score);

SparseSampleOutcome SparseSample(std::span<const CandidateList> lists,
                                 double epsilon, double bottom_score, Rng& rng);

// Closed-form probability that SparseSample returns the failure symbol.
double BottomProbability(std::span<const CandidateList> lists, double epsilon,
                         double bottom_score);

// Minimum failure score 10 ln(L/delta)/epsilon for (2 epsilon, delta)-DP.
double SparseSampleMinBottomScore(double max_list_size, double epsilon,
                                  double delta);
bool CheckSparsePrivacyPrecondition(double max_list_size, double epsilon,
                                    double delta, double bottom_score);

enum class CountingMode { kAbove, kBelow };
enum class ThresholdOutcome { kAbove, kBelow, kHalted };

const char* OutcomeName(ThresholdOutcome outcome);

// AboveThreshold with a budget of K counted outcomes. Each query draws fresh
// Laplace(1/epsilon) noise and reports ABOVE when value + noise >= threshold.
// A query whose counted outcome would push the counter past K reports
// HALTED instead, and every later query reports HALTED.
//
// Queries must have sensitivity at most 1; that is the caller's obligation.
class AboveThreshold {
 public:
  AboveThreshold(double threshold, double epsilon, int budget,
                 CountingMode mode, bool noiseless = false);

  ThresholdOutcome Query(double value, Rng& rng);

  double threshold() const { return threshold_; }
  double epsilon() const { return epsilon_; }
  int budget() const { return budget_; }
  int counter() const { return counter_; }
  bool halted() const { return halted_; }
  CountingMode mode() const { return mode_; }
  // Noisy value of the most recent non-halted query.
  double last_noisy_value() const { return last_noisy_value_; }

 private:
  double threshold_;
  double epsilon_;
  int budget_;
  CountingMode mode_;
  bool noiseless_;
  int counter_ = 0;
  bool halted_ = false;
  double last_noisy_value_ = 0.0;
};

// Epsilon of an AboveThreshold block with per-query parameter eps_query and
// K counted outcomes: eps_query * (sqrt(c K ln(2/delta)) + ln(2/delta)).
double AboveThresholdBlockEpsilon(double eps_query, int budget, double delta,
                                  double constant = 8.0);
// Inverse of the above: per-query epsilon for a block costing eps_block.
double AboveThresholdQueryEpsilon(double eps_block, int budget, double delta,
                                  double constant = 8.0);

struct LedgerEntry {
  std::string tag;
  double epsilon = 0.0;
  double delta = 0.0;
  std::int64_t count = 1;
  // False when a sparse selection failed its privacy precondition.
  bool certified = true;
};

class BudgetLedger {
 public:
  explicit BudgetLedger(PrivacyParams target = {}, double delta_prime = 1e-6,
                        double block_constant = 8.0);

  void Add(std::string tag, double epsilon, double delta, std::int64_t count = 1,
           bool certified = true);
  // Records an AboveThreshold block and returns its epsilon.
  double AddAboveThresholdBlock(std::string tag, double eps_query, int budget,
                                double delta);
  // Records a sparse selection at (2 epsilon, delta), certified when the
  // failure score meets the precondition. Returns the certification.
  bool AddSparseSample(std::string tag, double max_list_size, double epsilon,
                       double delta, double bottom_score, std::int64_t count = 1);

  // Sums of epsilons and deltas.
  PrivacyParams Basic() const;
  // Heterogeneous advanced composition:
  //   eps = sqrt(2 ln(1/delta') sum c_i eps_i^2) + sum c_i eps_i (e^eps_i - 1)
  //   delta = sum c_i delta_i + delta'.
  PrivacyParams Advanced() const;
  // Whichever composition gives the smaller epsilon.
  PrivacyParams Best() const;

  // Best() within the target, up to floating-point rounding.
  bool WithinTarget() const;
  bool AllCertified() const;

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  const PrivacyParams& target() const { return target_; }
  double delta_prime() const { return delta_prime_; }
  double block_constant() const { return block_constant_; }

 private:
  PrivacyParams target_;
  double delta_prime_;
  double block_constant_;
  std::vector<LedgerEntry> entries_;
};

using AuditedMechanism = std::function<std::string(Rng&)>;

struct AuditReport {
  std::string mechanism;
  std::size_t trials = 0;
  double epsilon_claim = 0.0;
  double delta_claim = 0.0;
  // Largest p - (e^eps q + delta + slack) over buckets and both directions;
  // positive means a violation.
  double max_ratio_violation = 0.0;
  std::string bucket;
  bool passed() const { return max_ratio_violation <= 0.0; }
};

// Runs each mechanism `trials` times (trials >= 10^4) and checks, for every
// output bucket, p <= e^eps q + delta + slack in both directions, where
// slack = 3 sqrt(p(1-p)/N) + e^eps 3 sqrt(q(1-q)/N).
AuditReport DpAudit(const std::string& name, const AuditedMechanism& on_d,
                    const AuditedMechanism& on_neighbor, std::size_t trials,
                    double epsilon_claim, double delta_claim, std::uint64_t seed);

std::string FormatAuditReport(const AuditReport& report);

}  // namespace lsdp

#endif  // LSDP_MECHANISMS_H_
