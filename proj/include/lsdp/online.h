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

// Private online learning with k teachers.
//
// The learner publishes a complete hypothesis and buffers its mistakes. A
// noisy test compares the buffer size with U at every step; when it fires,
// the buffer is split evenly among the teachers and the learner retrains.
// Retraining walks a global stage indicator j*: teacher i holds the class
// of hypotheses with error at most (1/10)(1-1/d)^{j*} on each of its
// sub-datasets, and proposes its (2^{j*} d^3, d)-essential hypotheses. When
// some proposal is shared by more than 4k/5 teachers (noisy test), R sparse
// selections are drawn and their pointwise majority is published; otherwise
// j* advances.

#ifndef LSDP_ONLINE_H_
#define LSDP_ONLINE_H_

#include <cstddef>
#include <cstdint>
#include <map>
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

enum class OnlineMode { kPaper, kDesk };

const char* OnlineModeName(OnlineMode mode);
// Accepts "paper" or "desk" in any case. Throws ParameterError otherwise.
OnlineMode ParseOnlineMode(const std::string& name);

// Fully resolved parameters of one run.
struct OnlineParams {
  std::size_t T = 0;
  int d = 1;
  std::size_t k = 0;
  std::size_t U = 0;
  int K_budget = 0;
  int R = 1;
  double eps_sparse = 0.0;
  double eps_retrain = 0.0;
  double eps_stage = 0.0;
  double bottom_score = 0.0;
  double stage_threshold = 0.0;
  // Mistake bound checked by the desk acceptance run.
  std::int64_t mistake_bound = 0;
};

struct OnlineConfig {
  std::size_t T = 2000;
  PrivacyParams privacy{1.0, 1e-3};
  int d = 1;
  OnlineMode mode = OnlineMode::kDesk;
  // Constants of the PAPER formulas.
  double C = 4.0;
  double c = 3.0;
  // Explicit values. DESK mode uses them or the desk defaults; PAPER mode
  // lets them override individual formulas.
  std::optional<std::size_t> k;
  std::optional<std::size_t> U;
  std::optional<int> K_budget;
  std::optional<int> R;
  std::optional<double> eps_sparse;
  std::optional<double> eps_retrain;
  std::optional<double> eps_stage;
  std::optional<double> bottom_score;
  std::optional<std::int64_t> mistake_bound;
  DecompositionMode decomposition = DecompositionMode::kExact;
  SearchLimits limits;
  // Removes the noise of the retrain and stage tests (diagnostics only).
  bool noiseless_tests = false;
  double block_constant = 8.0;
  // The ledger target is (ledger_epsilon_factor * epsilon, delta).
  double ledger_epsilon_factor = 4.0;

  // Throws ParameterError on invalid settings.
  OnlineParams Resolve() const;
};

// {h in H : err_T(h) <= (1/10)(1-1/d)^j for every nonempty T in collection}.
HypothesisClass DefineClass(const HypothesisClass& h,
                            std::span<const LabeledSequence> collection, int j,
                            int d);

// Uniform permutation of e cut into k blocks of floor(|e|/k) examples; the
// remainder is discarded. Throws SplitTooSmallError when |e| < k.
std::vector<LabeledSequence> SplitCounterexamples(std::span<const LabeledExample> e,
                                                  std::size_t k, Rng& rng);

// True if err_{A_i}(h) lies within [(1-s), (1+s)] err_{A_j}(h) for every
// h in H and every pair of blocks.
bool CheckSplitQuality(const HypothesisClass& h,
                       std::span<const LabeledSequence> blocks, const Rational& slack);

// Pointwise majority; ties resolve to 0. Throws ParameterError when empty.
Hypothesis MajorityVote(std::span<const Hypothesis> votes);

enum class TrainOutcome { kPublished, kBottomFailure, kSplitTooSmall, kHalt };

const char* TrainOutcomeName(TrainOutcome outcome);

struct StageTest {
  int j = 0;
  int max_frequency = 0;
  double noisy_value = 0.0;
  ThresholdOutcome outcome = ThresholdOutcome::kBelow;
};

struct RetrainEvent {
  // Step of the retrain; 0 for the initial training.
  std::size_t t = 0;
  std::size_t buffer_size = 0;
  // Retrain count u after this event (teacher collection length).
  std::size_t u = 0;
  int j_before = 1;
  int j_after = 1;
  TrainOutcome outcome = TrainOutcome::kPublished;
  std::vector<StageTest> stage_tests;
  // Closed-form failure probability of the sparse selection that ran, or
  // nullopt when none ran.
  std::optional<double> bottom_probability;
  int bottoms = 0;
  std::size_t min_class_size = 0;
  std::size_t max_class_size = 0;
  // Split-quality event for the new blocks at slack 1/(5d).
  bool split_ok = true;
  std::optional<Hypothesis> published;
};

struct StepRecord {
  std::size_t t = 0;
  std::size_t x = 0;
  bool prediction = false;
  bool truth = false;
  bool mistake = false;
  bool retrain = false;
  int j_star = 1;
  std::size_t buffer_size = 0;
  int budget_remaining = 0;
  // Noisy buffer size seen by the retrain test; nullopt after a halt.
  std::optional<double> noisy_buffer;
  bool halted = false;
};

class OnlineLearner {
 public:
  // Runs the initial training on empty teacher collections.
  OnlineLearner(HypothesisClass h, const OnlineConfig& config, std::uint64_t seed);

  StepRecord Step(const LabeledExample& example);

  const HypothesisClass& hypothesis_class() const { return h_; }
  const OnlineParams& params() const { return params_; }
  const Hypothesis& hypothesis() const { return hypothesis_; }
  int j_star() const { return j_star_; }
  bool halted() const { return halted_; }
  int budget_remaining() const { return budget_remaining_; }
  std::size_t steps() const { return t_; }
  const LabeledSequence& buffer() const { return buffer_; }
  // teachers()[i] is S^(i), one sub-dataset per retrain.
  const std::vector<std::vector<LabeledSequence>>& teachers() const {
    return teachers_;
  }
  const std::vector<RetrainEvent>& events() const { return events_; }
  const BudgetLedger& ledger() const { return ledger_; }
  // Teacher classes at stage j.
  std::vector<HypothesisClass> TeacherClasses(int j) const;

 private:
  RetrainEvent JointTrain(std::size_t t, std::size_t buffer_size);
  const EssentialSet& Essential(const HypothesisClass& c, std::int64_t p);
  void Retrain(StepRecord& record);

  HypothesisClass h_;
  OnlineConfig config_;
  OnlineParams params_;
  Rng retrain_rng_;
  Rng stage_rng_;
  Rng sparse_rng_;
  Rng split_rng_;
  AboveThreshold retrain_test_;
  AboveThreshold stage_test_;
  BudgetLedger ledger_;
  Hypothesis hypothesis_;
  int j_star_ = 1;
  bool halted_ = false;
  int budget_remaining_ = 0;
  std::size_t t_ = 0;
  LabeledSequence buffer_;
  std::vector<std::vector<LabeledSequence>> teachers_;
  std::vector<RetrainEvent> events_;
  std::map<std::pair<std::string, std::int64_t>, EssentialSet> essential_cache_;
};

struct MistakeLog {
  OnlineParams params;
  std::vector<StepRecord> steps;
  std::vector<RetrainEvent> events;
  std::size_t mistakes = 0;
  std::size_t retrains = 0;
  bool halted = false;
  std::optional<std::size_t> halt_step;
  int final_j_star = 1;
  // Mistakes after the last published retrain.
  std::size_t mistakes_after_last_retrain = 0;
  Hypothesis final_hypothesis;
  PrivacyParams ledger_basic;
  PrivacyParams ledger_best;
  bool ledger_within_target = false;
  bool ledger_certified = false;
};

MistakeLog PrivateOnlineLearn(const HypothesisClass& h,
                              std::span<const LabeledExample> stream,
                              const OnlineConfig& config, std::uint64_t seed);

// CSV with header "t,x,prediction,truth,mistake,retrain,j_star".
void WriteMistakeLogCsv(std::ostream& out, const MistakeLog& log);
// One JSON object with the run summary.
void WriteMistakeLogSummary(std::ostream& out, const MistakeLog& log);

}  // namespace lsdp

#endif  // LSDP_ONLINE_H_
