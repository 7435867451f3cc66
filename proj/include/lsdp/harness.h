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

// Class and stream generators, the non-private baselines and repeated
// experiments with CSV output.

#ifndef LSDP_HARNESS_H_
#define LSDP_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lsdp/erm.h"
#include "lsdp/hypothesis.h"
#include "lsdp/online.h"

namespace lsdp {

enum class ClassFamily { kThresholds, kIntervals, kRandom, kFromFile };

const char* ClassFamilyName(ClassFamily family);
ClassFamily ParseClassFamily(const std::string& name);

struct ClassSpec {
  ClassFamily family = ClassFamily::kThresholds;
  std::size_t domain_size = 8;
  // Member count for kRandom.
  std::size_t members = 8;
  std::uint64_t seed = 0;
  // Class file for kFromFile.
  std::string path;
};

// THRESHOLDS: {1[x >= t] : t = 0..n}. INTERVALS: {1[a <= x <= b] : a <= b}
// plus the empty interval. RANDOM: m distinct uniform truth tables.
// Throws ParameterError when m > 2^n.
HypothesisClass GenerateClass(const ClassSpec& spec);

enum class AdversaryOrder { kNatural, kRandomPerm, kCrafted };

const char* AdversaryOrderName(AdversaryOrder order);
AdversaryOrder ParseAdversaryOrder(const std::string& name);

struct StreamSpec {
  ClassSpec class_spec;
  // Index of the target in canonical class order; drawn uniformly from the
  // stream seed when unset.
  std::optional<std::size_t> target_index;
  AdversaryOrder order = AdversaryOrder::kRandomPerm;
  std::size_t T = 100;
  std::uint64_t seed = 0;
  // Point file for kCrafted: "point label" lines; labels are replaced by
  // the target's and the points repeat cyclically up to T.
  std::string crafted_path;
};

struct GeneratedStream {
  Hypothesis target;
  LabeledSequence stream;
};

// NATURAL visits 0, 1, ..., n-1 cyclically; RANDOM_PERM concatenates fresh
// uniform permutations of the domain. Throws AssertionFailure if the result
// is not consistent with the target.
GeneratedStream GenerateStream(const StreamSpec& spec, const HypothesisClass& h);

bool IsRealizable(const HypothesisClass& h, std::span<const LabeledExample> stream);

// Predicts with the SOA of the running version space and restricts on every
// example. Throws NotRealizableError if the version space empties.
std::size_t RunSoaBaseline(const HypothesisClass& h,
                           std::span<const LabeledExample> stream);
// Majority vote over the version space, ties to 0.
std::size_t RunHalvingBaseline(const HypothesisClass& h,
                               std::span<const LabeledExample> stream);

enum class LearnerKind { kDpOnline, kDpErm, kSoaBaseline, kHalvingBaseline };

const char* LearnerName(LearnerKind learner);
LearnerKind ParseLearner(const std::string& name);

struct ExperimentConfig {
  LearnerKind learner = LearnerKind::kSoaBaseline;
  StreamSpec stream;
  OnlineConfig online;
  ErmConfig erm;
  std::size_t repetitions = 1;
  std::uint64_t seed = 0;
};

struct ResultRecord {
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  std::string learner;
  std::string family;
  std::size_t domain_size = 0;
  std::size_t class_size = 0;
  int ldim = -1;
  int d = 0;
  // T for online learners, n for ERM.
  std::size_t horizon = 0;
  std::optional<std::size_t> mistakes;
  std::optional<Rational> empirical_error;
  std::size_t retrains = 0;
  double ledger_epsilon = 0.0;
  double ledger_delta = 0.0;
  std::string status = "ok";
  bool realizable = true;
  bool bound_ok = true;
};

// Repetition r uses seed DeriveSeed(config.seed, r) for its stream and a
// second derived seed for the learner. Baseline bound violations raise
// AssertionFailure; learner errors are recorded in the status column.
std::vector<ResultRecord> RunExperiment(const ExperimentConfig& config);

// Header:
// repetition,seed,learner,family,domain_size,class_size,ldim,d,horizon,
// mistakes,empirical_error,retrains,ledger_epsilon,ledger_delta,status,
// realizable,bound_ok
void WriteResultsCsv(std::ostream& out, std::span<const ResultRecord> records);

struct MistakeSummary {
  std::size_t runs = 0;
  double mean = 0.0;
  // Nearest-rank 95th percentile.
  std::size_t p95 = 0;
};

MistakeSummary SummarizeMistakes(std::span<const ResultRecord> records);

// Canonical neighbor pairs for the empirical privacy audit:
//   sparse-sample: 30 lists holding one hypothesis versus 29 lists, with the
//     minimal compliant failure score, claimed at (2 eps, delta);
//   sparse-sample-new-candidate: one extra list proposing a fresh
//     hypothesis, claimed at (2 eps, delta);
//   above-threshold: five queries shifted by one against a threshold, one
//     counted outcome, claimed at the block epsilon;
//   no-noise-control: sparse selection replaced by an argmax, claimed at
//     (2 eps, delta); the audit must flag it.
std::vector<std::string> AuditScenarioNames();
// Throws ParameterError for an unknown scenario.
AuditReport RunAuditScenario(const std::string& name, std::size_t trials,
                             double epsilon, double delta, std::uint64_t seed);

}  // namespace lsdp

#endif  // LSDP_HARNESS_H_
