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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

#include "lsdp/errors.h"

namespace lsdp {

Rational ErmConfig::Gamma() const {
  if (gamma) return *gamma;
  return Rational(1) - Rational(1, 2 * std::max(d, 1));
}

Rational ErmConfig::EgoodSlack() const {
  if (egood_slack) return *egood_slack;
  return Rational(1, 5 * std::max(d, 1));
}

void ErmConfig::Validate() const {
  privacy.Validate();
  if (!(privacy.delta > 0.0)) throw ParameterError("ERM needs delta > 0");
  if (alpha <= Rational(0) || alpha >= Rational(1)) {
    throw ParameterError("alpha must lie in (0, 1)");
  }
  if (d < 0) throw ParameterError("d must be nonnegative");
  if (k < 1) throw ParameterError("k must be at least 1");
  const Rational g = Gamma();
  if (g <= Rational(0) || g > Rational(1)) {
    throw ParameterError("gamma must lie in (0, 1]");
  }
  if (p_unit && *p_unit < 1) throw ParameterError("p_unit must be positive");
  if (!(stage_threshold_fraction > 0.0)) {
    throw ParameterError("stage threshold fraction must be positive");
  }
}

ChunkPartition PartitionFromOrder(std::span<const LabeledExample> sample,
                                  std::size_t k, std::vector<std::size_t> order) {
  if (k == 0) throw ParameterError("k must be at least 1");
  if (order.size() < k) {
    throw EmptySampleError("fewer examples than chunks: " +
                           std::to_string(order.size()) + " < " + std::to_string(k));
  }
  const std::size_t size = order.size() / k;
  order.resize(size * k);
  ChunkPartition out;
  out.chunks.resize(k);
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (order[r] >= sample.size()) throw ParameterError("order index out of range");
    out.chunks[r / size].push_back(sample[order[r]]);
  }
  out.order = std::move(order);
  return out;
}

ChunkPartition PartitionIntoChunks(std::span<const LabeledExample> sample,
                                   std::size_t k, Rng& rng) {
  std::vector<std::size_t> order(sample.size());
  std::iota(order.begin(), order.end(), 0);
  Shuffle(order, rng);
  return PartitionFromOrder(sample, k, std::move(order));
}

std::vector<HypothesisClass> DefineThresholdClasses(const HypothesisClass& h,
                                                    const ChunkPartition& partition,
                                                    int j, const Rational& alpha,
                                                    const Rational& gamma) {
  const Rational threshold = Pow(gamma, j) * alpha;
  std::vector<HypothesisClass> out;
  out.reserve(partition.chunks.size());
  for (const LabeledSequence& chunk : partition.chunks) {
    if (chunk.empty()) throw EmptySampleError("empty chunk");
    std::vector<Hypothesis> kept;
    for (const Hypothesis& member : h) {
      if (EmpiricalError(member, chunk) <= threshold) kept.push_back(member);
    }
    out.emplace_back(h.domain_size(), std::move(kept));
  }
  return out;
}

bool CheckEgood(const HypothesisClass& h, std::span<const LabeledExample> sample,
                const ChunkPartition& partition, const Rational& alpha,
                const Rational& slack) {
  for (const Hypothesis& member : h) {
    const Rational global = EmpiricalError(member, sample);
    for (const LabeledSequence& chunk : partition.chunks) {
      const Rational local = EmpiricalError(member, chunk);
      if (global > alpha / Rational(3)) {
        if (local < (Rational(1) - slack) * global ||
            local > (Rational(1) + slack) * global) {
          return false;
        }
      } else if (local > alpha / Rational(2)) {
        return false;
      }
    }
  }
  return true;
}

StageEvaluation EvaluateStage(const HypothesisClass& h,
                              const ChunkPartition& partition, int j,
                              std::int64_t p_unit, const ErmConfig& config,
                              std::size_t list_cap) {
  StageEvaluation out;
  out.j = j;
  out.p = j >= 62 ? std::numeric_limits<std::int64_t>::max()
                  : (p_unit > (std::numeric_limits<std::int64_t>::max() >> j)
                         ? std::numeric_limits<std::int64_t>::max()
                         : p_unit << j);
  out.classes = DefineThresholdClasses(h, partition, j, config.InternalAlpha(),
                                       config.Gamma());
  for (const HypothesisClass& c : out.classes) {
    EssentialSet e = EssentialHypotheses(c, {out.p, config.d}, config.mode,
                                         config.limits);
    out.max_ddim = std::max(out.max_ddim, e.t);
    out.lists.push_back(MakeCandidateList(e.hypotheses, list_cap));
    out.essential.push_back(std::move(e));
  }
  out.max_frequency = MaxFrequency(out.lists);
  return out;
}

const char* ErmStatusName(ErmStatus status) {
  switch (status) {
    case ErmStatus::kSuccess:
      return "success";
    case ErmStatus::kBottom:
      return "bottom";
    case ErmStatus::kStagesExhausted:
      return "stages-exhausted";
    case ErmStatus::kHalted:
      return "halted";
  }
  return "?";
}

ErmResult ErmLearn(const HypothesisClass& h, std::span<const LabeledExample> sample,
                   const ErmConfig& config, Rng& rng) {
  config.Validate();
  if (h.empty()) throw ParameterError("ERM over an empty class");
  if (sample.empty()) throw EmptySampleError("ERM over an empty sample");
  if (Ldim(h) > config.d) throw ParameterError("ldim(H) exceeds d");

  const double eps = config.privacy.epsilon;
  const double delta = config.privacy.delta;
  const int budget = config.d + 1;

  ErmResult result;
  result.ledger = BudgetLedger(config.privacy, 1e-6, config.block_constant);
  result.p_unit = config.p_unit.value_or(std::max<std::int64_t>(
      1, static_cast<std::int64_t>(sample.size()) * config.d));
  result.list_cap = h.size();
  result.eps_query =
      AboveThresholdQueryEpsilon(eps / 2, budget, delta / 2, config.block_constant);
  result.eps_sparse = eps / 4;
  result.bottom_score = SparseSampleMinBottomScore(
      static_cast<double>(result.list_cap), result.eps_sparse, delta / 2);

  const ChunkPartition partition = PartitionIntoChunks(sample, config.k, rng);
  result.chunk_size = partition.chunk_size();
  result.ledger.AddAboveThresholdBlock("stage-test", result.eps_query, budget,
                                       delta / 2);
  AboveThreshold test(config.stage_threshold_fraction * static_cast<double>(config.k),
                      result.eps_query, budget, CountingMode::kBelow,
                      config.noiseless_tests);

  for (int j = 1; j <= budget; ++j) {
    const StageEvaluation stage =
        EvaluateStage(h, partition, j, result.p_unit, config, result.list_cap);
    const ThresholdOutcome outcome =
        test.Query(static_cast<double>(stage.max_frequency), rng);
    result.stages.push_back({j, stage.p, stage.max_frequency, stage.max_ddim,
                             test.last_noisy_value(), outcome});
    if (outcome == ThresholdOutcome::kHalted) {
      result.status = ErmStatus::kHalted;
      return result;
    }
    if (outcome == ThresholdOutcome::kBelow) continue;

    result.ledger.AddSparseSample("sparse-select",
                                  static_cast<double>(result.list_cap),
                                  result.eps_sparse, delta / 2, result.bottom_score);
    const SparseSampleOutcome drawn =
        SparseSample(stage.lists, result.eps_sparse, result.bottom_score, rng);
    if (drawn.is_bottom()) {
      result.status = ErmStatus::kBottom;
      return result;
    }
    result.status = ErmStatus::kSuccess;
    result.hypothesis = drawn.hypothesis;
    for (std::size_t i = 0; i < stage.essential.size(); ++i) {
      const EssentialSet& e = stage.essential[i];
      const auto it = std::lower_bound(e.hypotheses.begin(), e.hypotheses.end(),
                                       *drawn.hypothesis);
      if (it == e.hypotheses.end() || *it != *drawn.hypothesis) continue;
      const auto idx = static_cast<std::size_t>(it - e.hypotheses.begin());
      result.witness = ErmWitness{i,
                                  j,
                                  e.witness_classes[idx],
                                  e.witness_paths[idx],
                                  e.t,
                                  LeafIrreducibility(stage.p, config.d, e.t)};
      break;
    }
    return result;
  }
  result.status = ErmStatus::kStagesExhausted;
  return result;
}

WitnessCheck VerifyErmWitness(const HypothesisClass& h,
                              std::span<const LabeledExample> sample,
                              const Hypothesis& output, const ErmWitness& witness,
                              int d) {
  const HypothesisClass& g = witness.leaf_class;
  if (g.empty()) return {false, "witness leaf is empty"};
  if (!g.IsSubsetOf(h)) return {false, "witness leaf is not a subclass of H"};
  if (Ldim(g) != witness.t) return {false, "witness leaf has the wrong ldim"};
  if (SoaHypothesis(g) != output) return {false, "output is not the leaf SOA"};
  if (!IsIrreducible(g, d + 1)) return {false, "witness leaf is (d+1)-reducible"};
  std::set<std::size_t> points;
  for (const LabeledExample& e : sample) points.insert(e.point.index);
  LabeledSequence replay;
  for (std::size_t x : points) replay.push_back({DomainPoint{x}, output(x)});
  if (RestrictSeq(g, replay).empty()) {
    return {false, "restricting the leaf by the output's labels empties it"};
  }
  return {true, ""};
}

void WriteErmTranscript(std::ostream& out, const ErmResult& r) {
  out << "status: " << ErmStatusName(r.status) << "\n";
  out << "hypothesis: " << (r.hypothesis ? r.hypothesis->ToString() : "-") << "\n";
  out << "chunk_size: " << r.chunk_size << "\n";
  out << "p_unit: " << r.p_unit << "\n";
  out << "list_cap: " << r.list_cap << "\n";
  out << "eps_query: " << r.eps_query << "\n";
  out << "eps_sparse: " << r.eps_sparse << "\n";
  out << "bottom_score: " << r.bottom_score << "\n";
  for (const StageRecord& s : r.stages) {
    out << "stage: j=" << s.j << " p=" << s.p << " max_frequency=" << s.max_frequency
        << " max_ddim=" << s.max_ddim << " noisy=" << s.noisy_value
        << " outcome=" << OutcomeName(s.outcome) << "\n";
  }
  if (r.witness) {
    out << "witness: teacher=" << r.witness->teacher << " stage=" << r.witness->stage
        << " t=" << r.witness->t << " irreducibility=" << r.witness->irreducibility
        << " leaf_size=" << r.witness->leaf_class.size() << "\n";
  }
  for (const LedgerEntry& e : r.ledger.entries()) {
    out << "ledger: " << e.tag << " eps=" << e.epsilon << " delta=" << e.delta
        << " count=" << e.count << " certified=" << (e.certified ? 1 : 0) << "\n";
  }
  const PrivacyParams basic = r.ledger.Basic();
  out << "ledger_basic: eps=" << basic.epsilon << " delta=" << basic.delta << "\n";
  out << "ledger_within_target: " << (r.ledger.WithinTarget() ? 1 : 0) << "\n";
}

LabeledSequence DrawSample(const DistributionSpec& dist, std::size_t n, Rng& rng) {
  if (dist.weights.size() != dist.target.domain_size()) {
    throw DomainMismatchError("distribution and target domains differ");
  }
  std::vector<double> cumulative(dist.weights.size());
  std::partial_sum(dist.weights.begin(), dist.weights.end(), cumulative.begin());
  const double total = cumulative.empty() ? 0.0 : cumulative.back();
  if (!(total > 0.0)) throw ParameterError("distribution has no mass");
  LabeledSequence out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = UniformOpen01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const auto x = static_cast<std::size_t>(it - cumulative.begin());
    out.push_back({DomainPoint{x}, dist.target(x)});
  }
  return out;
}

double PopulationError(const Hypothesis& h, const DistributionSpec& dist) {
  double total = 0.0, wrong = 0.0;
  for (std::size_t x = 0; x < dist.weights.size(); ++x) {
    total += dist.weights[x];
    if (h(x) != dist.target(x)) wrong += dist.weights[x];
  }
  return wrong / total;
}

double EstimatePopulationError(const Hypothesis& h, const DistributionSpec& dist,
                               std::size_t draws, Rng& rng) {
  const LabeledSequence fresh = DrawSample(dist, draws, rng);
  return ToDouble(EmpiricalError(h, fresh));
}

std::size_t PacConfig::SampleSize() const {
  if (sample_size) return *sample_size;
  const double d5 = std::pow(std::max(erm.d, 1), 5);
  const double n = sample_constant * d5 * std::log(1.0 / erm.privacy.delta) /
                   (erm.privacy.epsilon * ToDouble(erm.alpha));
  return static_cast<std::size_t>(std::ceil(n));
}

PacResult PacLearn(const HypothesisClass& h, const DistributionSpec& dist,
                   const PacConfig& config, Rng& rng) {
  PacResult out;
  out.sample = DrawSample(dist, config.SampleSize(), rng);
  out.erm = ErmLearn(h, out.sample, config.erm, rng);
  return out;
}

}  // namespace lsdp
