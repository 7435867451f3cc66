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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "lsdp/errors.h"

namespace lsdp {

void PrivacyParams::Validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ParameterError("epsilon must be positive and finite");
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw ParameterError("delta must lie in [0, 1)");
  }
}

double Laplace(double scale, Rng& rng) {
  if (!(scale > 0.0)) throw ParameterError("Laplace scale must be positive");
  const double u = UniformOpen01(rng) - 0.5;
  return u < 0 ? scale * std::log1p(2.0 * u) : -scale * std::log1p(-2.0 * u);
}

CandidateList MakeCandidateList(std::vector<Hypothesis> items, std::size_t cap) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  if (items.size() > cap) items.resize(cap);
  return CandidateList{std::move(items), cap};
}

std::vector<ScoredCandidate> ScoreCandidates(std::span<const CandidateList> lists) {
  std::map<Hypothesis, int> scores;
  for (const CandidateList& list : lists) {
    for (const Hypothesis& h : list.items) ++scores[h];
  }
  std::vector<ScoredCandidate> out;
  out.reserve(scores.size());
  for (auto& [h, s] : scores) out.push_back({h, s});
  return out;
}

int MaxFrequency(std::span<const CandidateList> lists) {
  int best = 0;
  for (const auto& c : ScoreCandidates(lists)) best = std::max(best, c.score);
  return best;
}

namespace {

std::vector<double> Normalize(const std::vector<double>& log_weights) {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  double total = 0.0;
  for (double w : log_weights) total += std::exp(w - top);
  const double lse = top + std::log(total);
  std::vector<double> probs;
  probs.reserve(log_weights.size());
  for (double w : log_weights) probs.push_back(std::exp(w - lse));
  return probs;
}

std::vector<double> LogWeights(const std::vector<ScoredCandidate>& scored,
                               double epsilon, double bottom_score) {
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  if (std::isnan(bottom_score) ||
      (bottom_score == -std::numeric_limits<double>::infinity() &&
       scored.empty())) {
    throw ParameterError("no candidates and no failure symbol to sample");
  }
  std::vector<double> w;
  w.reserve(scored.size() + 1);
  for (const auto& c : scored) w.push_back(epsilon * c.score);
  w.push_back(epsilon * bottom_score);
  return w;
}

}  // namespace

std::vector<double> SparseSampleDistribution(std::span<const CandidateList> lists,
                                             double epsilon, double bottom_score) {
  return Normalize(LogWeights(ScoreCandidates(lists), epsilon, bottom_score));
}

SparseSampleOutcome SparseSample(std::span<const CandidateList> lists,
                                 double epsilon, double bottom_score, Rng& rng) {
  const auto scored = ScoreCandidates(lists);
  const auto probs = Normalize(LogWeights(scored, epsilon, bottom_score));
  const double u = UniformOpen01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    acc += probs[i];
    if (u < acc) return {scored[i].hypothesis, static_cast<double>(scored[i].score)};
  }
  return {std::nullopt, bottom_score};
}

double BottomProbability(std::span<const CandidateList> lists, double epsilon,
                         double bottom_score) {
  return SparseSampleDistribution(lists, epsilon, bottom_score).back();
}

double SparseSampleMinBottomScore(double max_list_size, double epsilon,
                                  double delta) {
  return 10.0 * std::log(max_list_size / delta) / epsilon;
}

bool CheckSparsePrivacyPrecondition(double max_list_size, double epsilon,
                                    double delta, double bottom_score) {
  if (!(delta > 0.0)) return false;
  return bottom_score >= SparseSampleMinBottomScore(max_list_size, epsilon, delta);
}

const char* OutcomeName(ThresholdOutcome outcome) {
  switch (outcome) {
    case ThresholdOutcome::kAbove:
      return "ABOVE";
    case ThresholdOutcome::kBelow:
      return "BELOW";
    case ThresholdOutcome::kHalted:
      return "HALTED";
  }
  return "?";
}

AboveThreshold::AboveThreshold(double threshold, double epsilon, int budget,
                               CountingMode mode, bool noiseless)
    : threshold_(threshold),
      epsilon_(epsilon),
      budget_(budget),
      mode_(mode),
      noiseless_(noiseless) {
  if (!noiseless && !(epsilon > 0.0)) {
    throw ParameterError("AboveThreshold epsilon must be positive");
  }
  if (budget < 0) throw ParameterError("AboveThreshold budget must be >= 0");
}

ThresholdOutcome AboveThreshold::Query(double value, Rng& rng) {
  if (halted_) return ThresholdOutcome::kHalted;
  const double noisy = noiseless_ ? value : value + Laplace(1.0 / epsilon_, rng);
  last_noisy_value_ = noisy;
  const ThresholdOutcome outcome =
      noisy >= threshold_ ? ThresholdOutcome::kAbove : ThresholdOutcome::kBelow;
  const bool counted = (outcome == ThresholdOutcome::kAbove) ==
                       (mode_ == CountingMode::kAbove);
  if (counted) {
    if (counter_ + 1 > budget_) {
      halted_ = true;
      return ThresholdOutcome::kHalted;
    }
    ++counter_;
  }
  return outcome;
}

double AboveThresholdBlockEpsilon(double eps_query, int budget, double delta,
                                  double constant) {
  const double log_term = std::log(2.0 / delta);
  return eps_query * (std::sqrt(constant * budget * log_term) + log_term);
}

double AboveThresholdQueryEpsilon(double eps_block, int budget, double delta,
                                  double constant) {
  return eps_block / AboveThresholdBlockEpsilon(1.0, budget, delta, constant);
}

BudgetLedger::BudgetLedger(PrivacyParams target, double delta_prime,
                           double block_constant)
    : target_(target), delta_prime_(delta_prime), block_constant_(block_constant) {}

void BudgetLedger::Add(std::string tag, double epsilon, double delta,
                       std::int64_t count, bool certified) {
  entries_.push_back({std::move(tag), epsilon, delta, count, certified});
}

double BudgetLedger::AddAboveThresholdBlock(std::string tag, double eps_query,
                                            int budget, double delta) {
  const double eps =
      AboveThresholdBlockEpsilon(eps_query, budget, delta, block_constant_);
  Add(std::move(tag), eps, delta);
  return eps;
}

bool BudgetLedger::AddSparseSample(std::string tag, double max_list_size,
                                   double epsilon, double delta,
                                   double bottom_score, std::int64_t count) {
  const bool ok =
      CheckSparsePrivacyPrecondition(max_list_size, epsilon, delta, bottom_score);
  Add(std::move(tag), 2.0 * epsilon, delta, count, ok);
  return ok;
}

PrivacyParams BudgetLedger::Basic() const {
  PrivacyParams out{0.0, 0.0};
  for (const auto& e : entries_) {
    out.epsilon += static_cast<double>(e.count) * e.epsilon;
    out.delta += static_cast<double>(e.count) * e.delta;
  }
  return out;
}

PrivacyParams BudgetLedger::Advanced() const {
  double squares = 0.0;
  double drift = 0.0;
  double delta = delta_prime_;
  for (const auto& e : entries_) {
    const auto c = static_cast<double>(e.count);
    squares += c * e.epsilon * e.epsilon;
    drift += c * e.epsilon * std::expm1(e.epsilon);
    delta += c * e.delta;
  }
  return {std::sqrt(2.0 * std::log(1.0 / delta_prime_) * squares) + drift, delta};
}

PrivacyParams BudgetLedger::Best() const {
  const PrivacyParams basic = Basic();
  const PrivacyParams advanced = Advanced();
  return advanced.epsilon < basic.epsilon ? advanced : basic;
}

bool BudgetLedger::WithinTarget() const {
  const PrivacyParams best = Best();
  constexpr double kRounding = 1e-9;
  return best.epsilon <= target_.epsilon * (1.0 + kRounding) &&
         best.delta <= target_.delta * (1.0 + kRounding) + 1e-300;
}

bool BudgetLedger::AllCertified() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const LedgerEntry& e) { return e.certified; });
}

AuditReport DpAudit(const std::string& name, const AuditedMechanism& on_d,
                    const AuditedMechanism& on_neighbor, std::size_t trials,
                    double epsilon_claim, double delta_claim, std::uint64_t seed) {
  if (trials < 10000) throw ParameterError("an audit needs at least 10^4 trials");
  std::map<std::string, std::array<std::size_t, 2>> counts;
  Rng rng_d(DeriveSeed(seed, 0));
  Rng rng_n(DeriveSeed(seed, 1));
  for (std::size_t i = 0; i < trials; ++i) {
    ++counts[on_d(rng_d)][0];
    ++counts[on_neighbor(rng_n)][1];
  }
  AuditReport report;
  report.mechanism = name;
  report.trials = trials;
  report.epsilon_claim = epsilon_claim;
  report.delta_claim = delta_claim;
  report.max_ratio_violation = -std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(trials);
  const double e_eps = std::exp(epsilon_claim);
  for (const auto& [bucket, c] : counts) {
    for (int dir = 0; dir < 2; ++dir) {
      const double p = static_cast<double>(c[dir]) / n;
      const double q = static_cast<double>(c[1 - dir]) / n;
      const double slack =
          3.0 * std::sqrt(p * (1 - p) / n) + e_eps * 3.0 * std::sqrt(q * (1 - q) / n);
      const double violation = p - (e_eps * q + delta_claim + slack);
      if (violation > report.max_ratio_violation) {
        report.max_ratio_violation = violation;
        report.bucket = bucket;
      }
    }
  }
  return report;
}

std::string FormatAuditReport(const AuditReport& r) {
  std::ostringstream out;
  out << "mechanism: " << r.mechanism << "\n"
      << "trials: " << r.trials << "\n"
      << "epsilon_claim: " << r.epsilon_claim << "\n"
      << "delta_claim: " << r.delta_claim << "\n"
      << "max_ratio_violation: " << r.max_ratio_violation << "\n"
      << "bucket: " << r.bucket << "\n"
      << "verdict: " << (r.passed() ? "PASS" : "VIOLATION") << "\n";
  return out.str();
}

}  // namespace lsdp
