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

#include "lsdp/online.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "lsdp/errors.h"

namespace lsdp {

namespace {

constexpr std::size_t kDeskK = 10;
constexpr std::size_t kDeskU = 20;
constexpr int kDeskBudget = 20;
constexpr double kDeskEpsSparse = 1.0;
constexpr double kDeskEpsRetrain = 1.0;
constexpr double kDeskEpsStage = 4.0;

std::size_t CeilToSize(double v) {
  if (!(v < 1e18)) throw ParameterError("parameter formula overflows");
  return static_cast<std::size_t>(std::ceil(std::max(v, 1.0)));
}

std::string ClassKey(const HypothesisClass& c) {
  std::string key;
  for (const Hypothesis& m : c) {
    key += m.ToString();
    key += ',';
  }
  return key;
}

}  // namespace

const char* OnlineModeName(OnlineMode mode) {
  return mode == OnlineMode::kPaper ? "PAPER" : "DESK";
}

OnlineMode ParseOnlineMode(const std::string& name) {
  std::string lower = name;
  for (char& ch : lower) ch = static_cast<char>(std::tolower(ch));
  if (lower == "paper") return OnlineMode::kPaper;
  if (lower == "desk") return OnlineMode::kDesk;
  throw ParameterError("unknown online mode: " + name);
}

OnlineParams OnlineConfig::Resolve() const {
  privacy.Validate();
  if (!(privacy.delta > 0.0)) throw ParameterError("online learning needs delta > 0");
  if (d < 1) throw ParameterError("d must be at least 1");
  if (T < 2) throw ParameterError("T must be at least 2");
  if (!(C > 0.0) || !(c > 0.0)) throw ParameterError("constants must be positive");

  const double eps = privacy.epsilon;
  const double dd = d;
  const double log_t = std::log(static_cast<double>(T));
  const double log_inv_delta = std::log(1.0 / privacy.delta);
  const double log_t_delta = std::log(static_cast<double>(T) / privacy.delta);

  OnlineParams out;
  out.T = T;
  out.d = d;
  if (mode == OnlineMode::kPaper) {
    out.k = CeilToSize(std::pow(dd, 3.5) * log_t * log_inv_delta / eps);
    out.U = CeilToSize(C * dd * dd * dd * std::max(1.0, std::log(dd * log_t)) *
                       static_cast<double>(out.k));
    out.K_budget = static_cast<int>(CeilToSize(C * dd * dd * dd));
    out.eps_sparse = eps / (std::pow(dd, 1.5) * log_t * log_inv_delta);
    out.eps_retrain = eps / (log_t_delta * dd * dd * dd);
    out.eps_stage = eps / (dd * log_t_delta);
  } else {
    out.k = kDeskK;
    out.U = kDeskU;
    out.K_budget = kDeskBudget;
    out.eps_sparse = kDeskEpsSparse;
    out.eps_retrain = kDeskEpsRetrain;
    out.eps_stage = kDeskEpsStage;
  }
  out.R = static_cast<int>(CeilToSize(c * log_t));
  if (k) out.k = *k;
  if (U) out.U = *U;
  if (K_budget) out.K_budget = *K_budget;
  if (R) out.R = *R;
  if (eps_sparse) out.eps_sparse = *eps_sparse;
  if (eps_retrain) out.eps_retrain = *eps_retrain;
  if (eps_stage) out.eps_stage = *eps_stage;
  if (out.R % 2 == 0) ++out.R;
  out.bottom_score = bottom_score.value_or(static_cast<double>(out.k) / 10.0);
  out.stage_threshold = 0.8 * static_cast<double>(out.k);
  out.mistake_bound = mistake_bound.value_or(
      static_cast<std::int64_t>(out.K_budget + 1) *
      static_cast<std::int64_t>((3 * out.U + 1) / 2));

  if (out.k < 1) throw ParameterError("k must be at least 1");
  if (out.U < 1) throw ParameterError("U must be at least 1");
  if (out.K_budget < 0) throw ParameterError("K_budget must be nonnegative");
  if (out.R < 1) throw ParameterError("R must be at least 1");
  if (!(out.eps_sparse > 0.0) || !(out.eps_retrain > 0.0) || !(out.eps_stage > 0.0)) {
    throw ParameterError("mechanism epsilons must be positive");
  }
  if (!(ledger_epsilon_factor > 0.0)) {
    throw ParameterError("ledger epsilon factor must be positive");
  }
  return out;
}

HypothesisClass DefineClass(const HypothesisClass& h,
                            std::span<const LabeledSequence> collection, int j,
                            int d) {
  if (d < 1) throw ParameterError("d must be at least 1");
  const Rational threshold = Rational(1, 10) * Pow(Rational(1) - Rational(1, d), j);
  std::vector<Hypothesis> kept;
  for (const Hypothesis& member : h) {
    bool ok = true;
    for (const LabeledSequence& sub : collection) {
      if (sub.empty()) continue;
      if (EmpiricalError(member, sub) > threshold) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(member);
  }
  return HypothesisClass(h.domain_size(), std::move(kept));
}

std::vector<LabeledSequence> SplitCounterexamples(std::span<const LabeledExample> e,
                                                  std::size_t k, Rng& rng) {
  if (k == 0) throw ParameterError("k must be at least 1");
  if (e.size() < k) {
    throw SplitTooSmallError("cannot split " + std::to_string(e.size()) +
                             " examples into " + std::to_string(k) + " blocks");
  }
  std::vector<std::size_t> order(e.size());
  std::iota(order.begin(), order.end(), 0);
  Shuffle(order, rng);
  const std::size_t size = e.size() / k;
  std::vector<LabeledSequence> out(k);
  for (std::size_t r = 0; r < size * k; ++r) out[r / size].push_back(e[order[r]]);
  return out;
}

bool CheckSplitQuality(const HypothesisClass& h,
                       std::span<const LabeledSequence> blocks, const Rational& slack) {
  for (const Hypothesis& member : h) {
    std::vector<Rational> errors;
    for (const LabeledSequence& block : blocks) {
      errors.push_back(EmpiricalError(member, block));
    }
    for (const Rational& a : errors) {
      for (const Rational& b : errors) {
        if (a < (Rational(1) - slack) * b || a > (Rational(1) + slack) * b) {
          return false;
        }
      }
    }
  }
  return true;
}

Hypothesis MajorityVote(std::span<const Hypothesis> votes) {
  if (votes.empty()) throw ParameterError("majority over no votes");
  const std::size_t n = votes[0].domain_size();
  BitVector out(n);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t ones = 0;
    for (const Hypothesis& v : votes) {
      if (v.domain_size() != n) throw DomainMismatchError("votes over different domains");
      if (v(x)) ++ones;
    }
    if (2 * ones > votes.size()) out.Set(x, true);
  }
  return Hypothesis(std::move(out));
}

const char* TrainOutcomeName(TrainOutcome outcome) {
  switch (outcome) {
    case TrainOutcome::kPublished:
      return "published";
    case TrainOutcome::kBottomFailure:
      return "bottom-failure";
    case TrainOutcome::kSplitTooSmall:
      return "split-too-small";
    case TrainOutcome::kHalt:
      return "halt";
  }
  return "?";
}

OnlineLearner::OnlineLearner(HypothesisClass h, const OnlineConfig& config,
                             std::uint64_t seed)
    : h_(std::move(h)),
      config_(config),
      params_(config.Resolve()),
      retrain_rng_(DeriveSeed(seed, 1)),
      stage_rng_(DeriveSeed(seed, 2)),
      sparse_rng_(DeriveSeed(seed, 3)),
      split_rng_(DeriveSeed(seed, 4)),
      retrain_test_(static_cast<double>(params_.U), params_.eps_retrain,
                    params_.K_budget, CountingMode::kAbove, config.noiseless_tests),
      stage_test_(params_.stage_threshold, params_.eps_stage, params_.d + 1,
                  CountingMode::kBelow, config.noiseless_tests),
      ledger_({config.ledger_epsilon_factor * config.privacy.epsilon,
               config.privacy.delta},
              config.privacy.delta / 4, config.block_constant),
      budget_remaining_(params_.K_budget),
      teachers_(params_.k) {
  if (h_.empty()) throw ParameterError("online learning over an empty class");
  if (Ldim(h_) > params_.d) throw ParameterError("ldim(H) exceeds d");
  const double delta = config.privacy.delta;
  const auto sparse_calls =
      static_cast<std::int64_t>(params_.R) * (params_.K_budget + 1);
  ledger_.AddAboveThresholdBlock("retrain-test", params_.eps_retrain,
                                 params_.K_budget, delta / 4);
  ledger_.AddAboveThresholdBlock("stage-test", params_.eps_stage, params_.d + 1,
                                 delta / 4);
  ledger_.AddSparseSample("sparse-select", static_cast<double>(h_.size()),
                          params_.eps_sparse,
                          delta / 4 / static_cast<double>(sparse_calls),
                          params_.bottom_score, sparse_calls);

  hypothesis_ = Hypothesis::Constant(h_.domain_size(), false);
  RetrainEvent first = JointTrain(0, 0);
  if (first.outcome == TrainOutcome::kHalt) halted_ = true;
  events_.push_back(std::move(first));
}

std::vector<HypothesisClass> OnlineLearner::TeacherClasses(int j) const {
  std::vector<HypothesisClass> out;
  out.reserve(teachers_.size());
  for (const auto& collection : teachers_) {
    out.push_back(DefineClass(h_, collection, j, params_.d));
  }
  return out;
}

const EssentialSet& OnlineLearner::Essential(const HypothesisClass& c,
                                             std::int64_t p) {
  auto key = std::make_pair(ClassKey(c), p);
  auto it = essential_cache_.find(key);
  if (it != essential_cache_.end()) return it->second;
  EssentialSet e = EssentialHypotheses(c, {p, params_.d}, config_.decomposition,
                                       config_.limits);
  return essential_cache_.emplace(std::move(key), std::move(e)).first->second;
}

RetrainEvent OnlineLearner::JointTrain(std::size_t t, std::size_t buffer_size) {
  RetrainEvent event;
  event.t = t;
  event.buffer_size = buffer_size;
  event.u = teachers_.empty() ? 0 : teachers_[0].size();
  event.j_before = j_star_;
  const std::int64_t d3 = static_cast<std::int64_t>(params_.d) * params_.d * params_.d;
  while (true) {
    if (j_star_ > params_.d + 1) {
      event.outcome = TrainOutcome::kHalt;
      break;
    }
    const std::vector<HypothesisClass> classes = TeacherClasses(j_star_);
    event.min_class_size = h_.size();
    event.max_class_size = 0;
    for (const HypothesisClass& c : classes) {
      event.min_class_size = std::min(event.min_class_size, c.size());
      event.max_class_size = std::max(event.max_class_size, c.size());
    }
    const std::int64_t p = j_star_ >= 40 ? std::numeric_limits<std::int64_t>::max()
                                         : (std::int64_t{1} << j_star_) * d3;
    std::vector<CandidateList> lists;
    lists.reserve(classes.size());
    for (const HypothesisClass& c : classes) {
      lists.push_back(MakeCandidateList(Essential(c, p).hypotheses, h_.size()));
    }
    const int m = MaxFrequency(lists);
    const ThresholdOutcome outcome = stage_test_.Query(m, stage_rng_);
    event.stage_tests.push_back(
        {j_star_, m, stage_test_.last_noisy_value(), outcome});
    if (outcome == ThresholdOutcome::kHalted) {
      event.outcome = TrainOutcome::kHalt;
      break;
    }
    if (outcome == ThresholdOutcome::kBelow) {
      ++j_star_;
      continue;
    }
    event.bottom_probability =
        BottomProbability(lists, params_.eps_sparse, params_.bottom_score);
    std::vector<Hypothesis> votes;
    for (int r = 0; r < params_.R; ++r) {
      SparseSampleOutcome drawn =
          SparseSample(lists, params_.eps_sparse, params_.bottom_score, sparse_rng_);
      if (drawn.is_bottom()) {
        ++event.bottoms;
      } else {
        votes.push_back(std::move(*drawn.hypothesis));
      }
    }
    if (votes.empty() || 2 * event.bottoms > params_.R) {
      event.outcome = TrainOutcome::kBottomFailure;
      break;
    }
    hypothesis_ = MajorityVote(votes);
    event.published = hypothesis_;
    event.outcome = TrainOutcome::kPublished;
    break;
  }
  event.j_after = j_star_;
  return event;
}

void OnlineLearner::Retrain(StepRecord& record) {
  std::vector<LabeledSequence> blocks;
  try {
    blocks = SplitCounterexamples(buffer_, params_.k, split_rng_);
  } catch (const SplitTooSmallError&) {
    RetrainEvent event;
    event.t = t_;
    event.buffer_size = buffer_.size();
    event.u = teachers_[0].size();
    event.j_before = event.j_after = j_star_;
    event.outcome = TrainOutcome::kSplitTooSmall;
    events_.push_back(std::move(event));
    return;
  }
  const bool split_ok = CheckSplitQuality(h_, blocks, Rational(1, 5 * params_.d));
  for (std::size_t i = 0; i < params_.k; ++i) {
    teachers_[i].push_back(std::move(blocks[i]));
  }
  RetrainEvent event = JointTrain(t_, buffer_.size());
  event.split_ok = split_ok;
  if (event.outcome == TrainOutcome::kPublished) buffer_.clear();
  if (event.outcome == TrainOutcome::kHalt) halted_ = true;
  record.j_star = j_star_;
  events_.push_back(std::move(event));
}

StepRecord OnlineLearner::Step(const LabeledExample& example) {
  if (example.point.index >= h_.domain_size()) {
    throw DomainMismatchError("stream point outside the domain");
  }
  ++t_;
  StepRecord record;
  record.t = t_;
  record.x = example.point.index;
  record.prediction = hypothesis_(example.point.index);
  record.truth = example.label;
  record.mistake = record.prediction != record.truth;
  if (record.mistake) buffer_.push_back(example);
  record.j_star = j_star_;
  if (!halted_) {
    const ThresholdOutcome outcome = retrain_test_.Query(
        static_cast<double>(buffer_.size()), retrain_rng_);
    record.noisy_buffer = retrain_test_.last_noisy_value();
    if (outcome == ThresholdOutcome::kHalted) {
      halted_ = true;
      budget_remaining_ = -1;
    } else if (outcome == ThresholdOutcome::kAbove) {
      --budget_remaining_;
      record.retrain = true;
      Retrain(record);
    }
  }
  record.buffer_size = buffer_.size();
  record.budget_remaining = budget_remaining_;
  record.halted = halted_;
  return record;
}

MistakeLog PrivateOnlineLearn(const HypothesisClass& h,
                              std::span<const LabeledExample> stream,
                              const OnlineConfig& config, std::uint64_t seed) {
  OnlineLearner learner(h, config, seed);
  MistakeLog log;
  log.params = learner.params();
  log.steps.reserve(stream.size());
  std::size_t since_retrain = 0;
  for (const LabeledExample& e : stream) {
    const bool was_halted = learner.halted();
    const std::size_t events_before = learner.events().size();
    StepRecord record = learner.Step(e);
    if (record.mistake) {
      ++log.mistakes;
      ++since_retrain;
    }
    if (learner.events().size() > events_before &&
        learner.events().back().outcome == TrainOutcome::kPublished) {
      since_retrain = 0;
    }
    if (record.retrain) ++log.retrains;
    if (!was_halted && learner.halted()) log.halt_step = record.t;
    log.steps.push_back(record);
  }
  log.events = learner.events();
  log.halted = learner.halted();
  if (log.halted && !log.halt_step) log.halt_step = 0;
  log.final_j_star = learner.j_star();
  log.mistakes_after_last_retrain = since_retrain;
  log.final_hypothesis = learner.hypothesis();
  log.ledger_basic = learner.ledger().Basic();
  log.ledger_best = learner.ledger().Best();
  log.ledger_within_target = learner.ledger().WithinTarget();
  log.ledger_certified = learner.ledger().AllCertified();
  return log;
}

void WriteMistakeLogCsv(std::ostream& out, const MistakeLog& log) {
  out << "t,x,prediction,truth,mistake,retrain,j_star\n";
  for (const StepRecord& s : log.steps) {
    out << s.t << ',' << s.x << ',' << int{s.prediction} << ',' << int{s.truth} << ','
        << int{s.mistake} << ',' << int{s.retrain} << ',' << s.j_star << '\n';
  }
}

void WriteMistakeLogSummary(std::ostream& out, const MistakeLog& log) {
  const OnlineParams& p = log.params;
  out << "{\"T\": " << p.T << ", \"d\": " << p.d << ", \"k\": " << p.k
      << ", \"U\": " << p.U << ", \"K_budget\": " << p.K_budget << ", \"R\": " << p.R
      << ", \"mistakes\": " << log.mistakes << ", \"retrains\": " << log.retrains
      << ", \"halted\": " << (log.halted ? "true" : "false")
      << ", \"final_j_star\": " << log.final_j_star
      << ", \"mistakes_after_last_retrain\": " << log.mistakes_after_last_retrain
      << ", \"final_hypothesis\": \"" << log.final_hypothesis.ToString() << "\""
      << ", \"ledger_basic_epsilon\": " << log.ledger_basic.epsilon
      << ", \"ledger_basic_delta\": " << log.ledger_basic.delta
      << ", \"ledger_best_epsilon\": " << log.ledger_best.epsilon
      << ", \"ledger_best_delta\": " << log.ledger_best.delta
      << ", \"ledger_within_target\": " << (log.ledger_within_target ? "true" : "false")
      << ", \"ledger_certified\": " << (log.ledger_certified ? "true" : "false")
      << "}\n";
}

}  // namespace lsdp
