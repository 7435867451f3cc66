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

#include "lsdp/harness.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <set>

#include "lsdp/class_index.h"
#include "lsdp/errors.h"

namespace lsdp {

namespace {

std::string Lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(ch));
  for (char& ch : s) {
    if (ch == '-') ch = '_';
  }
  return s;
}

}  // namespace

const char* ClassFamilyName(ClassFamily family) {
  switch (family) {
    case ClassFamily::kThresholds:
      return "THRESHOLDS";
    case ClassFamily::kIntervals:
      return "INTERVALS";
    case ClassFamily::kRandom:
      return "RANDOM";
    case ClassFamily::kFromFile:
      return "FROM_FILE";
  }
  return "?";
}

ClassFamily ParseClassFamily(const std::string& name) {
  const std::string s = Lower(name);
  if (s == "thresholds") return ClassFamily::kThresholds;
  if (s == "intervals") return ClassFamily::kIntervals;
  if (s == "random") return ClassFamily::kRandom;
  if (s == "from_file") return ClassFamily::kFromFile;
  throw ParameterError("unknown class family: " + name);
}

HypothesisClass GenerateClass(const ClassSpec& spec) {
  const std::size_t n = spec.domain_size;
  std::vector<Hypothesis> members;
  switch (spec.family) {
    case ClassFamily::kThresholds:
      for (std::size_t t = 0; t <= n; ++t) {
        BitVector v(n);
        for (std::size_t x = t; x < n; ++x) v.Set(x, true);
        members.emplace_back(std::move(v));
      }
      break;
    case ClassFamily::kIntervals:
      members.push_back(Hypothesis::Constant(n, false));
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
          BitVector v(n);
          for (std::size_t x = a; x <= b; ++x) v.Set(x, true);
          members.emplace_back(std::move(v));
        }
      }
      break;
    case ClassFamily::kRandom: {
      if (n < 63 && spec.members > (std::size_t{1} << n)) {
        throw ParameterError("more random members than functions on the domain");
      }
      Rng rng(DeriveSeed(spec.seed, 0));
      std::set<Hypothesis> seen;
      while (seen.size() < spec.members) {
        BitVector v(n);
        for (std::size_t x = 0; x < n; ++x) v.Set(x, (rng() >> 63) != 0);
        seen.emplace(std::move(v));
      }
      members.assign(seen.begin(), seen.end());
      break;
    }
    case ClassFamily::kFromFile:
      return ReadClassFile(spec.path);
  }
  return HypothesisClass(n, std::move(members));
}

const char* AdversaryOrderName(AdversaryOrder order) {
  switch (order) {
    case AdversaryOrder::kNatural:
      return "NATURAL";
    case AdversaryOrder::kRandomPerm:
      return "RANDOM_PERM";
    case AdversaryOrder::kCrafted:
      return "CRAFTED";
  }
  return "?";
}

AdversaryOrder ParseAdversaryOrder(const std::string& name) {
  const std::string s = Lower(name);
  if (s == "natural") return AdversaryOrder::kNatural;
  if (s == "random_perm") return AdversaryOrder::kRandomPerm;
  if (s == "crafted") return AdversaryOrder::kCrafted;
  throw ParameterError("unknown adversary order: " + name);
}

GeneratedStream GenerateStream(const StreamSpec& spec, const HypothesisClass& h) {
  if (h.empty()) throw ParameterError("stream over an empty class");
  const std::size_t n = h.domain_size();
  if (n == 0) throw ParameterError("stream over an empty domain");
  Rng rng(DeriveSeed(spec.seed, 1));
  const std::size_t target_index =
      spec.target_index ? *spec.target_index : UniformIndex(rng, h.size());
  if (target_index >= h.size()) throw ParameterError("target index out of range");
  GeneratedStream out{h[target_index], {}};

  std::vector<std::size_t> points;
  switch (spec.order) {
    case AdversaryOrder::kNatural:
      for (std::size_t t = 0; t < spec.T; ++t) points.push_back(t % n);
      break;
    case AdversaryOrder::kRandomPerm: {
      std::vector<std::size_t> perm(n);
      while (points.size() < spec.T) {
        std::iota(perm.begin(), perm.end(), 0);
        Shuffle(perm, rng);
        for (std::size_t x : perm) {
          if (points.size() < spec.T) points.push_back(x);
        }
      }
      break;
    }
    case AdversaryOrder::kCrafted: {
      const LabeledSequence crafted = ReadSequenceFile(spec.crafted_path, n);
      if (crafted.empty() && spec.T > 0) throw ParameterError("empty crafted stream");
      for (std::size_t t = 0; t < spec.T; ++t) {
        points.push_back(crafted[t % crafted.size()].point.index);
      }
      break;
    }
  }
  out.stream.reserve(points.size());
  for (std::size_t x : points) out.stream.push_back({DomainPoint{x}, out.target(x)});
  if (!IsConsistent(out.target, out.stream)) {
    throw AssertionFailure("generated stream is not consistent with its target");
  }
  return out;
}

bool IsRealizable(const HypothesisClass& h, std::span<const LabeledExample> stream) {
  return !RestrictSeq(h, stream).empty();
}

std::size_t RunSoaBaseline(const HypothesisClass& h,
                           std::span<const LabeledExample> stream) {
  ClassIndex index(h);
  MemberSet alive = index.All();
  std::size_t mistakes = 0;
  for (const LabeledExample& e : stream) {
    if (e.point.index >= h.domain_size()) {
      throw DomainMismatchError("stream point outside the domain");
    }
    if (alive.None()) throw NotRealizableError("version space is empty");
    if (index.Soa(alive, e.point.index) != e.label) ++mistakes;
    alive = index.Restrict(alive, e.point.index, e.label);
  }
  if (alive.None()) throw NotRealizableError("version space is empty");
  return mistakes;
}

std::size_t RunHalvingBaseline(const HypothesisClass& h,
                               std::span<const LabeledExample> stream) {
  std::vector<Hypothesis> alive(h.begin(), h.end());
  std::size_t mistakes = 0;
  for (const LabeledExample& e : stream) {
    if (e.point.index >= h.domain_size()) {
      throw DomainMismatchError("stream point outside the domain");
    }
    if (alive.empty()) throw NotRealizableError("version space is empty");
    const auto ones = static_cast<std::size_t>(
        std::count_if(alive.begin(), alive.end(),
                      [&](const Hypothesis& m) { return m(e.point.index); }));
    const bool prediction = 2 * ones > alive.size();
    if (prediction != e.label) ++mistakes;
    std::erase_if(alive, [&](const Hypothesis& m) { return m(e.point.index) != e.label; });
  }
  if (alive.empty()) throw NotRealizableError("version space is empty");
  return mistakes;
}

const char* LearnerName(LearnerKind learner) {
  switch (learner) {
    case LearnerKind::kDpOnline:
      return "DP_ONLINE";
    case LearnerKind::kDpErm:
      return "DP_ERM";
    case LearnerKind::kSoaBaseline:
      return "SOA_BASELINE";
    case LearnerKind::kHalvingBaseline:
      return "HALVING_BASELINE";
  }
  return "?";
}

LearnerKind ParseLearner(const std::string& name) {
  const std::string s = Lower(name);
  if (s == "dp_online") return LearnerKind::kDpOnline;
  if (s == "dp_erm") return LearnerKind::kDpErm;
  if (s == "soa_baseline" || s == "soa") return LearnerKind::kSoaBaseline;
  if (s == "halving_baseline" || s == "halving") return LearnerKind::kHalvingBaseline;
  throw ParameterError("unknown learner: " + name);
}

std::vector<ResultRecord> RunExperiment(const ExperimentConfig& config) {
  if (config.repetitions < 1) throw ParameterError("repetitions must be at least 1");
  const HypothesisClass h = GenerateClass(config.stream.class_spec);
  const int ldim = Ldim(h);
  std::vector<ResultRecord> out;
  for (std::size_t r = 0; r < config.repetitions; ++r) {
    ResultRecord rec;
    rec.repetition = r;
    rec.seed = DeriveSeed(config.seed, r);
    rec.learner = LearnerName(config.learner);
    rec.family = ClassFamilyName(config.stream.class_spec.family);
    rec.domain_size = h.domain_size();
    rec.class_size = h.size();
    rec.ldim = ldim;
    rec.d = ldim;
    StreamSpec spec = config.stream;
    spec.seed = rec.seed;
    const GeneratedStream gen = GenerateStream(spec, h);
    rec.horizon = gen.stream.size();
    rec.realizable = IsRealizable(h, gen.stream);
    const std::uint64_t learner_seed = DeriveSeed(rec.seed, 2);
    switch (config.learner) {
      case LearnerKind::kSoaBaseline: {
        rec.mistakes = RunSoaBaseline(h, gen.stream);
        rec.bound_ok = static_cast<int>(*rec.mistakes) <= ldim;
        if (!rec.bound_ok) {
          throw AssertionFailure("SOA baseline exceeded ldim(H) mistakes");
        }
        break;
      }
      case LearnerKind::kHalvingBaseline: {
        rec.mistakes = RunHalvingBaseline(h, gen.stream);
        rec.bound_ok = static_cast<double>(*rec.mistakes) <=
                       std::log2(static_cast<double>(h.size())) + 1e-9;
        if (!rec.bound_ok) {
          throw AssertionFailure("halving baseline exceeded log2|H| mistakes");
        }
        break;
      }
      case LearnerKind::kDpOnline: {
        OnlineConfig oc = config.online;
        oc.T = std::max<std::size_t>(gen.stream.size(), 2);
        rec.d = oc.d;
        try {
          const MistakeLog log = PrivateOnlineLearn(h, gen.stream, oc, learner_seed);
          rec.mistakes = log.mistakes;
          rec.retrains = log.retrains;
          rec.ledger_epsilon = log.ledger_best.epsilon;
          rec.ledger_delta = log.ledger_best.delta;
          rec.bound_ok = static_cast<std::int64_t>(log.mistakes) <= log.params.mistake_bound;
          if (log.halted) rec.status = "halted";
        } catch (const Error& e) {
          rec.status = std::string("error: ") + e.what();
        }
        break;
      }
      case LearnerKind::kDpErm: {
        rec.d = config.erm.d;
        try {
          Rng rng(learner_seed);
          const ErmResult res = ErmLearn(h, gen.stream, config.erm, rng);
          const PrivacyParams best = res.ledger.Best();
          rec.ledger_epsilon = best.epsilon;
          rec.ledger_delta = best.delta;
          rec.status = ErmStatusName(res.status);
          if (res.hypothesis) {
            rec.empirical_error = EmpiricalError(*res.hypothesis, gen.stream);
            rec.bound_ok = *rec.empirical_error <= config.erm.alpha;
          } else {
            rec.bound_ok = false;
          }
        } catch (const Error& e) {
          rec.status = std::string("error: ") + e.what();
          rec.bound_ok = false;
        }
        break;
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void WriteResultsCsv(std::ostream& out, std::span<const ResultRecord> records) {
  out << "repetition,seed,learner,family,domain_size,class_size,ldim,d,horizon,"
         "mistakes,empirical_error,retrains,ledger_epsilon,ledger_delta,status,"
         "realizable,bound_ok\n";
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << std::setprecision(10);
  for (const ResultRecord& r : records) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << r.repetition << ',' << r.seed << ',' << r.learner << ',' << r.family << ','
        << r.domain_size << ',' << r.class_size << ',' << r.ldim << ',' << r.d << ','
        << r.horizon << ',';
    if (r.mistakes) out << *r.mistakes;
    out << ',';
    if (r.empirical_error) out << ToString(*r.empirical_error);
    out << ',' << r.retrains << ',' << r.ledger_epsilon << ',' << r.ledger_delta << ','
        << status << ',' << int{r.realizable} << ',' << int{r.bound_ok} << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

MistakeSummary SummarizeMistakes(std::span<const ResultRecord> records) {
  std::vector<std::size_t> values;
  for (const ResultRecord& r : records) {
    if (r.mistakes) values.push_back(*r.mistakes);
  }
  MistakeSummary out;
  out.runs = values.size();
  if (values.empty()) return out;
  std::sort(values.begin(), values.end());
  out.mean = static_cast<double>(std::accumulate(values.begin(), values.end(),
                                                 std::size_t{0})) /
             static_cast<double>(values.size());
  const auto rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(values.size())));
  out.p95 = values[std::max<std::size_t>(rank, 1) - 1];
  return out;
}

std::vector<std::string> AuditScenarioNames() {
  return {"sparse-sample", "sparse-sample-new-candidate", "above-threshold",
          "no-noise-control"};
}

AuditReport RunAuditScenario(const std::string& name, std::size_t trials,
                             double epsilon, double delta, std::uint64_t seed) {
  PrivacyParams{epsilon, delta}.Validate();
  const Hypothesis h = Hypothesis::FromString("01");
  const Hypothesis g = Hypothesis::FromString("10");
  auto sparse = [epsilon](std::vector<CandidateList> lists, double bottom) {
    return [lists = std::move(lists), epsilon, bottom](Rng& rng) {
      const SparseSampleOutcome out = SparseSample(lists, epsilon, bottom, rng);
      return out.is_bottom() ? std::string("bottom") : out.hypothesis->ToString();
    };
  };
  if (name == "sparse-sample") {
    const double bottom = SparseSampleMinBottomScore(1, epsilon, delta);
    const auto k = static_cast<std::size_t>(std::ceil(bottom));
    std::vector<CandidateList> d(k, MakeCandidateList({h}, 1));
    std::vector<CandidateList> nb(d.begin(), d.end() - 1);
    return DpAudit(name, sparse(d, bottom), sparse(nb, bottom), trials, 2 * epsilon,
                   delta, seed);
  }
  if (name == "sparse-sample-new-candidate") {
    const double bottom = SparseSampleMinBottomScore(1, epsilon, delta);
    const auto k = static_cast<std::size_t>(std::ceil(bottom));
    std::vector<CandidateList> d(k, MakeCandidateList({h}, 1));
    std::vector<CandidateList> nb = d;
    nb.push_back(MakeCandidateList({g}, 1));
    return DpAudit(name, sparse(d, bottom), sparse(nb, bottom), trials, 2 * epsilon,
                   delta, seed);
  }
  if (name == "above-threshold") {
    auto run = [epsilon](double shift) {
      return [epsilon, shift](Rng& rng) {
        AboveThreshold test(3.0, epsilon, 1, CountingMode::kAbove);
        std::string out;
        for (double v : {0.0, 1.0, 2.0, 2.0, 3.0}) {
          const ThresholdOutcome o = test.Query(v + shift, rng);
          if (o == ThresholdOutcome::kHalted) break;
          out += o == ThresholdOutcome::kAbove ? 'A' : 'B';
        }
        return out;
      };
    };
    return DpAudit(name, run(0.0), run(1.0), trials,
                   AboveThresholdBlockEpsilon(epsilon, 1, delta), delta, seed);
  }
  if (name == "no-noise-control") {
    auto argmax = [](std::vector<CandidateList> lists) {
      return [lists = std::move(lists)](Rng&) {
        const auto scored = ScoreCandidates(lists);
        if (scored.empty()) return std::string("bottom");
        const auto best = std::max_element(
            scored.begin(), scored.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              return a.score < b.score;
            });
        return best->hypothesis.ToString();
      };
    };
    std::vector<CandidateList> d = {MakeCandidateList({h}, 1),
                                    MakeCandidateList({h}, 1),
                                    MakeCandidateList({g}, 1)};
    std::vector<CandidateList> nb = {MakeCandidateList({h}, 1),
                                     MakeCandidateList({g}, 1),
                                     MakeCandidateList({g}, 1)};
    return DpAudit(name, argmax(d), argmax(nb), trials, 2 * epsilon, delta, seed);
  }
  throw ParameterError("unknown audit scenario: " + name);
}

}  // namespace lsdp
