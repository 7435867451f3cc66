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

// Command-line front end. Exit codes: 0 success, 1 usage or I/O error,
// 2 search budget exceeded, 3 failed assertion or invalid tree.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lsdp/decomposition.h"
#include "lsdp/erm.h"
#include "lsdp/errors.h"
#include "lsdp/harness.h"
#include "lsdp/hypothesis.h"
#include "lsdp/online.h"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBudget = 2;
constexpr int kExitAssertion = 3;

// Writes to `path`, or to stdout when path is empty or "-".
template <typename Fn>
void WithOutput(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw lsdp::ParseError("cannot write " + path);
  fn(out);
}

lsdp::DecompositionMode ParseMode(const std::string& s) {
  if (s == "exact") return lsdp::DecompositionMode::kExact;
  if (s == "approx" || s == "approximate") return lsdp::DecompositionMode::kApproximate;
  throw lsdp::ParameterError("unknown decomposition mode: " + s);
}

int DefaultD(const lsdp::HypothesisClass& h, std::optional<int> d, int floor) {
  return d ? *d : std::max(lsdp::Ldim(h), floor);
}

struct LdimArgs {
  std::string class_path;
};

int RunLdim(const LdimArgs& a) {
  const lsdp::HypothesisClass h = lsdp::ReadClassFile(a.class_path);
  std::cout << "ldim: " << lsdp::Ldim(h) << "\n";
  if (!h.empty()) std::cout << "soa: " << lsdp::SoaHypothesis(h).ToString() << "\n";
  return kExitOk;
}

struct DecomposeArgs {
  std::string class_path;
  std::int64_t p = 1;
  std::optional<int> d;
  std::string method = "greedy";
  std::string tree_out;
  bool essential = false;
  std::string mode = "exact";
  std::uint64_t max_expansions = 1'000'000;
};

int RunDecompose(const DecomposeArgs& a) {
  const lsdp::HypothesisClass h = lsdp::ReadClassFile(a.class_path);
  const lsdp::DecompositionParams params{a.p, DefaultD(h, a.d, 0)};
  lsdp::SearchLimits limits;
  limits.max_expansions = a.max_expansions;
  lsdp::DecompositionTree tree;
  if (a.method == "greedy") {
    tree = lsdp::GreedyDecomposition(h, params);
  } else if (a.method == "canonical") {
    tree = lsdp::CanonicalOptimalTree(h, params, limits);
  } else {
    throw lsdp::ParameterError("unknown method: " + a.method);
  }
  WithOutput(a.tree_out, [&](std::ostream& out) { lsdp::WriteTree(out, tree); });
  std::cout << "p: " << params.p << "\nd: " << params.d << "\n";
  std::cout << "degree: " << tree.Degree() << "\n";
  std::cout << "leaves: " << tree.Leaves().size() << "\n";
  if (a.essential) {
    const lsdp::EssentialSet e =
        lsdp::EssentialHypotheses(h, params, ParseMode(a.mode), limits);
    std::cout << "ddim: " << e.t << "\n";
    std::cout << "essential_mode: " << lsdp::ModeName(e.mode) << "\n";
    for (const lsdp::Hypothesis& f : e.hypotheses) {
      std::cout << "essential: " << f.ToString() << "\n";
    }
  }
  return kExitOk;
}

struct ValidateArgs {
  std::string class_path;
  std::string tree_path;
  std::int64_t p = 1;
  std::optional<int> d;
};

int RunValidate(const ValidateArgs& a) {
  const lsdp::HypothesisClass h = lsdp::ReadClassFile(a.class_path);
  std::ifstream in(a.tree_path);
  if (!in) throw lsdp::ParseError("cannot read " + a.tree_path);
  const lsdp::DecompositionTree tree =
      lsdp::ParseTree(in, h, {a.p, DefaultD(h, a.d, 0)});
  const lsdp::ValidationReport report = lsdp::ValidateTree(tree, h);
  if (report.valid) {
    std::cout << "valid\n";
    return kExitOk;
  }
  const lsdp::Violation& v = *report.violation;
  std::cout << "invalid: " << lsdp::ViolationName(v.kind) << " at node " << v.node
            << ": " << v.message << "\n";
  return kExitAssertion;
}

struct ErmArgs {
  std::string class_path;
  std::string data_path;
  std::string alpha = "1/5";
  double epsilon = 1.0;
  double delta = 1e-3;
  std::uint64_t seed = 0;
  std::size_t k = 600;
  std::optional<int> d;
  std::string mode = "exact";
  std::string transcript;
};

int RunErm(const ErmArgs& a) {
  const lsdp::HypothesisClass h = lsdp::ReadClassFile(a.class_path);
  const lsdp::LabeledSequence s = lsdp::ReadSequenceFile(a.data_path, h.domain_size());
  lsdp::ErmConfig c;
  c.alpha = lsdp::ParseRational(a.alpha);
  c.privacy = {a.epsilon, a.delta};
  c.d = DefaultD(h, a.d, 1);
  c.k = a.k;
  c.mode = ParseMode(a.mode);
  lsdp::Rng rng(a.seed);
  const lsdp::ErmResult r = lsdp::ErmLearn(h, s, c, rng);
  std::cout << "status: " << lsdp::ErmStatusName(r.status) << "\n";
  std::cout << "hypothesis: " << (r.hypothesis ? r.hypothesis->ToString() : "-") << "\n";
  if (r.hypothesis) {
    std::cout << "empirical_error: "
              << lsdp::ToString(lsdp::EmpiricalError(*r.hypothesis, s)) << "\n";
  }
  if (!a.transcript.empty()) {
    WithOutput(a.transcript,
               [&](std::ostream& out) { lsdp::WriteErmTranscript(out, r); });
  }
  return kExitOk;
}

struct OnlineArgs {
  std::string class_path;
  std::string stream_path;
  std::string mode = "DESK";
  std::uint64_t seed = 0;
  std::optional<int> d;
  double epsilon = 1.0;
  double delta = 1e-3;
  std::optional<std::size_t> k, u;
  std::optional<int> k_budget, r;
  std::optional<double> eps_sparse, eps_retrain, eps_stage;
  double c_big = 4.0, c_small = 3.0;
  bool noiseless = false;
  std::string approx = "exact";
  std::string csv;
  std::string summary = "-";
};

int RunOnline(const OnlineArgs& a) {
  const lsdp::HypothesisClass h = lsdp::ReadClassFile(a.class_path);
  const lsdp::LabeledSequence s =
      lsdp::ReadSequenceFile(a.stream_path, h.domain_size());
  lsdp::OnlineConfig c;
  c.T = std::max<std::size_t>(s.size(), 2);
  c.privacy = {a.epsilon, a.delta};
  c.d = DefaultD(h, a.d, 1);
  c.mode = lsdp::ParseOnlineMode(a.mode);
  c.C = a.c_big;
  c.c = a.c_small;
  c.k = a.k;
  c.U = a.u;
  c.K_budget = a.k_budget;
  c.R = a.r;
  c.eps_sparse = a.eps_sparse;
  c.eps_retrain = a.eps_retrain;
  c.eps_stage = a.eps_stage;
  c.noiseless_tests = a.noiseless;
  c.decomposition = ParseMode(a.approx);
  const lsdp::MistakeLog log = lsdp::PrivateOnlineLearn(h, s, c, a.seed);
  if (!a.csv.empty()) {
    WithOutput(a.csv, [&](std::ostream& out) { lsdp::WriteMistakeLogCsv(out, log); });
  }
  WithOutput(a.summary,
             [&](std::ostream& out) { lsdp::WriteMistakeLogSummary(out, log); });
  return kExitOk;
}

struct BaselineArgs {
  std::string class_path;
  std::string stream_path;
  std::string algorithm = "soa";
};

int RunBaseline(const BaselineArgs& a) {
  const lsdp::HypothesisClass h = lsdp::ReadClassFile(a.class_path);
  const lsdp::LabeledSequence s =
      lsdp::ReadSequenceFile(a.stream_path, h.domain_size());
  std::size_t mistakes = 0;
  double bound = 0.0;
  if (a.algorithm == "soa") {
    mistakes = lsdp::RunSoaBaseline(h, s);
    bound = lsdp::Ldim(h);
  } else if (a.algorithm == "halving") {
    mistakes = lsdp::RunHalvingBaseline(h, s);
    bound = std::log2(static_cast<double>(h.size()));
  } else {
    throw lsdp::ParameterError("unknown baseline: " + a.algorithm);
  }
  std::cout << "mistakes: " << mistakes << "\nbound: " << bound << "\n";
  if (static_cast<double>(mistakes) > bound + 1e-9) {
    throw lsdp::AssertionFailure("baseline exceeded its mistake bound");
  }
  return kExitOk;
}

struct AuditArgs {
  std::string scenario = "all";
  std::size_t trials = 50000;
  double epsilon = 1.0;
  double delta = 0.05;
  std::uint64_t seed = 0;
};

int RunAudit(const AuditArgs& a) {
  std::vector<std::string> names = {a.scenario};
  if (a.scenario == "all") names = lsdp::AuditScenarioNames();
  bool as_expected = true;
  for (const std::string& name : names) {
    const lsdp::AuditReport r =
        lsdp::RunAuditScenario(name, a.trials, a.epsilon, a.delta, a.seed);
    std::cout << lsdp::FormatAuditReport(r) << "\n";
    as_expected = as_expected && (r.passed() == (name != "no-noise-control"));
  }
  return as_expected ? kExitOk : kExitAssertion;
}

template <typename T>
void Get(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <typename T>
void GetOptional(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

lsdp::ExperimentConfig ParseExperiment(const json& j) {
  lsdp::ExperimentConfig c;
  std::string learner = "SOA_BASELINE";
  Get(j, "learner", learner);
  c.learner = lsdp::ParseLearner(learner);
  Get(j, "repetitions", c.repetitions);
  Get(j, "seed", c.seed);
  const json cls = j.value("class", json::object());
  std::string family = "THRESHOLDS";
  Get(cls, "family", family);
  c.stream.class_spec.family = lsdp::ParseClassFamily(family);
  Get(cls, "domain_size", c.stream.class_spec.domain_size);
  Get(cls, "members", c.stream.class_spec.members);
  Get(cls, "seed", c.stream.class_spec.seed);
  Get(cls, "path", c.stream.class_spec.path);
  const json st = j.value("stream", json::object());
  std::string order = "RANDOM_PERM";
  Get(st, "order", order);
  c.stream.order = lsdp::ParseAdversaryOrder(order);
  Get(st, "T", c.stream.T);
  GetOptional(st, "target_index", c.stream.target_index);
  Get(st, "crafted_path", c.stream.crafted_path);

  const lsdp::HypothesisClass h = lsdp::GenerateClass(c.stream.class_spec);
  const json on = j.value("online", json::object());
  std::string mode = "DESK";
  Get(on, "mode", mode);
  c.online.mode = lsdp::ParseOnlineMode(mode);
  c.online.d = std::max(lsdp::Ldim(h), 1);
  Get(on, "d", c.online.d);
  Get(on, "epsilon", c.online.privacy.epsilon);
  Get(on, "delta", c.online.privacy.delta);
  Get(on, "C", c.online.C);
  Get(on, "c", c.online.c);
  GetOptional(on, "k", c.online.k);
  GetOptional(on, "U", c.online.U);
  GetOptional(on, "K_budget", c.online.K_budget);
  GetOptional(on, "R", c.online.R);
  GetOptional(on, "eps_sparse", c.online.eps_sparse);
  GetOptional(on, "eps_retrain", c.online.eps_retrain);
  GetOptional(on, "eps_stage", c.online.eps_stage);
  Get(on, "noiseless_tests", c.online.noiseless_tests);

  const json erm = j.value("erm", json::object());
  std::string alpha = "1/5";
  Get(erm, "alpha", alpha);
  c.erm.alpha = lsdp::ParseRational(alpha);
  c.erm.d = std::max(lsdp::Ldim(h), 1);
  Get(erm, "d", c.erm.d);
  Get(erm, "k", c.erm.k);
  Get(erm, "epsilon", c.erm.privacy.epsilon);
  Get(erm, "delta", c.erm.privacy.delta);
  std::string erm_mode = "exact";
  Get(erm, "mode", erm_mode);
  c.erm.mode = ParseMode(erm_mode);
  return c;
}

struct ExperimentArgs {
  std::string config_path;
  std::string out;
};

int RunExperimentCommand(const ExperimentArgs& a) {
  std::ifstream in(a.config_path);
  if (!in) throw lsdp::ParseError("cannot read " + a.config_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw lsdp::ParseError(std::string("bad config: ") + e.what());
  }
  std::string out_path = a.out;
  if (out_path.empty()) out_path = j.value("output", std::string("-"));
  lsdp::ExperimentConfig config;
  try {
    config = ParseExperiment(j);
  } catch (const json::exception& e) {
    throw lsdp::ParseError(std::string("bad config: ") + e.what());
  }
  const auto start = std::chrono::steady_clock::now();
  const std::vector<lsdp::ResultRecord> records = lsdp::RunExperiment(config);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  WithOutput(out_path, [&](std::ostream& out) { lsdp::WriteResultsCsv(out, records); });
  const lsdp::MistakeSummary s = lsdp::SummarizeMistakes(records);
  std::cerr << "runs: " << records.size() << " mean_mistakes: " << s.mean
            << " p95_mistakes: " << s.p95 << " wall_seconds: " << elapsed.count()
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private learning of finite Littlestone classes"};
  app.require_subcommand(1);

  LdimArgs ldim;
  auto* ldim_cmd = app.add_subcommand("ldim", "Littlestone dimension and SOA");
  ldim_cmd->add_option("--class", ldim.class_path, "Class file")->required();

  DecomposeArgs dec;
  auto* dec_cmd = app.add_subcommand("decompose", "Build a decomposition tree");
  dec_cmd->add_option("--class", dec.class_path, "Class file")->required();
  dec_cmd->add_option("--p", dec.p, "Depth multiplier p");
  dec_cmd->add_option("--d", dec.d, "Dimension bound d (default ldim)");
  dec_cmd->add_option("--method", dec.method, "greedy or canonical");
  dec_cmd->add_option("--tree-out", dec.tree_out, "Tree dump path (default stdout)");
  dec_cmd->add_flag("--essential", dec.essential, "Also print essential hypotheses");
  dec_cmd->add_option("--mode", dec.mode, "exact or approx");
  dec_cmd->add_option("--max-expansions", dec.max_expansions, "Search node cap");

  ValidateArgs val;
  auto* val_cmd = app.add_subcommand("validate", "Validate a tree dump");
  val_cmd->add_option("--class", val.class_path, "Class file")->required();
  val_cmd->add_option("--tree", val.tree_path, "Tree dump")->required();
  val_cmd->add_option("--p", val.p, "Depth multiplier p");
  val_cmd->add_option("--d", val.d, "Dimension bound d (default ldim)");

  ErmArgs erm;
  auto* erm_cmd = app.add_subcommand("erm", "Private empirical risk minimization");
  erm_cmd->add_option("--class", erm.class_path, "Class file")->required();
  erm_cmd->add_option("--data", erm.data_path, "Dataset file")->required();
  erm_cmd->add_option("--alpha", erm.alpha, "Target error as a rational");
  erm_cmd->add_option("--epsilon", erm.epsilon, "Privacy epsilon");
  erm_cmd->add_option("--delta", erm.delta, "Privacy delta");
  erm_cmd->add_option("--seed", erm.seed, "Random seed");
  erm_cmd->add_option("--k", erm.k, "Chunk count");
  erm_cmd->add_option("--d", erm.d, "Dimension bound d (default ldim)");
  erm_cmd->add_option("--mode", erm.mode, "exact or approx");
  erm_cmd->add_option("--transcript", erm.transcript, "Transcript path");

  OnlineArgs on;
  auto* on_cmd = app.add_subcommand("online", "Private online learning");
  on_cmd->add_option("--class", on.class_path, "Class file")->required();
  on_cmd->add_option("--stream", on.stream_path, "Stream file")->required();
  on_cmd->add_option("--mode", on.mode, "PAPER or DESK");
  on_cmd->add_option("--seed", on.seed, "Random seed");
  on_cmd->add_option("--d", on.d, "Dimension bound d (default ldim)");
  on_cmd->add_option("--epsilon", on.epsilon, "Privacy epsilon");
  on_cmd->add_option("--delta", on.delta, "Privacy delta");
  on_cmd->add_option("--k", on.k, "Teacher count");
  on_cmd->add_option("--U", on.u, "Retrain mistake threshold");
  on_cmd->add_option("--K-budget", on.k_budget, "Retrain budget");
  on_cmd->add_option("--R", on.r, "Sparse selections per retrain");
  on_cmd->add_option("--eps-sparse", on.eps_sparse, "Sparse selection epsilon");
  on_cmd->add_option("--eps-retrain", on.eps_retrain, "Retrain test epsilon");
  on_cmd->add_option("--eps-stage", on.eps_stage, "Stage test epsilon");
  on_cmd->add_option("--C", on.c_big, "Constant C of the PAPER formulas");
  on_cmd->add_option("--c", on.c_small, "Constant c of R = ceil(c ln T)");
  on_cmd->add_flag("--noiseless-tests", on.noiseless, "Remove test noise");
  on_cmd->add_option("--decomposition", on.approx, "exact or approx");
  on_cmd->add_option("--csv", on.csv, "Mistake log CSV path");
  on_cmd->add_option("--summary", on.summary, "Summary JSON path (default stdout)");

  BaselineArgs base;
  auto* base_cmd = app.add_subcommand("baseline", "Non-private baselines");
  base_cmd->add_option("--class", base.class_path, "Class file")->required();
  base_cmd->add_option("--stream", base.stream_path, "Stream file")->required();
  base_cmd->add_option("--algorithm", base.algorithm, "soa or halving");

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("dp-audit", "Empirical privacy audit");
  audit_cmd->add_option("--scenario", audit.scenario, "Scenario name or all");
  audit_cmd->add_option("--trials", audit.trials, "Trials per neighbor");
  audit_cmd->add_option("--epsilon", audit.epsilon, "Mechanism epsilon");
  audit_cmd->add_option("--delta", audit.delta, "Mechanism delta");
  audit_cmd->add_option("--seed", audit.seed, "Random seed");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a JSON-configured experiment");
  exp_cmd->add_option("--config", exp.config_path, "Config file")->required();
  exp_cmd->add_option("--out", exp.out, "CSV path (overrides config output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ldim_cmd) return RunLdim(ldim);
    if (*dec_cmd) return RunDecompose(dec);
    if (*val_cmd) return RunValidate(val);
    if (*erm_cmd) return RunErm(erm);
    if (*on_cmd) return RunOnline(on);
    if (*base_cmd) return RunBaseline(base);
    if (*audit_cmd) return RunAudit(audit);
    if (*exp_cmd) return RunExperimentCommand(exp);
  } catch (const lsdp::BudgetExceededError& e) {
    std::cerr << "budget exceeded: " << e.what()
              << " (best known upper bound " << e.best_upper_bound() << ")\n";
    return kExitBudget;
  } catch (const lsdp::AssertionFailure& e) {
    std::cerr << "assertion failed: " << e.what() << "\n";
    return kExitAssertion;
  } catch (const lsdp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
