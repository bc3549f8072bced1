// Copyright 2026 The procure Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: validate, clear, certify, attack, oracle-check and
// compare on instance files.
//
// Exit status: 0 success, 1 certification failure or profitable attack,
// 2 input error, 3 pivotal bidder or infeasible auction.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "procure/io/instance_file.hpp"
#include "procure/io/report.hpp"
#include "procure/procure.hpp"

namespace procure::cli {
namespace {

using io::Json;

enum ExitCode { kOk = 0, kCheckFailed = 1, kInputError = 2, kInfeasible = 3 };

struct Options {
  std::string format = "json";
  std::vector<std::string> files;
  std::string mechanism = "vcg";
  std::string mode = "single";
  std::string check = "both";
  bool full_pairs = false;
  std::optional<std::uint64_t> seed;
  int count = 100;
  std::size_t size = 6;
  std::size_t levels = 4;
  std::int64_t max_cost = 100000;
  std::int64_t increment = 10;
  std::string shape = "arbitrary";
};

bool table(const Options& o) { return o.format == "table"; }

int emit(const Options& o, const Json& json, const std::string& text, int code) {
  std::cout << (table(o) ? text : io::dump(json));
  return code;
}

Json header(const io::InstanceFile& f) {
  return Json{{"instance", f.name},
              {"demand_mw", io::to_json(f.instance.demand())},
              {"increment_mw", io::to_json(f.instance.increment())}};
}

int cmd_validate(const Options& o) {
  const auto file = io::load_instance_file(o.files.front());
  const auto reports = validate_instance(file.instance);
  bool ok = true;
  Json list = Json::array();
  for (const auto& r : reports) {
    ok = ok && r.ok();
    list.push_back(io::to_json(r));
  }
  Json json = header(file);
  json["valid"] = ok;
  json["participants"] = list;
  return emit(o, json, io::render_table(reports) + (ok ? "valid\n" : "INVALID\n"),
              ok ? kOk : kCheckFailed);
}

template <class Outcome>
int report_outcome(const Options& o, const io::InstanceFile& file, const Outcome& out) {
  Json json = header(file);
  json["mode"] = o.mode;
  json["outcome"] = io::to_json(out);
  return emit(o, json, io::render_table(out), kOk);
}

int cmd_clear(const Options& o) {
  const auto file = io::load_instance_file(o.files.front());
  const bool vcg = o.mechanism == "vcg";
  if (o.mode == "twostage") {
    const auto inst = file.two_stage();
    return report_outcome(o, file, vcg ? two_stage_vcg(inst) : two_stage_pay_as_bid(inst));
  }
  return report_outcome(o, file, vcg ? run_vcg(file.instance) : run_pay_as_bid(file.instance));
}

template <ClearingModel Model>
int certify(const Options& o, const io::InstanceFile& file, const Model& model) {
  const auto& inst = model.instance();
  Json json = header(file);
  json["mode"] = o.mode;
  std::string text;
  bool ok = true;
  if (o.check == "audit") {
    const auto audit = core_monotonicity_audit(model, inst.all());
    json["audit"] = io::to_json(audit, inst);
    text += io::render_table(audit, inst);
    ok = audit.consistent();
  }
  if (o.check == "core" || o.check == "both") {
    const auto core = core_check(model);
    json["core"] = io::to_json(core, inst);
    text += io::render_table(core, inst);
    ok = ok && core.in_core;
  }
  if (o.check == "monotonicity" || o.check == "both") {
    const auto mono = payoff_monotonicity_check(
        model, inst.all(), o.full_pairs ? PairMode::kAllNested : PairMode::kAdjacent);
    json["monotonicity"] = io::to_json(mono, inst);
    text += io::render_table(mono, inst);
    ok = ok && mono.monotone;
  }
  json["certified"] = ok;
  return emit(o, json, text, ok ? kOk : kCheckFailed);
}

int cmd_certify(const Options& o) {
  const auto file = io::load_instance_file(o.files.front());
  if (o.mode == "twostage") return certify(o, file, TwoStageModel(file.two_stage()));
  return certify(o, file, SingleStageModel(file.instance));
}

int cmd_attack(const Options& o) {
  const auto file = io::load_instance_file(o.files.front());
  const auto verdict = evaluate(file.attack_scenario());
  Json json = header(file);
  json["attack"] = io::to_json(verdict);
  return emit(o, json, io::render_table(verdict), verdict.profitable ? kCheckFailed : kOk);
}

struct OracleTally {
  int instances = 0;
  int clearing_mismatches = 0;
  int audits = 0;
  int audit_discrepancies = 0;
  Json failures = Json::array();
};

void oracle_one(const AuctionInstance& inst, const std::string& label, OracleTally& tally) {
  ++tally.instances;
  const auto dp = clear(inst);
  const auto bf = brute_force_clear(inst, inst.all());
  if (dp.feasible != bf.feasible ||
      (dp.feasible && (dp.optimal_cost != bf.optimal_cost || dp.allocation != bf.allocation))) {
    ++tally.clearing_mismatches;
    tally.failures.push_back(Json{{"instance", label}, {"check", "clearing"}});
  }
  if (inst.size() > kDefaultAuditLimit) return;
  const SingleStageModel model(inst);
  try {
    ++tally.audits;
    if (!core_monotonicity_audit(model, inst.all()).consistent()) {
      ++tally.audit_discrepancies;
      tally.failures.push_back(Json{{"instance", label}, {"check", "audit"}});
    }
  } catch (const PivotalBidderError&) {
    // A pivotal winner has no Clarke payment; nothing to compare.
    --tally.audits;
  }
}

int cmd_oracle_check(const Options& o) {
  OracleTally tally;
  Json json;
  if (!o.files.empty()) {
    const auto file = io::load_instance_file(o.files.front());
    oracle_one(file.instance, file.name.empty() ? o.files.front() : file.name, tally);
    json["instance"] = file.name;
  } else {
    if (!o.seed) throw InputError("oracle-check needs an instance file or --seed");
    RandomInstanceParams params;
    params.max_participants = o.size;
    params.max_levels = o.levels;
    params.max_cost = o.max_cost;
    params.increment = o.increment;
    params.shape = o.shape == "increasing" ? CostShape::kIncreasingMargins : CostShape::kArbitrary;
    params.allow_infeasible = true;
    Rng rng(*o.seed);
    for (int i = 0; i < o.count; ++i) {
      oracle_one(random_instance(params, rng), "#" + std::to_string(i + 1), tally);
    }
    json["seed"] = *o.seed;
  }
  const bool ok = tally.clearing_mismatches == 0 && tally.audit_discrepancies == 0;
  json["instances"] = tally.instances;
  json["clearing_mismatches"] = tally.clearing_mismatches;
  json["audits"] = tally.audits;
  json["audit_discrepancies"] = tally.audit_discrepancies;
  json["failures"] = tally.failures;
  json["agree"] = ok;
  const std::string text =
      "Instances: " + std::to_string(tally.instances) +
      "\nClearing mismatches: " + std::to_string(tally.clearing_mismatches) +
      "\nAudits: " + std::to_string(tally.audits) +
      "\nAudit discrepancies: " + std::to_string(tally.audit_discrepancies) + "\n" +
      (ok ? "agree\n" : "DISAGREE\n");
  return emit(o, json, text, ok ? kOk : kCheckFailed);
}

int cmd_compare(const Options& o) {
  std::vector<MechanismComparison> products;
  Json list = Json::array();
  for (const auto& path : o.files) {
    const auto file = io::load_instance_file(path);
    products.push_back(compare_mechanisms(file.two_stage(), file.name.empty() ? path : file.name));
    list.push_back(io::to_json(products.back()));
  }
  return emit(o, Json{{"products", list}}, io::render_table(products), kOk);
}

int run(int argc, char** argv) {
  CLI::App app{"Reverse-auction clearing with VCG payments"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Check ladder spacing and increasing margins");
  validate->add_option("file", o.files, "Instance file")->required()->expected(1);

  auto* clear_cmd = app.add_subcommand("clear", "Clear the auction and compute payments");
  clear_cmd->add_option("file", o.files, "Instance file")->required()->expected(1);
  clear_cmd->add_option("--mechanism", o.mechanism, "Payment rule")
      ->check(CLI::IsMember({"vcg", "payasbid"}))
      ->capture_default_str();
  clear_cmd->add_option("--mode", o.mode, "Clearing model")
      ->check(CLI::IsMember({"single", "twostage"}))
      ->capture_default_str();

  auto* certify_cmd = app.add_subcommand("certify", "Core and payoff-monotonicity checks");
  certify_cmd->add_option("file", o.files, "Instance file")->required()->expected(1);
  certify_cmd->add_option("--check", o.check, "Which certificate")
      ->check(CLI::IsMember({"core", "monotonicity", "both", "audit"}))
      ->capture_default_str();
  certify_cmd->add_flag("--full-pairs", o.full_pairs, "Compare all nested pairs, not just adjacent");
  certify_cmd->add_option("--mode", o.mode, "Clearing model")
      ->check(CLI::IsMember({"single", "twostage"}))
      ->capture_default_str();

  auto* attack = app.add_subcommand("attack", "Evaluate the file's shill or collusion stanza");
  attack->add_option("file", o.files, "Instance file with an attack stanza")
      ->required()
      ->expected(1);

  auto* oracle = app.add_subcommand("oracle-check",
                                    "Dynamic program against enumeration, and the core audit");
  oracle->add_option("file", o.files, "Instance file")->expected(0, 1);
  oracle->add_option("--seed", o.seed, "Seed for generated instances");
  oracle->add_option("--count", o.count, "Generated instances")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  oracle->add_option("--size", o.size, "Maximum participants per instance")
      ->check(CLI::Range(1, 12))
      ->capture_default_str();
  oracle->add_option("--levels", o.levels, "Maximum ladder levels")
      ->check(CLI::Range(1, 8))
      ->capture_default_str();
  oracle->add_option("--max-cost", o.max_cost, "Largest generated cost")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  oracle->add_option("--increment", o.increment, "Power increment m in MW")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  oracle->add_option("--shape", o.shape, "Cost shape")
      ->check(CLI::IsMember({"arbitrary", "increasing"}))
      ->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Two-stage against deterministic clearing");
  compare->add_option("files", o.files, "Instance files with scenarios, one per product")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*clear_cmd) return cmd_clear(o);
    if (*certify_cmd) return cmd_certify(o);
    if (*attack) return cmd_attack(o);
    if (*oracle) return cmd_oracle_check(o);
    return cmd_compare(o);
  } catch (const PivotalBidderError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace
}  // namespace procure::cli

int main(int argc, char** argv) { return procure::cli::run(argc, argv); }
