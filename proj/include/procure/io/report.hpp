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

#pragma once

// Deterministic reports: ordered JSON for machines, aligned tables for
// people. Participants always appear in identifier order.

#include <cctype>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "procure/attacks.hpp"
#include "procure/coalition.hpp"
#include "procure/market.hpp"
#include "procure/mechanism.hpp"
#include "procure/twostage.hpp"

namespace procure::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const Money& m) { return m.value(); }
inline Json to_json(const Power& p) { return p.value(); }
inline Json to_json(const ExpectedMoney& m) {
  if (m.value().denominator() == 1) return m.value().numerator();
  return to_string(m);
}
template <class C>
Json to_json(const Extended<C>& e) {
  if (e.is_finite()) return to_json(e.value());
  return to_string(e);
}

inline Json names_json(const AuctionInstance& inst, ParticipantSet s) {
  Json out = Json::array();
  for (const auto& n : inst.names(s)) out.push_back(n);
  return out;
}

inline Json to_json(const ValidationReport& r) {
  Json findings = Json::array();
  for (const auto& f : r.findings) {
    Json levels = Json::array();
    for (auto k : f.levels) levels.push_back(k + 1);
    findings.push_back(Json{{"message", f.message}, {"levels", levels}});
  }
  return Json{{"participant", r.participant},
              {"spacing_ok", r.spacing_ok},
              {"increasing_marginal_cost_checked", r.marginal_cost_checked},
              {"increasing_marginal_cost_ok", r.increasing_marginal_cost_ok},
              {"findings", findings}};
}

template <class C>
Json to_json(const MechanismOutcome<C>& o) {
  Json participants = Json::array();
  for (const auto& p : o.participants) {
    Json j{{"id", p.id},
           {"accepted_mw", to_json(p.accepted)},
           {"bid_cost", to_json(p.bid_cost)},
           {"payment", to_json(p.payment)}};
    if (p.utility) j["utility"] = to_json(*p.utility);
    participants.push_back(std::move(j));
  }
  return Json{{"rule", std::string(to_string(o.rule))},
              {"optimal_cost", to_json(o.clearing.optimal_cost)},
              {"accepted_bid_cost", to_json(o.clearing.bid_cost)},
              {"residual_cost", to_json(o.clearing.residual_cost)},
              {"participants", participants},
              {"total_payments", to_json(o.total_payments())},
              {"tso_utility", to_json(o.tso_utility)}};
}

template <class C>
Json to_json(const CoreReport<C>& r, const AuctionInstance& inst) {
  Json blocking = Json::array();
  for (const auto& b : r.blocking) {
    blocking.push_back(Json{{"coalition", names_json(inst, b.members)},
                            {"utility_sum", to_json(b.utility_sum)},
                            {"withdrawal_gain", to_json(b.withdrawal_gain)}});
  }
  return Json{{"auction", names_json(inst, r.auction)},
              {"in_core", r.in_core},
              {"winners", names_json(inst, r.winners)},
              {"blocking", blocking}};
}

template <class C>
Json to_json(const MonotonicityReport<C>& r, const AuctionInstance& inst) {
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    violations.push_back(Json{{"participant", inst.participant(v.participant).id()},
                              {"smaller", names_json(inst, v.smaller)},
                              {"larger", names_json(inst, v.larger)},
                              {"payoff_smaller", to_json(v.payoff_smaller)},
                              {"payoff_larger", to_json(v.payoff_larger)},
                              {"cost_smaller", to_json(v.cost_smaller)},
                              {"cost_smaller_without", to_json(v.cost_smaller_without)},
                              {"cost_larger", to_json(v.cost_larger)},
                              {"cost_larger_without", to_json(v.cost_larger_without)}});
  }
  return Json{{"universe", names_json(inst, r.universe)},
              {"monotone", r.monotone},
              {"pairs_checked", r.pairs_checked},
              {"violations", violations}};
}

template <class C>
Json to_json(const CoreMonotonicityAudit<C>& a, const AuctionInstance& inst) {
  Json non_core = Json::array();
  for (const auto& r : a.non_core) non_core.push_back(to_json(r, inst));
  return Json{{"universe", names_json(inst, a.universe)},
              {"all_in_core", a.all_in_core},
              {"monotone", a.monotonicity.monotone},
              {"consistent", a.consistent()},
              {"non_core_auctions", non_core}};
}

inline Json to_json(const AttackVerdict& v) {
  Json members = Json::array();
  for (const auto& m : v.members) {
    Json j{{"id", m.id}, {"accepted_mw", to_json(m.accepted)}, {"payment", to_json(m.payment)}};
    if (m.true_cost) j["true_cost"] = to_json(*m.true_cost);
    if (m.utility) j["utility"] = to_json(*m.utility);
    if (m.lower_alone_payment) {
      j["lower_alone_payment"] = to_json(*m.lower_alone_payment);
      j["within_bound"] = m.within_lower_alone_bound();
    }
    members.push_back(std::move(j));
  }
  return Json{{"kind", std::string(to_string(v.kind))},
              {"honest_total", to_json(v.honest_total)},
              {"attack_total", to_json(v.attack_total)},
              {"profitable", v.profitable},
              {"members", members}};
}

inline Json to_json(const MechanismTotals& t) {
  return Json{{"procured_mw", to_json(t.procured)},
              {"pay_as_bid_total", to_json(t.pay_as_bid_total)},
              {"vcg_total", to_json(t.vcg_total)},
              {"expected_daily_cost", to_json(t.residual_cost)}};
}

inline Json to_json(const MechanismComparison& c) {
  return Json{{"name", c.name},
              {"two_stage", to_json(c.two_stage)},
              {"deterministic", to_json(c.deterministic)}};
}

// Stable text for a JSON document: two-space indent, trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Tables

class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render() const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      if (width.size() < row.size()) width.resize(row.size(), 0);
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream os;
    auto rule = [&] {
      os << '+';
      for (auto w : width) os << std::string(w + 2, '-') << '+';
      os << '\n';
    };
    rule();
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      os << '|';
      for (std::size_t c = 0; c < width.size(); ++c) {
        const std::string cell = c < rows_[r].size() ? rows_[r][c] : "";
        os << ' ' << (c > 0 && numeric(cell) ? std::right : std::left)
           << std::setw(static_cast<int>(width[c])) << cell << " |";
      }
      os << '\n';
      if (r == 0) rule();
    }
    rule();
    return os.str();
  }

 private:
  // Numbers (including "n/d" and "800 MW") line up on the right.
  static bool numeric(const std::string& cell) {
    const std::size_t start = !cell.empty() && cell[0] == '-' ? 1 : 0;
    return start < cell.size() && std::isdigit(static_cast<unsigned char>(cell[start]));
  }

  std::vector<std::vector<std::string>> rows_;
};

template <class C>
std::string render_table(const MechanismOutcome<C>& o) {
  Table t({"Participant", "Accepted MW", "Bid cost", "Payment", "Utility"});
  for (const auto& p : o.participants) {
    t.add({p.id, to_string(p.accepted), to_string(p.bid_cost), to_string(p.payment),
           p.utility ? to_string(*p.utility) : "-"});
  }
  std::ostringstream os;
  os << "Rule: " << to_string(o.rule) << "\n";
  os << "Optimal cost J*: " << to_string(o.clearing.optimal_cost) << "\n";
  os << t.render();
  os << "Sum of payments: " << to_string(o.total_payments()) << "\n";
  os << "TSO utility: " << to_string(o.tso_utility) << "\n";
  return os.str();
}

// One column per reserve product, as in a procurement outcome summary.
inline std::string render_table(const std::vector<MechanismComparison>& products) {
  std::vector<std::string> header{""};
  for (const auto& p : products) header.push_back(p.name.empty() ? "product" : p.name);
  Table t(header);
  auto row = [&](const std::string& label, auto field) {
    std::vector<std::string> r{label};
    for (const auto& p : products) r.push_back(field(p));
    t.add(std::move(r));
  };
  row("Procured MWs", [](const auto& p) { return to_string(p.two_stage.procured) + " MW"; });
  row("Two-stage: sum of pay-as-bid payments",
      [](const auto& p) { return to_string(p.two_stage.pay_as_bid_total); });
  row("Two-stage: sum of VCG payments", [](const auto& p) { return to_string(p.two_stage.vcg_total); });
  row("Two-stage: expected daily cost",
      [](const auto& p) { return to_string(p.two_stage.residual_cost); });
  row("Deterministic: sum of pay-as-bid payments",
      [](const auto& p) { return to_string(p.deterministic.pay_as_bid_total); });
  row("Deterministic: sum of VCG payments",
      [](const auto& p) { return to_string(p.deterministic.vcg_total); });
  return t.render();
}

inline std::string render_table(const std::vector<ValidationReport>& reports) {
  Table t({"Participant", "Spacing", "Increasing margins", "Findings"});
  for (const auto& r : reports) {
    std::string findings;
    for (const auto& f : r.findings) findings += (findings.empty() ? "" : "; ") + f.message;
    t.add({r.participant, r.spacing_ok ? "ok" : "FAIL",
           !r.marginal_cost_checked ? "n/a" : (r.increasing_marginal_cost_ok ? "ok" : "FAIL"),
           findings.empty() ? "-" : findings});
  }
  return t.render();
}

inline std::string join_names(const AuctionInstance& inst, ParticipantSet s) {
  std::string out = "{";
  for (const auto& n : inst.names(s)) out += (out.size() > 1 ? ", " : "") + n;
  return out + "}";
}

template <class C>
std::string render_table(const CoreReport<C>& r, const AuctionInstance& inst) {
  std::ostringstream os;
  os << "Core check on " << join_names(inst, r.auction) << ": "
     << (r.in_core ? "in core" : "BLOCKED") << "\n";
  os << "Winners: " << join_names(inst, r.winners) << "\n";
  if (!r.blocking.empty()) {
    Table t({"Blocking coalition", "Sum of utilities", "Withdrawal gain"});
    for (const auto& b : r.blocking) {
      t.add({join_names(inst, b.members), to_string(b.utility_sum), to_string(b.withdrawal_gain)});
    }
    os << t.render();
  }
  return os.str();
}

template <class C>
std::string render_table(const MonotonicityReport<C>& r, const AuctionInstance& inst) {
  std::ostringstream os;
  os << "Payoff monotonicity over " << join_names(inst, r.universe) << ": "
     << (r.monotone ? "monotone" : "VIOLATED") << "\n";
  if (!r.violations.empty()) {
    Table t({"Participant", "Smaller set", "Larger set", "Payoff (smaller)", "Payoff (larger)"});
    for (const auto& v : r.violations) {
      t.add({inst.participant(v.participant).id(), join_names(inst, v.smaller),
             join_names(inst, v.larger), to_string(v.payoff_smaller), to_string(v.payoff_larger)});
    }
    os << t.render();
  }
  return os.str();
}

template <class C>
std::string render_table(const CoreMonotonicityAudit<C>& a, const AuctionInstance& inst) {
  std::ostringstream os;
  os << "Audit over " << join_names(inst, a.universe) << "\n";
  os << "Every sub-auction in core: " << (a.all_in_core ? "yes" : "no") << "\n";
  os << "Payoff monotone: " << (a.monotonicity.monotone ? "yes" : "no") << "\n";
  os << "Consistent: " << (a.consistent() ? "yes" : "NO") << "\n";
  return os.str();
}

inline std::string render_table(const AttackVerdict& v) {
  Table t({"Identity", "Accepted MW", "Payment", "Utility", "Lower-alone payment"});
  for (const auto& m : v.members) {
    t.add({m.id, to_string(m.accepted), to_string(m.payment),
           m.utility ? to_string(*m.utility) : "-",
           m.lower_alone_payment ? to_string(*m.lower_alone_payment) : "-"});
  }
  std::ostringstream os;
  os << "Attack: " << to_string(v.kind) << "\n";
  os << t.render();
  os << "Honest utility: " << to_string(v.honest_total) << "\n";
  os << "Attack utility: " << to_string(v.attack_total) << "\n";
  os << "Profitable: " << (v.profitable ? "yes" : "no") << "\n";
  return os.str();
}

}  // namespace procure::io
