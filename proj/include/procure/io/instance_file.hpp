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

// Instance file format (YAML):
//
//   name: example-1                 # optional
//   demand: 800                     # MW
//   increment: 200                  # MW, must divide demand
//   participants:
//     - id: PP1
//       ladder: [[200, 8000], [400, 19000]]   # [power MW, cost CHF]
//       true_costs: [8000, 19000]             # optional, aligned with ladder
//   scenarios:                      # optional; enables two-stage mode
//     - {probability: 1/3, daily_price: 80, capacity: 500}   # capacity optional
//   # or generated around a nominal price:
//   # scenarios: {price_band: {nominal: 100, percent: 20, weights: [1, 1, 1]}}
//   attack:                         # optional
//     kind: shill                   # or collusion
//     principal: PPX
//     split: [{id: PPX-a, ladder: [[200, 0]]}]   # or: split: zero-price
//     # collusion: lowered: [{id: PP3, costs: [0]}]
//
// Errors are reported as "<source>:<line>:<column>: <message>".

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "procure/attacks.hpp"
#include "procure/errors.hpp"
#include "procure/market.hpp"
#include "procure/money.hpp"
#include "procure/twostage.hpp"

namespace procure::io {

struct AttackStanza {
  AttackKind kind = AttackKind::kShill;
  std::string principal;
  std::vector<BidLadder> split;
  // `split: zero-price` requests the default generator.
  bool zero_price_split = false;
  std::vector<std::pair<std::string, std::vector<Money>>> lowered;
};

struct InstanceFile {
  std::string name;
  AuctionInstance instance;
  std::vector<Scenario> scenarios;
  std::optional<AttackStanza> attack;

  bool has_scenarios() const { return !scenarios.empty(); }

  TwoStageInstance two_stage() const {
    if (scenarios.empty()) throw InputError("instance file has no scenarios");
    return TwoStageInstance(instance, scenarios);
  }

  AttackScenario attack_scenario() const {
    if (!attack) throw InputError("instance file has no attack stanza");
    if (attack->kind == AttackKind::kCollusion) {
      return make_collusion_scenario(instance, attack->lowered);
    }
    auto split = attack->split;
    if (attack->zero_price_split) {
      split = zero_price_split(
          instance.participant(instance.require_index(attack->principal)).ladder(),
          instance.increment());
    }
    return make_shill_scenario(instance, attack->principal, split);
  }
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& message) const {
    fail(at.Mark(), message);
  }
  [[noreturn]] void fail(const YAML::Mark& mark, const std::string& message) const {
    std::ostringstream os;
    os << source_;
    if (mark.line >= 0) os << ':' << mark.line + 1 << ':' << mark.column + 1;
    os << ": " << message;
    throw InputError(os.str());
  }

  void expect_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed) const {
    if (!map.IsMap()) fail(map, "expected a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      bool ok = false;
      for (auto a : allowed) ok = ok || key == a;
      if (!ok) fail(kv.first, "unknown key '" + key + "'");
    }
  }

  YAML::Node required(const YAML::Node& map, const char* key) const {
    const YAML::Node n = map[key];
    if (!n) fail(map, std::string("missing required key '") + key + "'");
    return n;
  }

  std::int64_t integer(const YAML::Node& n, const char* what) const {
    if (!n.IsScalar()) fail(n, std::string(what) + ": expected an integer");
    try {
      return n.as<std::int64_t>();
    } catch (const YAML::Exception&) {
      fail(n, std::string(what) + ": expected an integer, got '" + n.Scalar() + "'");
    }
  }

  std::string text(const YAML::Node& n, const char* what) const {
    if (!n.IsScalar() || n.Scalar().empty()) {
      fail(n, std::string(what) + ": expected a non-empty string");
    }
    return n.Scalar();
  }

  // "1/3", "0.25" or "1".
  Rational rational(const YAML::Node& n, const char* what) const {
    if (!n.IsScalar()) fail(n, std::string(what) + ": expected a number");
    const std::string s = n.Scalar();
    try {
      if (auto slash = s.find('/'); slash != std::string::npos) {
        std::size_t used = 0;
        const auto num = std::stoll(s.substr(0, slash), &used);
        if (used != slash) throw std::invalid_argument(s);
        const auto den_text = s.substr(slash + 1);
        const auto den = std::stoll(den_text, &used);
        if (used != den_text.size() || den == 0) throw std::invalid_argument(s);
        return Rational(num, den);
      }
      if (auto dot = s.find('.'); dot != std::string::npos) {
        const auto whole_text = s.substr(0, dot);
        const auto frac_text = s.substr(dot + 1);
        if (frac_text.empty() || frac_text.size() > 12 ||
            frac_text.find_first_not_of("0123456789") != std::string::npos ||
            whole_text.find_first_not_of("0123456789") != std::string::npos) {
          throw std::invalid_argument(s);
        }
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac_text.size(); ++i) den *= 10;
        const std::int64_t whole = whole_text.empty() ? 0 : std::stoll(whole_text);
        return Rational(whole * den + std::stoll(frac_text), den);
      }
      std::size_t used = 0;
      const auto v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return Rational(v);
    } catch (const std::logic_error&) {
      fail(n, std::string(what) + ": expected a fraction or decimal, got '" + s + "'");
    }
  }

  std::vector<BidLevel> ladder(const YAML::Node& n) const {
    if (!n.IsSequence() || n.size() == 0) fail(n, "ladder: expected a non-empty list of [power, cost]");
    std::vector<BidLevel> out;
    for (const auto& level : n) {
      if (!level.IsSequence() || level.size() != 2) fail(level, "ladder level: expected [power, cost]");
      out.push_back({Power(integer(level[0], "power")), Money(integer(level[1], "cost"))});
    }
    return out;
  }

  std::vector<Money> costs(const YAML::Node& n, const char* what) const {
    if (!n.IsSequence()) fail(n, std::string(what) + ": expected a list of costs");
    std::vector<Money> out;
    for (const auto& c : n) out.emplace_back(integer(c, what));
    return out;
  }

  template <class F>
  auto anchored(const YAML::Node& at, F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const InputError& e) {
      if (std::string_view(e.what()).starts_with(source_ + ":")) throw;
      fail(at, e.what());
    }
  }

  Participant participant(const YAML::Node& n) const {
    expect_keys(n, {"id", "ladder", "true_costs"});
    auto id = text(required(n, "id"), "id");
    auto levels = ladder(required(n, "ladder"));
    std::optional<std::vector<Money>> truth;
    if (n["true_costs"]) truth = costs(n["true_costs"], "true_costs");
    return anchored(n, [&] {
      return Participant::from_unsorted(std::move(id), std::move(levels), std::move(truth));
    });
  }

  std::vector<Scenario> scenarios(const YAML::Node& n) const {
    if (n.IsMap()) {
      expect_keys(n, {"price_band"});
      const YAML::Node band = required(n, "price_band");
      expect_keys(band, {"nominal", "percent", "weights", "capacity"});
      const Money nominal(integer(required(band, "nominal"), "nominal"));
      const std::int64_t percent = band["percent"] ? integer(band["percent"], "percent") : 20;
      std::array<std::int64_t, 3> weights{1, 1, 1};
      if (const auto w = band["weights"]) {
        if (!w.IsSequence() || w.size() != 3) fail(w, "weights: expected three integers");
        for (std::size_t i = 0; i < 3; ++i) weights[i] = integer(w[i], "weight");
      }
      std::optional<Power> capacity;
      if (band["capacity"]) capacity = Power(integer(band["capacity"], "capacity"));
      return anchored(n, [&] { return price_band_scenarios(nominal, percent, weights, capacity); });
    }
    if (!n.IsSequence() || n.size() == 0) fail(n, "scenarios: expected a non-empty list");
    std::vector<Scenario> out;
    for (const auto& s : n) {
      expect_keys(s, {"probability", "daily_price", "capacity"});
      Scenario sc;
      sc.probability = rational(required(s, "probability"), "probability");
      sc.daily_unit_price = Money(integer(required(s, "daily_price"), "daily_price"));
      if (s["capacity"]) sc.daily_capacity = Power(integer(s["capacity"], "capacity"));
      out.push_back(sc);
    }
    return out;
  }

  AttackStanza attack(const YAML::Node& n) const {
    expect_keys(n, {"kind", "principal", "split", "lowered"});
    AttackStanza a;
    const auto kind = text(required(n, "kind"), "kind");
    if (kind == "shill") {
      a.kind = AttackKind::kShill;
      a.principal = text(required(n, "principal"), "principal");
      const YAML::Node split = required(n, "split");
      if (split.IsScalar()) {
        if (split.Scalar() != "zero-price") fail(split, "split: expected a list or 'zero-price'");
        a.zero_price_split = true;
      } else {
        if (!split.IsSequence() || split.size() == 0) fail(split, "split: expected a non-empty list");
        for (const auto& s : split) {
          expect_keys(s, {"id", "ladder"});
          auto id = text(required(s, "id"), "id");
          auto levels = ladder(required(s, "ladder"));
          a.split.push_back(anchored(s, [&] { return BidLadder(std::move(id), std::move(levels)); }));
        }
      }
      if (n["lowered"]) fail(n["lowered"], "'lowered' belongs to collusion attacks");
    } else if (kind == "collusion") {
      a.kind = AttackKind::kCollusion;
      const YAML::Node lowered = required(n, "lowered");
      if (!lowered.IsSequence() || lowered.size() == 0) fail(lowered, "lowered: expected a non-empty list");
      for (const auto& l : lowered) {
        expect_keys(l, {"id", "costs"});
        a.lowered.emplace_back(text(required(l, "id"), "id"), costs(required(l, "costs"), "costs"));
      }
      if (n["split"]) fail(n["split"], "'split' belongs to shill attacks");
    } else {
      fail(n["kind"], "kind: expected 'shill' or 'collusion'");
    }
    return a;
  }

  InstanceFile file(const YAML::Node& root) const {
    if (!root || root.IsNull()) fail(YAML::Mark(), "empty instance file");
    expect_keys(root, {"name", "demand", "increment", "participants", "scenarios", "attack"});
    const Power demand(integer(required(root, "demand"), "demand"));
    const Power increment(integer(required(root, "increment"), "increment"));
    const YAML::Node list = required(root, "participants");
    if (!list.IsSequence()) fail(list, "participants: expected a list");
    std::vector<Participant> ps;
    std::set<std::string> seen;
    for (const auto& p : list) {
      ps.push_back(participant(p));
      if (!seen.insert(ps.back().id()).second) {
        fail(p, "duplicate participant identifier '" + ps.back().id() + "'");
      }
    }
    InstanceFile out{root["name"] ? text(root["name"], "name") : std::string(),
                     anchored(root, [&] {
                       return AuctionInstance(demand, increment, std::move(ps));
                     }),
                     {},
                     std::nullopt};
    if (root["scenarios"]) {
      out.scenarios = scenarios(root["scenarios"]);
      anchored(root["scenarios"], [&] { return TwoStageInstance(out.instance, out.scenarios); });
    }
    if (root["attack"]) out.attack = attack(root["attack"]);
    return out;
  }

 private:
  std::string source_;
};

}  // namespace detail

inline InstanceFile parse_instance_file(std::string_view text,
                                        const std::string& source = "<input>") {
  detail::Parser parser(source);
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    parser.fail(e.mark, e.msg);
  }
  return parser.file(root);
}

inline InstanceFile load_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance_file(buffer.str(), path.string());
}

}  // namespace procure::io
