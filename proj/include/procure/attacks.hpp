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

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "procure/clearing.hpp"
#include "procure/errors.hpp"
#include "procure/market.hpp"
#include "procure/mechanism.hpp"

namespace procure {

enum class AttackKind { kShill, kCollusion };

inline std::string_view to_string(AttackKind kind) {
  return kind == AttackKind::kShill ? "shill" : "collusion";
}

// A manipulation expressed as a pure transformation of a base instance.
struct AttackScenario {
  AttackKind kind = AttackKind::kShill;
  AuctionInstance base;
  // The principal (shill) or the colluding losers.
  std::vector<std::string> manipulators;
  AuctionInstance transformed;
  // shill identity -> principal
  std::map<std::string, std::string> identity_map;
};

struct MemberOutcome {
  std::string id;
  Power accepted{0};
  Money payment{0};
  // Per-member true cost and utility; shill identities have none of their own.
  std::optional<Money> true_cost;
  std::optional<Money> utility;
  // Collusion only: payment had this member alone lowered its bid.
  std::optional<Money> lower_alone_payment;

  bool within_lower_alone_bound() const {
    return !lower_alone_payment || payment <= *lower_alone_payment;
  }
};

struct AttackVerdict {
  AttackKind kind = AttackKind::kShill;
  // Manipulators' aggregate utility when bidding truthfully.
  Money honest_total{0};
  Money attack_total{0};
  // Strict: equal utility is not a profit.
  bool profitable = false;
  std::vector<MemberOutcome> members;

  bool bounds_ok() const {
    return std::all_of(members.begin(), members.end(),
                       [](const MemberOutcome& m) { return m.within_lower_alone_bound(); });
  }
};

// Replaces `principal` by the identities in `split`. The shills carry no
// true costs of their own; the principal's true costs price their joint
// delivery.
inline AttackScenario make_shill_scenario(const AuctionInstance& base,
                                          std::string_view principal,
                                          const std::vector<BidLadder>& split) {
  const std::size_t p = base.require_index(principal);
  if (!base.participant(p).has_true_costs()) {
    throw PreconditionError("shill principal '" + std::string(principal) +
                            "' needs true costs");
  }
  if (split.empty()) throw InputError("shill split has no identities");
  AttackScenario sc{AttackKind::kShill, base, {std::string(principal)}, base, {}};
  std::vector<Participant> ps;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (i != p) ps.push_back(base.participant(i));
  }
  std::set<std::string> fresh;
  for (const auto& ladder : split) {
    const auto& id = ladder.participant();
    if (base.index_of(id) || !fresh.insert(id).second) {
      throw InputError("shill identity '" + id + "' is not fresh");
    }
    ps.emplace_back(ladder);
    sc.identity_map.emplace(id, std::string(principal));
  }
  sc.transformed = AuctionInstance(base.demand(), base.increment(), std::move(ps));
  return sc;
}

// Default split: one identity per increment of the principal's largest
// offer, each asking 0.
inline std::vector<BidLadder> zero_price_split(const BidLadder& principal, Power increment) {
  const auto total = principal.max_power().value();
  if (increment.value() <= 0 || total % increment.value() != 0) {
    throw InputError("principal '" + principal.participant() +
                     "' cannot be split into increments of " + to_string(increment) +
                     " MW");
  }
  std::vector<BidLadder> out;
  const auto count = total / increment.value();
  for (std::int64_t k = 1; k <= count; ++k) {
    out.emplace_back(principal.participant() + "#" + std::to_string(k),
                     std::vector<BidLevel>{{increment, Money(0)}});
  }
  return out;
}

namespace detail {

// True cost of the principal delivering `power`: its cheapest level able to
// supply at least that much.
inline Money principal_delivery_cost(const Participant& principal, Power power) {
  if (power.value() == 0) return Money(0);
  const auto& ladder = principal.ladder();
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (ladder.power(k) >= power) return principal.true_cost(k);
  }
  throw PreconditionError("shills delivered " + to_string(power) + " MW, more than principal '" +
                          principal.id() + "' can supply");
}

inline AttackVerdict evaluate_shill(const AttackScenario& sc) {
  const auto& base = sc.base;
  const std::size_t p = base.require_index(sc.manipulators.front());
  const auto& principal = base.participant(p);

  AttackVerdict v;
  v.kind = AttackKind::kShill;
  const auto honest = run_vcg(base.with_bid_costs(p, *principal.true_costs()));
  v.honest_total = *honest.participants[p].utility;

  const auto attack = run_vcg(sc.transformed);
  Money paid(0);
  Power delivered(0);
  for (const auto& po : attack.participants) {
    if (!sc.identity_map.contains(po.id)) continue;
    paid += po.payment;
    delivered += po.accepted;
    v.members.push_back({po.id, po.accepted, po.payment, std::nullopt, std::nullopt,
                         std::nullopt});
  }
  v.attack_total = paid - principal_delivery_cost(principal, delivered);
  v.profitable = v.attack_total > v.honest_total;
  return v;
}

}  // namespace detail

// Losers that jointly lower their bids (powers fixed). The base instance is
// taken with every colluder bidding its true costs, and each colluder must
// win nothing there.
inline AttackScenario make_collusion_scenario(
    const AuctionInstance& base,
    const std::vector<std::pair<std::string, std::vector<Money>>>& lowered) {
  if (lowered.empty()) throw InputError("collusion needs at least one member");
  AuctionInstance truthful = base;
  std::vector<std::string> members;
  for (const auto& [id, costs] : lowered) {
    const std::size_t j = base.require_index(id);
    const auto& p = base.participant(j);
    if (!p.has_true_costs()) {
      throw PreconditionError("colluder '" + id + "' needs true costs");
    }
    if (std::find(members.begin(), members.end(), id) != members.end()) {
      throw InputError("colluder '" + id + "' listed twice");
    }
    members.push_back(id);
    truthful = truthful.with_bid_costs(j, *p.true_costs());
  }
  const auto truthful_clearing = clear(truthful);
  for (const auto& id : members) {
    if (truthful_clearing.allocation.levels[truthful.require_index(id)]) {
      throw PreconditionError("colluder '" + id + "' already wins when bidding truthfully");
    }
  }
  AuctionInstance transformed = truthful;
  for (const auto& [id, costs] : lowered) {
    transformed = transformed.with_bid_costs(transformed.require_index(id), costs);
  }
  return AttackScenario{AttackKind::kCollusion, truthful, members, transformed, {}};
}

namespace detail {

inline AttackVerdict evaluate_collusion(const AttackScenario& sc) {
  AttackVerdict v;
  v.kind = AttackKind::kCollusion;
  const auto honest = run_vcg(sc.base);
  const auto attack = run_vcg(sc.transformed);
  for (const auto& id : sc.manipulators) {
    const std::size_t j = sc.base.require_index(id);
    v.honest_total += *honest.participants[j].utility;
    const auto& po = attack.participants[j];
    MemberOutcome m{id, po.accepted, po.payment,
                    sc.base.participant(j).true_cost(po.level), po.utility, std::nullopt};
    const auto alone = run_vcg(
        sc.base.with_bid_costs(j, sc.transformed.participant(j).ladder().costs()));
    m.lower_alone_payment = alone.participants[j].payment;
    v.attack_total += *po.utility;
    v.members.push_back(std::move(m));
  }
  v.profitable = v.attack_total > v.honest_total;
  return v;
}

}  // namespace detail

inline AttackVerdict evaluate(const AttackScenario& sc) {
  return sc.kind == AttackKind::kShill ? detail::evaluate_shill(sc)
                                       : detail::evaluate_collusion(sc);
}

inline AttackVerdict run_shill_attack(const AuctionInstance& inst, std::string_view principal,
                                      const std::vector<BidLadder>& split) {
  return evaluate(make_shill_scenario(inst, principal, split));
}

inline AttackVerdict run_collusion_attack(
    const AuctionInstance& inst,
    const std::vector<std::pair<std::string, std::vector<Money>>>& lowered) {
  return evaluate(make_collusion_scenario(inst, lowered));
}

}  // namespace procure
