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
#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "procure/clearing.hpp"
#include "procure/errors.hpp"
#include "procure/market.hpp"
#include "procure/money.hpp"

namespace procure {

// Anything that clears an auction over subsets of its participants:
// the single-stage model and the two-stage model.
template <class M>
concept ClearingModel = requires(const M& m, ParticipantSet s, AuctionInstance inst) {
  typename M::cost_type;
  { m.instance() } -> std::convertible_to<const AuctionInstance&>;
  { m.solve(s) } -> std::convertible_to<const ClearingResult<typename M::cost_type>&>;
  { m.with_instance(inst) } -> std::same_as<M>;
};

enum class PaymentRule { kPayAsBid, kVcg };

inline std::string_view to_string(PaymentRule rule) {
  return rule == PaymentRule::kVcg ? "vcg" : "pay-as-bid";
}

template <class C>
struct ParticipantOutcome {
  std::string id;
  std::optional<std::size_t> level;
  Power accepted{0};
  C bid_cost{};
  C payment{};
  // Only present when the participant's true costs are known.
  std::optional<C> utility;
};

template <class C>
struct MechanismOutcome {
  PaymentRule rule = PaymentRule::kVcg;
  ClearingResult<C> clearing;
  std::vector<ParticipantOutcome<C>> participants;  // instance order
  C tso_utility{};

  const ParticipantOutcome<C>& at(std::string_view id) const {
    auto it = std::find_if(participants.begin(), participants.end(),
                           [&](const auto& p) { return p.id == id; });
    if (it == participants.end()) {
      throw InputError("unknown participant '" + std::string(id) + "'");
    }
    return *it;
  }
  const C& payment(std::string_view id) const { return at(id).payment; }
  const std::optional<C>& utility(std::string_view id) const { return at(id).utility; }

  C total_payments() const {
    C total{};
    for (const auto& p : participants) total += p.payment;
    return total;
  }

  bool has_all_utilities() const {
    return std::all_of(participants.begin(), participants.end(),
                       [](const auto& p) { return p.utility.has_value(); });
  }
};

// TSO utility: minus everything it pays out, weekly payments plus the
// residual (daily) cost. Equals -J* - sum(u_j) under truthful bids.
template <class C>
C tso_utility(const MechanismOutcome<C>& outcome) {
  return -(outcome.total_payments() + outcome.clearing.residual_cost);
}

namespace detail {

template <ClearingModel Model, class PaymentFn>
MechanismOutcome<typename Model::cost_type> run_rule(const Model& model,
                                                     PaymentRule rule,
                                                     PaymentFn&& payment_of) {
  using C = typename Model::cost_type;
  const auto& inst = model.instance();
  const auto& clearing = model.solve(inst.all());
  if (!clearing.feasible) {
    throw InfeasibleError("offered power cannot cover demand of " +
                          to_string(inst.demand()) + " MW");
  }
  MechanismOutcome<C> out;
  out.rule = rule;
  out.clearing = clearing;
  for (std::size_t j = 0; j < inst.size(); ++j) {
    const auto& participant = inst.participant(j);
    ParticipantOutcome<C> po;
    po.id = participant.id();
    po.level = clearing.allocation.levels[j];
    po.accepted = clearing.allocation.accepted_power(inst, j);
    po.bid_cost = money_as<C>(participant.bid_cost(po.level));
    po.payment = payment_of(j, po);
    if (participant.has_true_costs()) {
      po.utility = po.payment - money_as<C>(participant.true_cost(po.level));
    }
    out.participants.push_back(std::move(po));
  }
  out.tso_utility = tso_utility(out);
  return out;
}

}  // namespace detail

// Winners are paid their accepted bid prices.
template <ClearingModel Model>
MechanismOutcome<typename Model::cost_type> run_pay_as_bid(const Model& model) {
  return detail::run_rule(model, PaymentRule::kPayAsBid,
                          [](std::size_t, const auto& po) { return po.bid_cost; });
}

// Clarke pivot payments: q_j = J*(without j) - (J* - c_j x_j).
template <ClearingModel Model>
MechanismOutcome<typename Model::cost_type> run_vcg(const Model& model) {
  using C = typename Model::cost_type;
  const auto& inst = model.instance();
  const auto& optimum = model.solve(inst.all()).optimal_cost;
  return detail::run_rule(
      model, PaymentRule::kVcg, [&](std::size_t j, const ParticipantOutcome<C>& po) {
        if (!po.level) return C{};
        const auto without = coalition_cost(model, inst.all().without(j));
        if (!without.is_finite()) throw PivotalBidderError(po.id);
        return without.value() - (optimum.value() - po.bid_cost);
      });
}

inline MechanismOutcome<Money> run_pay_as_bid(const AuctionInstance& inst) {
  return run_pay_as_bid(SingleStageModel(inst));
}
inline MechanismOutcome<Money> run_vcg(const AuctionInstance& inst) {
  return run_vcg(SingleStageModel(inst));
}

template <class C>
struct DeviationProbe {
  std::string participant;
  C truthful_utility{};
  std::vector<C> deviation_utilities;

  std::optional<C> best_deviation() const {
    if (deviation_utilities.empty()) return std::nullopt;
    return *std::max_element(deviation_utilities.begin(), deviation_utilities.end());
  }
  // No sampled deviation beats truthful bidding.
  bool truthful_dominates() const {
    return std::all_of(deviation_utilities.begin(), deviation_utilities.end(),
                       [&](const C& u) { return u <= truthful_utility; });
  }
};

// Re-runs VCG with the participant bidding its true costs and then each
// deviating cost vector (offered powers unchanged); utilities are measured
// against true costs. Everyone else keeps their bids.
template <ClearingModel Model>
DeviationProbe<typename Model::cost_type> dominant_strategy_probe(
    const Model& model, std::string_view participant,
    const std::vector<std::vector<Money>>& deviations) {
  const auto& inst = model.instance();
  const std::size_t j = inst.require_index(participant);
  const auto& p = inst.participant(j);
  if (!p.has_true_costs()) {
    throw PreconditionError("participant '" + p.id() + "' has no true costs to probe");
  }
  DeviationProbe<typename Model::cost_type> probe;
  probe.participant = p.id();
  auto utility_with = [&](const std::vector<Money>& costs) {
    const auto outcome = run_vcg(model.with_instance(inst.with_bid_costs(j, costs)));
    return *outcome.participants[j].utility;
  };
  probe.truthful_utility = utility_with(*p.true_costs());
  for (const auto& d : deviations) probe.deviation_utilities.push_back(utility_with(d));
  return probe;
}

inline DeviationProbe<Money> dominant_strategy_probe(
    const AuctionInstance& inst, std::string_view participant,
    const std::vector<std::vector<Money>>& deviations) {
  return dominant_strategy_probe(SingleStageModel(inst), participant, deviations);
}

}  // namespace procure
