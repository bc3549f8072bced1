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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "procure/clearing.hpp"
#include "procure/errors.hpp"
#include "procure/mechanism.hpp"
#include "procure/money.hpp"
#include "procure/participant_set.hpp"

namespace procure {

inline constexpr std::size_t kDefaultCoreWinnerLimit = 20;
inline constexpr std::size_t kDefaultMonotonicityLimit = 12;
inline constexpr std::size_t kDefaultAuditLimit = 10;

// w(S): -J*(S) when the TSO belongs to the coalition, 0 otherwise. An
// uncoverable coalition with the TSO has value minus infinity.
template <ClearingModel Model>
Extended<typename Model::cost_type> coalition_value(const Model& model,
                                                    ParticipantSet s,
                                                    bool includes_tso) {
  using C = typename Model::cost_type;
  if (!includes_tso) return Extended<C>(C{});
  return -coalition_cost(model, s);
}

template <class C>
struct BlockingCoalition {
  // K, a subset of the winners.
  ParticipantSet members;
  // sum over K of (J*(L-j) - J*(L)), and J*(L\K) - J*(L).
  Extended<C> utility_sum;
  Extended<C> withdrawal_gain;
};

template <class C>
struct CoreReport {
  bool in_core = true;
  ParticipantSet auction;
  ParticipantSet winners;
  std::vector<BlockingCoalition<C>> blocking;
};

namespace detail {

// J*(A) - J*(B) with J*(B) finite. Infinite when A is uncoverable.
template <class C>
Extended<C> cost_gap(const Extended<C>& a, const Extended<C>& b) {
  if (!a.is_finite()) return a;
  return Extended<C>(a.value() - b.value());
}

}  // namespace detail

// Core membership of the VCG outcome for the auction restricted to L,
// assuming truthful bids. Checks, for every subset K of the winners,
//   sum_{j in K} (J*(L-j) - J*(L)) <= J*(L\K) - J*(L).
// An infinite right-hand side cannot be violated; an infinite left-hand side
// with a finite right-hand side would mean a pivotal winner and throws.
// Uncoverable auctions have no outcome and are reported in core.
template <ClearingModel Model>
CoreReport<typename Model::cost_type> core_check(
    const Model& model, ParticipantSet auction,
    std::size_t winner_limit = kDefaultCoreWinnerLimit) {
  using C = typename Model::cost_type;
  CoreReport<C> report;
  report.auction = auction;
  const auto& full = model.solve(auction);
  if (!full.feasible) return report;
  report.winners = full.allocation.winners();
  if (report.winners.size() > winner_limit) {
    throw BudgetExceededError("core check over " + std::to_string(report.winners.size()) +
                              " winners exceeds the limit of " +
                              std::to_string(winner_limit));
  }
  const auto winners = report.winners.indices();
  std::vector<Extended<C>> payoff;
  for (std::size_t j : winners) {
    payoff.push_back(detail::cost_gap(coalition_cost(model, auction.without(j)),
                                      full.optimal_cost));
  }
  for_each_subset(report.winners, [&](ParticipantSet k) {
    if (k.empty()) return;
    const Extended<C> rhs =
        detail::cost_gap(coalition_cost(model, auction - k), full.optimal_cost);
    if (!rhs.is_finite()) return;
    C lhs{};
    for (std::size_t pos = 0; pos < winners.size(); ++pos) {
      if (!k.contains(winners[pos])) continue;
      if (!payoff[pos].is_finite()) {
        throw PivotalBidderError(model.instance().participant(winners[pos]).id());
      }
      lhs += payoff[pos].value();
    }
    if (lhs > rhs.value()) {
      report.in_core = false;
      report.blocking.push_back({k, Extended<C>(lhs), rhs});
    }
  });
  return report;
}

template <ClearingModel Model>
CoreReport<typename Model::cost_type> core_check(const Model& model) {
  return core_check(model, model.instance().all());
}

// Core membership straight from the definition: the VCG utilities (with the
// TSO taking the remainder of -J*) must give every coalition S containing the
// TSO at least w(S). Reported blocking entries hold S (not K) with
// utility_sum = sum of utilities in S and withdrawal_gain = w(S). Exponential
// in |L|; used to audit core_check. Throws on pivotal winners.
template <ClearingModel Model>
CoreReport<typename Model::cost_type> core_check_direct(
    const Model& model, ParticipantSet auction,
    std::size_t member_limit = kDefaultCoreWinnerLimit) {
  using C = typename Model::cost_type;
  if (auction.size() > member_limit) {
    throw BudgetExceededError("direct core check over " + std::to_string(auction.size()) +
                              " participants exceeds the limit of " +
                              std::to_string(member_limit));
  }
  CoreReport<C> report;
  report.auction = auction;
  const auto& full = model.solve(auction);
  if (!full.feasible) return report;
  report.winners = full.allocation.winners();
  const C optimum = full.optimal_cost.value();

  std::vector<C> payoff(model.instance().size(), C{});
  C payoff_total{};
  for (std::size_t j : report.winners.indices()) {
    const auto without = coalition_cost(model, auction.without(j));
    if (!without.is_finite()) {
      throw PivotalBidderError(model.instance().participant(j).id());
    }
    payoff[j] = without.value() - optimum;
    payoff_total += payoff[j];
  }
  const C tso = -optimum - payoff_total;

  for_each_subset(auction, [&](ParticipantSet s) {
    const Extended<C> value = coalition_value(model, s, true);
    if (!value.is_finite()) return;
    C share = tso;
    for (std::size_t j : s.indices()) share += payoff[j];
    if (value.value() > share) {
      report.in_core = false;
      report.blocking.push_back({s, Extended<C>(share), value});
    }
  });
  return report;
}

enum class PairMode { kAdjacent, kAllNested };

template <class C>
struct MonotonicityViolation {
  std::size_t participant;
  ParticipantSet smaller;  // S (TSO implicit)
  ParticipantSet larger;   // S'
  Extended<C> cost_larger_without;  // J*(S' - j)
  Extended<C> cost_larger;          // J*(S')
  Extended<C> cost_smaller_without; // J*(S - j)
  Extended<C> cost_smaller;         // J*(S)
  C payoff_smaller{};               // u_j(S)
  C payoff_larger{};                // u_j(S')
};

template <class C>
struct MonotonicityReport {
  bool monotone = true;
  ParticipantSet universe;
  // Comparisons u_j(S) against u_j(S') actually made.
  std::size_t pairs_checked = 0;
  std::vector<MonotonicityViolation<C>> violations;
};

// Payoff monotonicity over participants Z: for every j in S and S subset of
// S' subset of Z, u_j(S') <= u_j(S) with u_j(X) = J*(X - j) - J*(X).
// Adjacent mode checks only S' = S + {i}, which suffices since any nested
// violation telescopes into an adjacent one. Pairs where S is uncoverable
// have no outcome to compare; an infinite u_j(S) cannot be exceeded.
template <ClearingModel Model>
MonotonicityReport<typename Model::cost_type> payoff_monotonicity_check(
    const Model& model, ParticipantSet universe, PairMode mode = PairMode::kAdjacent,
    std::size_t limit = kDefaultMonotonicityLimit) {
  using C = typename Model::cost_type;
  if (universe.size() > limit) {
    throw BudgetExceededError("monotonicity check over " + std::to_string(universe.size()) +
                              " participants exceeds the limit of " +
                              std::to_string(limit));
  }
  MonotonicityReport<C> report;
  report.universe = universe;

  auto check_pair = [&](ParticipantSet s, ParticipantSet s_prime) {
    const auto cost_s = coalition_cost(model, s);
    if (!cost_s.is_finite()) return;
    const auto cost_sp = coalition_cost(model, s_prime);
    for (std::size_t j : s.indices()) {
      const auto before_without = coalition_cost(model, s.without(j));
      if (!before_without.is_finite()) continue;
      const C before = before_without.value() - cost_s.value();
      const auto after_without = coalition_cost(model, s_prime.without(j));
      if (!after_without.is_finite()) {
        throw PivotalBidderError(model.instance().participant(j).id());
      }
      const C after = after_without.value() - cost_sp.value();
      ++report.pairs_checked;
      if (after > before) {
        report.monotone = false;
        report.violations.push_back({j, s, s_prime, after_without, cost_sp,
                                     before_without, cost_s, before, after});
      }
    }
  };

  for_each_subset(universe, [&](ParticipantSet s) {
    if (s.empty()) return;
    const ParticipantSet rest = universe - s;
    if (mode == PairMode::kAdjacent) {
      for (std::size_t i : rest.indices()) check_pair(s, s.with(i));
    } else {
      for_each_subset(rest, [&](ParticipantSet extra) {
        if (!extra.empty()) check_pair(s, s | extra);
      });
    }
  });
  return report;
}

template <class C>
struct CoreMonotonicityAudit {
  ParticipantSet universe;
  // Every coverable L subset of Z has its VCG outcome in the core.
  bool all_in_core = true;
  std::vector<CoreReport<C>> non_core;
  MonotonicityReport<C> monotonicity;
  // The two verdicts must coincide; a mismatch is an engine defect.
  bool consistent() const { return all_in_core == monotonicity.monotone; }
};

// Core membership for every sub-auction L of Z against payoff monotonicity
// over Z.
template <ClearingModel Model>
CoreMonotonicityAudit<typename Model::cost_type> core_monotonicity_audit(
    const Model& model, ParticipantSet universe, std::size_t limit = kDefaultAuditLimit) {
  using C = typename Model::cost_type;
  if (universe.size() > limit) {
    throw BudgetExceededError("audit over " + std::to_string(universe.size()) +
                              " participants exceeds the limit of " +
                              std::to_string(limit));
  }
  CoreMonotonicityAudit<C> audit;
  audit.universe = universe;
  for_each_subset(universe, [&](ParticipantSet l) {
    if (l.empty()) return;
    auto report = core_check(model, l);
    if (!report.in_core) {
      audit.all_in_core = false;
      audit.non_core.push_back(std::move(report));
    }
  });
  audit.monotonicity = payoff_monotonicity_check(model, universe, PairMode::kAdjacent, limit);
  return audit;
}

}  // namespace procure
