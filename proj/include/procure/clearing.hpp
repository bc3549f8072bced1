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
#include <cstdint>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <vector>

#include "procure/errors.hpp"
#include "procure/market.hpp"
#include "procure/money.hpp"
#include "procure/participant_set.hpp"

namespace procure {

// Accepted level per participant, indexed like the instance. nullopt means
// nothing accepted from that participant.
struct Allocation {
  std::vector<std::optional<std::size_t>> levels;

  Power accepted_power(const AuctionInstance& inst, std::size_t i) const {
    const auto& level = levels.at(i);
    return level ? inst.participant(i).ladder().power(*level) : Power(0);
  }

  Power total_power(const AuctionInstance& inst) const {
    Power total(0);
    for (std::size_t i = 0; i < levels.size(); ++i) total += accepted_power(inst, i);
    return total;
  }

  ParticipantSet winners() const {
    ParticipantSet w;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (levels[i]) w = w.with(i);
    }
    return w;
  }

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

template <class C>
struct ClearingResult {
  bool feasible = false;
  Allocation allocation;
  // Sum of accepted bid costs.
  C bid_cost{};
  // Part of the objective not paid to weekly bidders (expected daily
  // top-up in the two-stage model, zero otherwise).
  C residual_cost{};
  // J*; infinite when the active set cannot cover demand.
  Extended<C> optimal_cost = Extended<C>::infinity();
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

namespace detail {

// Grid unit: gcd of demand and every offered power in the instance.
inline std::int64_t grid_unit(const AuctionInstance& inst) {
  std::int64_t g = inst.demand().value();
  for (const auto& p : inst.participants()) {
    for (const auto& l : p.ladder().levels()) g = std::gcd(g, l.power.value());
  }
  return g == 0 ? 1 : g;
}

// Minimizes sum of bid costs + terminal(procured) over selections of at most
// one level per active participant. Procured power is tracked in grid units
// and capped at `cap_units`; terminal(s) prices the capped state s.
//
// Ties are broken towards the lexicographically smallest acceptance vector
// in participant order, smaller power first, by a backward table followed by
// a greedy forward reconstruction.
template <class C, class Terminal>
ClearingResult<C> solve_on_grid(const AuctionInstance& inst, ParticipantSet active,
                                std::int64_t unit, std::int64_t cap_units,
                                Terminal&& terminal) {
  using Cost = Extended<C>;
  const std::vector<std::size_t> order = active.indices();
  const std::size_t n = order.size();
  const auto width = static_cast<std::size_t>(cap_units + 1);

  auto step = [&](std::size_t s, std::size_t units) {
    return std::min(s + units, width - 1);
  };

  std::vector<Cost> table((n + 1) * width, Cost::infinity());
  auto at = [&](std::size_t i, std::size_t s) -> Cost& { return table[i * width + s]; };

  for (std::size_t s = 0; s < width; ++s) {
    at(n, s) = terminal(static_cast<std::int64_t>(s));
  }
  for (std::size_t i = n; i-- > 0;) {
    const auto& ladder = inst.participant(order[i]).ladder();
    for (std::size_t s = 0; s < width; ++s) {
      Cost best = at(i + 1, s);
      for (const auto& level : ladder.levels()) {
        auto units = static_cast<std::size_t>(level.power.value() / unit);
        Cost cand = money_as<C>(level.cost) + at(i + 1, step(s, units));
        if (cand < best) best = cand;
      }
      at(i, s) = best;
    }
  }

  ClearingResult<C> result;
  result.allocation.levels.assign(inst.size(), std::nullopt);
  if (!at(0, 0).is_finite()) return result;

  std::size_t s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& participant = inst.participant(order[i]);
    const auto& ladder = participant.ladder();
    const Cost& target = at(i, s);
    if (at(i + 1, s) == target) continue;
    for (std::size_t k = 0; k < ladder.size(); ++k) {
      auto units = static_cast<std::size_t>(ladder.power(k).value() / unit);
      std::size_t next = step(s, units);
      if (money_as<C>(ladder.cost(k)) + at(i + 1, next) == target) {
        result.allocation.levels[order[i]] = k;
        result.bid_cost += money_as<C>(ladder.cost(k));
        s = next;
        break;
      }
    }
  }
  result.feasible = true;
  result.residual_cost = at(n, s).value();
  result.optimal_cost = at(0, 0);
  return result;
}

}  // namespace detail

// Cost-minimal selection of at most one level per active participant that
// covers the demand. Surplus is allowed (needed for ladders off the
// increment grid) but never priced.
inline ClearingResult<Money> clear(const AuctionInstance& inst, ParticipantSet active) {
  if (!active.subset_of(inst.all())) {
    throw PreconditionError("active set is not a subset of the participants");
  }
  const std::int64_t unit = detail::grid_unit(inst);
  const std::int64_t target = inst.demand().value() / unit;
  return detail::solve_on_grid<Money>(
      inst, active, unit, target, [target](std::int64_t s) {
        return s >= target ? Extended<Money>(Money(0)) : Extended<Money>::infinity();
      });
}

inline ClearingResult<Money> clear(const AuctionInstance& inst) {
  return clear(inst, inst.all());
}

// Exhaustive enumeration over every conditional-offer selection. Independent
// oracle for clear(); same optimum and same canonical allocation.
inline ClearingResult<Money> brute_force_clear(
    const AuctionInstance& inst, ParticipantSet active,
    std::uint64_t budget = kDefaultEnumerationBudget) {
  if (!active.subset_of(inst.all())) {
    throw PreconditionError("active set is not a subset of the participants");
  }
  const std::vector<std::size_t> order = active.indices();
  const std::size_t n = order.size();

  std::uint64_t combinations = 1;
  for (std::size_t i : order) {
    combinations *= inst.participant(i).ladder().size() + 1;
    if (combinations > budget) {
      throw BudgetExceededError("brute-force clearing exceeds the enumeration budget of " +
                                std::to_string(budget) + " combinations");
    }
  }

  // choice[i] == 0 means nothing accepted; otherwise level choice[i]-1.
  // Odometer with participant 0 most significant visits selections in
  // lexicographic order, so the first optimum found is the canonical one.
  std::vector<std::size_t> choice(n, 0);
  std::vector<std::size_t> best_choice;
  std::int64_t cost = 0;
  std::int64_t power = 0;
  std::optional<std::int64_t> best;
  const std::int64_t demand = inst.demand().value();

  auto level_of = [&](std::size_t pos, std::size_t c) {
    const auto& ladder = inst.participant(order[pos]).ladder();
    return c == 0 ? BidLevel{Power(0), Money(0)} : ladder.levels()[c - 1];
  };

  while (true) {
    if (power >= demand && (!best || cost < *best)) {
      best = cost;
      best_choice = choice;
    }
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      const auto radix = inst.participant(order[pos]).ladder().size() + 1;
      const BidLevel before = level_of(pos, choice[pos]);
      choice[pos] = (choice[pos] + 1) % radix;
      const BidLevel after = level_of(pos, choice[pos]);
      cost += after.cost.value() - before.cost.value();
      power += after.power.value() - before.power.value();
      if (choice[pos] != 0) break;
      if (pos == 0) {
        pos = n;  // wrapped around completely
        break;
      }
    }
    if (pos == n || n == 0) break;
  }

  ClearingResult<Money> result;
  result.allocation.levels.assign(inst.size(), std::nullopt);
  if (!best) return result;
  result.feasible = true;
  for (std::size_t pos = 0; pos < n; ++pos) {
    if (best_choice[pos] != 0) result.allocation.levels[order[pos]] = best_choice[pos] - 1;
  }
  result.bid_cost = Money(*best);
  result.optimal_cost = result.bid_cost;
  return result;
}

namespace detail {

// Clearing results memoized by participant bitmask. Lookups are guarded by a
// mutex; returned references stay valid for the cache's lifetime (node-based
// map). Copies start empty.
template <class C>
class SolveCache {
 public:
  SolveCache() = default;
  SolveCache(const SolveCache&) : SolveCache() {}
  SolveCache& operator=(const SolveCache&) {
    std::lock_guard lock(mutex_);
    results_.clear();
    return *this;
  }

  template <class Compute>
  const ClearingResult<C>& get(ParticipantSet s, Compute&& compute) const {
    {
      std::lock_guard lock(mutex_);
      if (auto it = results_.find(s.bits()); it != results_.end()) return it->second;
    }
    ClearingResult<C> r = compute(s);
    std::lock_guard lock(mutex_);
    return results_.try_emplace(s.bits(), std::move(r)).first->second;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return results_.size();
  }

 private:
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::uint64_t, ClearingResult<C>> results_;
};

}  // namespace detail

// Single-stage clearing with coalition costs memoized, since certification
// evaluates up to 2^N coalitions.
class SingleStageModel {
 public:
  using cost_type = Money;

  explicit SingleStageModel(AuctionInstance inst)
      : instance_(std::move(inst)), cache_(std::make_unique<detail::SolveCache<Money>>()) {}

  SingleStageModel(const SingleStageModel& o) : SingleStageModel(o.instance_) {}
  SingleStageModel& operator=(const SingleStageModel& o) {
    if (this != &o) *this = SingleStageModel(o.instance_);
    return *this;
  }
  SingleStageModel(SingleStageModel&&) noexcept = default;
  SingleStageModel& operator=(SingleStageModel&&) noexcept = default;

  const AuctionInstance& instance() const { return instance_; }

  SingleStageModel with_instance(AuctionInstance inst) const {
    return SingleStageModel(std::move(inst));
  }

  const ClearingResult<Money>& solve(ParticipantSet s) const {
    return cache_->get(s, [this](ParticipantSet a) { return clear(instance_, a); });
  }

  std::size_t cached_coalitions() const { return cache_->size(); }

 private:
  AuctionInstance instance_;
  std::unique_ptr<detail::SolveCache<Money>> cache_;
};

// J*(S) over any clearing model.
template <class Model>
Extended<typename Model::cost_type> coalition_cost(const Model& model,
                                                   ParticipantSet s) {
  return model.solve(s).optimal_cost;
}

// Incumbents of S whose accepted power grows when `entrant` joins. Empty on
// instances with increasing marginal costs.
template <class Model>
std::vector<std::size_t> incumbent_power_increases(const Model& model,
                                                   ParticipantSet s,
                                                   std::size_t entrant) {
  const auto& inst = model.instance();
  const auto& before = model.solve(s);
  const auto& after = model.solve(s.with(entrant));
  std::vector<std::size_t> out;
  if (!before.feasible || !after.feasible) return out;
  for (std::size_t j : s.indices()) {
    if (after.allocation.accepted_power(inst, j) > before.allocation.accepted_power(inst, j)) {
      out.push_back(j);
    }
  }
  return out;
}

}  // namespace procure
