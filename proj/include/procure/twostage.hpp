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
#include <array>
#include <cstddef>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "procure/clearing.hpp"
#include "procure/errors.hpp"
#include "procure/market.hpp"
#include "procure/mechanism.hpp"
#include "procure/money.hpp"

namespace procure {

// One possible daily market: with the given probability, any shortfall of
// the weekly procurement is bought at a flat per-MW price, up to the
// capacity (unbounded when absent).
struct Scenario {
  Rational probability{1};
  Money daily_unit_price{0};
  std::optional<Power> daily_capacity;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Weekly bids (the instance's demand is the requirement M) plus daily
// scenarios that absorb whatever the weekly selection leaves uncovered.
class TwoStageInstance {
 public:
  TwoStageInstance(AuctionInstance weekly, std::vector<Scenario> scenarios)
      : weekly_(std::move(weekly)), scenarios_(std::move(scenarios)) {
    if (scenarios_.empty()) throw InputError("two-stage instance needs at least one scenario");
    Rational total(0);
    for (const auto& s : scenarios_) {
      if (s.probability < Rational(0) || s.probability > Rational(1)) {
        throw InputError("scenario probability " + to_string(s.probability) +
                         " is outside [0, 1]");
      }
      if (s.daily_unit_price.value() < 0) throw InputError("daily price must be nonnegative");
      if (s.daily_capacity && s.daily_capacity->value() < 0) {
        throw InputError("daily capacity must be nonnegative");
      }
      total += s.probability;
    }
    if (total != Rational(1)) {
      throw InputError("scenario probabilities sum to " + to_string(total) + ", not 1");
    }
  }

  const AuctionInstance& weekly() const { return weekly_; }
  const Power& requirement() const { return weekly_.demand(); }
  const std::vector<Scenario>& scenarios() const { return scenarios_; }

  ExpectedMoney expected_daily_price() const {
    ExpectedMoney total{};
    for (const auto& s : scenarios_) {
      total += ExpectedMoney(s.probability * s.daily_unit_price.value());
    }
    return total;
  }

  TwoStageInstance with_weekly(AuctionInstance weekly) const {
    return TwoStageInstance(std::move(weekly), scenarios_);
  }

 private:
  AuctionInstance weekly_;
  std::vector<Scenario> scenarios_;
};

// Nominal price and +/- percent, weighted (default equal weights), the
// way daily prices are extrapolated from the previous week.
inline std::vector<Scenario> price_band_scenarios(Money nominal, std::int64_t percent = 20,
                                                  std::array<std::int64_t, 3> weights = {1, 1, 1},
                                                  std::optional<Power> capacity = {}) {
  const std::int64_t weight_total = weights[0] + weights[1] + weights[2];
  if (weight_total <= 0 || std::any_of(weights.begin(), weights.end(),
                                       [](std::int64_t w) { return w < 0; })) {
    throw InputError("scenario weights must be nonnegative with a positive sum");
  }
  auto shifted = [&](std::int64_t pct) {
    const std::int64_t scaled = nominal.value() * (100 + pct);
    if (scaled % 100 != 0) {
      throw InputError("price " + to_string(nominal) + " shifted by " + std::to_string(pct) +
                       "% is not a whole amount");
    }
    return Money(scaled / 100);
  };
  return {
      {Rational(weights[0], weight_total), shifted(-percent), capacity},
      {Rational(weights[1], weight_total), nominal, capacity},
      {Rational(weights[2], weight_total), shifted(percent), capacity},
  };
}

// Expected cost of covering the weekly shortfall in the daily markets.
// Infinite when some scenario lacks the capacity.
inline Extended<ExpectedMoney> expected_daily_cost(const TwoStageInstance& inst,
                                                   Power weekly_power) {
  const std::int64_t shortfall =
      std::max<std::int64_t>(0, inst.requirement().value() - weekly_power.value());
  ExpectedMoney total{};
  for (const auto& s : inst.scenarios()) {
    if (s.daily_capacity && s.daily_capacity->value() < shortfall) {
      return Extended<ExpectedMoney>::infinity();
    }
    total += ExpectedMoney(s.probability * (s.daily_unit_price.value() * shortfall));
  }
  return total;
}

// Weekly bid cost of x plus expected daily top-up.
inline ExpectedMoney two_stage_cost(const TwoStageInstance& inst, const Allocation& x) {
  const auto& weekly = inst.weekly();
  if (x.levels.size() != weekly.size()) {
    throw InputError("allocation does not match the weekly participants");
  }
  ExpectedMoney bids{};
  for (std::size_t i = 0; i < weekly.size(); ++i) {
    const auto& level = x.levels[i];
    if (level && *level >= weekly.participant(i).ladder().size()) {
      throw InputError("allocation selects a missing level for '" +
                       weekly.participant(i).id() + "'");
    }
    bids += money_as<ExpectedMoney>(weekly.participant(i).bid_cost(level));
  }
  const auto daily = expected_daily_cost(inst, x.total_power(weekly));
  if (!daily.is_finite()) {
    throw ScenarioInfeasibleError("a daily scenario cannot cover the weekly shortfall");
  }
  return bids + daily.value();
}

// Minimizes two_stage_cost over weekly selections of the active set.
inline ClearingResult<ExpectedMoney> two_stage_clear(const TwoStageInstance& inst,
                                                     ParticipantSet active) {
  const auto& weekly = inst.weekly();
  if (!active.subset_of(weekly.all())) {
    throw PreconditionError("active set is not a subset of the participants");
  }
  const std::int64_t unit = detail::grid_unit(weekly);
  const std::int64_t cap = inst.requirement().value() / unit;
  return detail::solve_on_grid<ExpectedMoney>(
      weekly, active, unit, cap,
      [&](std::int64_t s) { return expected_daily_cost(inst, Power(s * unit)); });
}

inline ClearingResult<ExpectedMoney> two_stage_clear(const TwoStageInstance& inst) {
  return two_stage_clear(inst, inst.weekly().all());
}

class TwoStageModel {
 public:
  using cost_type = ExpectedMoney;

  explicit TwoStageModel(TwoStageInstance inst)
      : instance_(std::move(inst)),
        cache_(std::make_unique<detail::SolveCache<ExpectedMoney>>()) {}
  TwoStageModel(const TwoStageModel& o) : TwoStageModel(o.instance_) {}
  TwoStageModel& operator=(const TwoStageModel& o) {
    if (this != &o) *this = TwoStageModel(o.instance_);
    return *this;
  }
  TwoStageModel(TwoStageModel&&) noexcept = default;
  TwoStageModel& operator=(TwoStageModel&&) noexcept = default;

  const AuctionInstance& instance() const { return instance_.weekly(); }
  const TwoStageInstance& two_stage() const { return instance_; }

  TwoStageModel with_instance(AuctionInstance weekly) const {
    return TwoStageModel(instance_.with_weekly(std::move(weekly)));
  }

  const ClearingResult<ExpectedMoney>& solve(ParticipantSet s) const {
    return cache_->get(s, [this](ParticipantSet a) { return two_stage_clear(instance_, a); });
  }

 private:
  TwoStageInstance instance_;
  std::unique_ptr<detail::SolveCache<ExpectedMoney>> cache_;
};

inline MechanismOutcome<ExpectedMoney> two_stage_vcg(const TwoStageInstance& inst) {
  return run_vcg(TwoStageModel(inst));
}

inline MechanismOutcome<ExpectedMoney> two_stage_pay_as_bid(const TwoStageInstance& inst) {
  return run_pay_as_bid(TwoStageModel(inst));
}

struct MechanismTotals {
  Power procured{0};
  ExpectedMoney pay_as_bid_total{};
  ExpectedMoney vcg_total{};
  // Expected daily top-up (two-stage only).
  ExpectedMoney residual_cost{};
};

struct MechanismComparison {
  std::string name;
  MechanismTotals two_stage;
  // Same bids, demand fixed to the two-stage weekly total.
  MechanismTotals deterministic;
};

// Two-stage clearing against a deterministic clearing that must procure
// exactly what the two-stage optimum bought weekly.
inline MechanismComparison compare_mechanisms(const TwoStageInstance& inst,
                                              std::string name = {}) {
  MechanismComparison out;
  out.name = std::move(name);

  const auto vcg = two_stage_vcg(inst);
  const auto pab = two_stage_pay_as_bid(inst);
  out.two_stage.procured = vcg.clearing.allocation.total_power(inst.weekly());
  out.two_stage.vcg_total = vcg.total_payments();
  out.two_stage.pay_as_bid_total = pab.total_payments();
  out.two_stage.residual_cost = vcg.clearing.residual_cost;

  const Power procured = out.two_stage.procured;
  const Power increment(procured.value() == 0
                            ? inst.weekly().increment().value()
                            : std::gcd(procured.value(), inst.weekly().increment().value()));
  const auto fixed = inst.weekly().with_demand(procured, increment);
  const auto det_vcg = run_vcg(fixed);
  const auto det_pab = run_pay_as_bid(fixed);
  out.deterministic.procured = det_vcg.clearing.allocation.total_power(fixed);
  out.deterministic.vcg_total = money_as<ExpectedMoney>(det_vcg.total_payments());
  out.deterministic.pay_as_bid_total = money_as<ExpectedMoney>(det_pab.total_payments());
  return out;
}

}  // namespace procure
