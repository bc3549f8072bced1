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
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "procure/errors.hpp"
#include "procure/clearing.hpp"
#include "procure/market.hpp"

namespace procure {

// mt19937_64 with its own bounded sampling, so a seed reproduces the same
// instances on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw PreconditionError("empty sampling range");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  bool chance(std::int64_t numerator, std::int64_t denominator) {
    return uniform(0, denominator - 1) < numerator;
  }

 private:
  std::mt19937_64 engine_;
};

enum class CostShape {
  kArbitrary,          // any nonnegative costs, any multiples of m
  kIncreasingMargins,  // levels m..Km with strictly increasing marginal cost
};

struct RandomInstanceParams {
  std::size_t min_participants = 1;
  std::size_t max_participants = 6;
  std::size_t max_levels = 4;
  std::int64_t max_cost = 100000;
  // Every generated cost is a multiple of this.
  std::int64_t cost_granularity = 1;
  std::int64_t increment = 10;
  CostShape shape = CostShape::kArbitrary;
  // Arbitrary shape only: place levels on m..Km instead of a random subset
  // of multiples.
  bool contiguous_levels = false;
  // Demand never exceeds what remains after removing the largest ladder, so
  // no winner is pivotal.
  bool slack = false;
  // Occasionally ask for more than the total supply.
  bool allow_infeasible = false;
  bool truthful = true;
};

// Costs c(1..K) whose single-step margins strictly increase (c(0) = 0).
inline std::vector<Money> increasing_margin_costs(std::size_t levels, std::int64_t max_cost,
                                                  std::int64_t granularity, Rng& rng) {
  const auto k = static_cast<std::int64_t>(levels);
  const std::int64_t units = std::max<std::int64_t>(max_cost / granularity, 2 * k * k);
  const std::int64_t first_max = units / (2 * k);
  const std::int64_t step_max = std::max<std::int64_t>(1, units / (k * k));
  std::vector<Money> out;
  std::int64_t margin = rng.uniform(0, first_max);
  std::int64_t cost = 0;
  for (std::int64_t i = 0; i < k; ++i) {
    if (i > 0) margin += rng.uniform(1, step_max);
    cost += margin;
    out.emplace_back(cost * granularity);
  }
  return out;
}

inline std::vector<Money> arbitrary_costs(std::size_t levels, std::int64_t max_cost,
                                          std::int64_t granularity, Rng& rng) {
  std::vector<Money> out;
  for (std::size_t i = 0; i < levels; ++i) {
    out.emplace_back(rng.uniform(0, max_cost / granularity) * granularity);
  }
  return out;
}

inline std::string random_participant_id(std::size_t i) {
  std::string digits = std::to_string(i + 1);
  return "P" + std::string(digits.size() < 2 ? 2 - digits.size() : 0, '0') + digits;
}

inline AuctionInstance random_instance(const RandomInstanceParams& params, Rng& rng) {
  if (params.max_participants == 0 || params.max_participants > kMaxParticipants ||
      params.min_participants > params.max_participants || params.max_levels == 0 ||
      params.increment <= 0 || params.cost_granularity <= 0) {
    throw InputError("invalid random instance parameters");
  }
  const std::int64_t m = params.increment;
  while (true) {
    const auto n = static_cast<std::size_t>(
        rng.uniform(static_cast<std::int64_t>(params.min_participants),
                    static_cast<std::int64_t>(params.max_participants)));
    std::vector<Participant> ps;
    std::int64_t supply_units = 0;
    std::int64_t largest_units = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(
          rng.uniform(1, static_cast<std::int64_t>(params.max_levels)));
      std::vector<std::int64_t> multiples;
      if (params.shape == CostShape::kIncreasingMargins || params.contiguous_levels) {
        for (std::size_t q = 1; q <= k; ++q) multiples.push_back(static_cast<std::int64_t>(q));
      } else {
        std::vector<std::int64_t> pool;
        for (std::int64_t q = 1; q <= static_cast<std::int64_t>(params.max_levels) + 2; ++q) {
          pool.push_back(q);
        }
        for (std::size_t pick = 0; pick < k; ++pick) {
          const auto at = rng.uniform(0, static_cast<std::int64_t>(pool.size()) - 1);
          multiples.push_back(pool[static_cast<std::size_t>(at)]);
          pool.erase(pool.begin() + at);
        }
        std::sort(multiples.begin(), multiples.end());
      }
      const auto costs = params.shape == CostShape::kIncreasingMargins
                             ? increasing_margin_costs(k, params.max_cost,
                                                       params.cost_granularity, rng)
                             : arbitrary_costs(k, params.max_cost, params.cost_granularity, rng);
      std::vector<BidLevel> levels;
      for (std::size_t q = 0; q < k; ++q) levels.push_back({Power(multiples[q] * m), costs[q]});
      supply_units += multiples.back();
      largest_units = std::max(largest_units, multiples.back());
      std::optional<std::vector<Money>> truth;
      if (params.truthful) truth = costs;
      ps.emplace_back(BidLadder(random_participant_id(i), std::move(levels)), std::move(truth));
    }
    std::int64_t top = supply_units;
    if (params.slack) top -= largest_units;
    if (top < 1) continue;
    if (params.allow_infeasible && rng.chance(1, 10)) top = supply_units + 1;
    const std::int64_t demand_units = rng.uniform(1, top);
    return AuctionInstance(Power(demand_units * m), Power(m), std::move(ps));
  }
}

// Splits the principal's largest offer into random chunks of whole
// increments, each offered on m..chunk with increasing margins.
inline std::vector<BidLadder> random_shill_split(const BidLadder& principal, Power increment,
                                                 std::int64_t max_cost, Rng& rng) {
  const std::int64_t m = increment.value();
  if (m <= 0 || principal.max_power().value() % m != 0) {
    throw InputError("principal '" + principal.participant() +
                     "' cannot be split into increments of " + to_string(increment) + " MW");
  }
  std::int64_t remaining = principal.max_power().value() / m;
  std::vector<BidLadder> out;
  for (int k = 1; remaining > 0; ++k) {
    const std::int64_t chunk = rng.uniform(1, remaining);
    remaining -= chunk;
    const auto costs = increasing_margin_costs(static_cast<std::size_t>(chunk), max_cost, 1, rng);
    std::vector<BidLevel> levels;
    for (std::int64_t q = 1; q <= chunk; ++q) {
      levels.push_back({Power(q * m), costs[static_cast<std::size_t>(q - 1)]});
    }
    out.emplace_back(principal.participant() + "#" + std::to_string(k), std::move(levels));
  }
  return out;
}

// Scales every single-step margin down by a common random fraction. Strictly
// increasing margins stay strictly increasing, and no cost goes up.
inline std::vector<Money> random_lowering(const std::vector<Money>& costs, Rng& rng) {
  const std::int64_t percent = rng.uniform(0, 99);
  std::vector<Money> out;
  std::int64_t previous_cost = 0;
  std::int64_t previous_margin = 0;
  std::int64_t lowered_margin = 0;
  std::int64_t lowered_cost = 0;
  for (std::size_t k = 0; k < costs.size(); ++k) {
    const std::int64_t margin = costs[k].value() - previous_cost;
    std::int64_t next = std::max<std::int64_t>(margin, 0) * percent / 100;
    if (k > 0 && margin > previous_margin) next = std::max(next, lowered_margin + 1);
    lowered_cost = std::clamp<std::int64_t>(lowered_cost + next, 0, costs[k].value());
    out.emplace_back(lowered_cost);
    lowered_margin = next;
    previous_margin = margin;
    previous_cost = costs[k].value();
  }
  return out;
}

// A random nonempty set of losers of the truthful clearing, each lowering
// its bids. Empty when everybody wins.
inline std::vector<std::pair<std::string, std::vector<Money>>> random_collusion(
    const AuctionInstance& truthful, const Allocation& clearing, Rng& rng) {
  std::vector<std::size_t> losers;
  for (std::size_t j = 0; j < truthful.size(); ++j) {
    if (!clearing.levels[j] && truthful.participant(j).has_true_costs()) losers.push_back(j);
  }
  std::vector<std::pair<std::string, std::vector<Money>>> out;
  if (losers.empty()) return out;
  while (out.empty()) {
    for (const auto j : losers) {
      if (!rng.chance(1, 2)) continue;
      const auto& p = truthful.participant(j);
      out.emplace_back(p.id(), random_lowering(*p.true_costs(), rng));
    }
  }
  return out;
}

}  // namespace procure
