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

#include "procure/clearing.hpp"

#include <vector>

#include "fixtures.hpp"
#include "gtest/gtest.h"
#include "procure/random.hpp"

namespace procure {
namespace {

using testing::bidder;
using testing::set_of;

TEST(Clear, SingleOffersPickCheapest) {
  const auto inst = testing::example1();
  const auto r = clear(inst, set_of(inst, {"PP1", "PP2"}));
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.optimal_cost, Extended<Money>(Money(40000)));
  EXPECT_EQ(r.allocation.accepted_power(inst, 0), Power(800));
  EXPECT_EQ(r.allocation.accepted_power(inst, 1), Power(0));
}

TEST(Clear, DecreasingMarginLadderWithOneEntrant) {
  const auto inst = testing::example2(1);
  const auto r = clear(inst);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.optimal_cost.value(), Money(33000));
  EXPECT_EQ(r.allocation.accepted_power(inst, inst.require_index("PP1")), Power(600));
  EXPECT_EQ(r.allocation.accepted_power(inst, inst.require_index("PP2")), Power(0));
  EXPECT_EQ(r.allocation.accepted_power(inst, inst.require_index("PP3")), Power(200));
}

TEST(Clear, EmptyActiveSetIsInfeasible) {
  const auto inst = testing::example1();
  const auto r = clear(inst, ParticipantSet());
  EXPECT_FALSE(r.feasible);
  EXPECT_TRUE(r.optimal_cost.is_plus_infinity());
  EXPECT_EQ(r.allocation.winners(), ParticipantSet());
}

TEST(Clear, ZeroDemandCostsNothing) {
  const auto inst = testing::example1().with_demand(Power(0), Power(200));
  const auto r = clear(inst);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.optimal_cost.value(), Money(0));
  EXPECT_TRUE(r.allocation.winners().empty());
}

TEST(Clear, RejectsForeignParticipants) {
  const auto inst = testing::example1();
  EXPECT_THROW(clear(inst, ParticipantSet::single(5)), PreconditionError);
}

TEST(Clear, CanonicalTieBreakPrefersSmallerVectorLexicographically) {
  // Identical offers: (A=0, B=100) precedes (A=100, B=0).
  const AuctionInstance inst(Power(100), Power(100),
                             {bidder("A", {{Power(100), Money(5)}}),
                              bidder("B", {{Power(100), Money(5)}})});
  const auto r = clear(inst);
  EXPECT_FALSE(r.allocation.levels[0]);
  EXPECT_EQ(r.allocation.levels[1], 0u);
  EXPECT_EQ(brute_force_clear(inst, inst.all()).allocation, r.allocation);
}

TEST(Clear, OvershootAllowedWhenGridForcesIt) {
  // 300 MW must come from 200 MW offers.
  const AuctionInstance inst(Power(300), Power(100),
                             {bidder("A", {{Power(200), Money(10)}}),
                              bidder("B", {{Power(200), Money(20)}}),
                              bidder("C", {{Power(400), Money(35)}})});
  const auto r = clear(inst);
  EXPECT_EQ(r.optimal_cost.value(), Money(30));
  EXPECT_EQ(r.allocation.total_power(inst), Power(400));
  EXPECT_EQ(brute_force_clear(inst, inst.all()).allocation, r.allocation);
}

TEST(BruteForceClear, MatchesOnSingleOffers) {
  const auto inst = testing::example1();
  const auto a = clear(inst);
  const auto b = brute_force_clear(inst, inst.all());
  EXPECT_EQ(a.optimal_cost, b.optimal_cost);
  EXPECT_EQ(a.allocation, b.allocation);
}

TEST(BruteForceClear, ForcedAcceptance) {
  const AuctionInstance inst(Power(500), Power(500), {bidder("A", {{Power(500), Money(123)}})});
  EXPECT_EQ(brute_force_clear(inst, inst.all()).optimal_cost.value(), Money(123));
}

TEST(BruteForceClear, EnforcesBudget) {
  std::vector<Participant> ps;
  for (int i = 0; i < 12; ++i) {
    ps.push_back(testing::grid_bidder("P" + std::to_string(10 + i), 10, {1, 2, 3, 4}));
  }
  const AuctionInstance inst(Power(100), Power(10), std::move(ps));
  EXPECT_THROW(brute_force_clear(inst, inst.all()), BudgetExceededError);
  EXPECT_NO_THROW(brute_force_clear(inst, inst.all(), 300'000'000));
}

TEST(BruteForceClear, AgreesWithDynamicProgramOnRandomInstances) {
  RandomInstanceParams params;
  params.max_participants = 6;
  params.allow_infeasible = true;
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = random_instance(params, rng);
    const auto a = clear(inst);
    const auto b = brute_force_clear(inst, inst.all());
    ASSERT_EQ(a.feasible, b.feasible) << "trial " << trial;
    EXPECT_EQ(a.optimal_cost, b.optimal_cost) << "trial " << trial;
    EXPECT_EQ(a.allocation, b.allocation) << "trial " << trial;
  }
}

TEST(CoalitionCost, MatchesHandValues) {
  const auto ex1 = testing::example1();
  const SingleStageModel m1(ex1);
  EXPECT_EQ(coalition_cost(m1, set_of(ex1, {"PP2"})).value(), Money(50000));
  EXPECT_TRUE(coalition_cost(m1, ParticipantSet()).is_plus_infinity());

  const auto closing = testing::closing_example();
  const SingleStageModel m2(closing);
  // 600 MW free plus PP1's first 200 MW.
  EXPECT_EQ(coalition_cost(m2, set_of(closing, {"PP1", "PP2", "PP3", "PP4", "PP5"})).value(),
            Money(8000));
}

TEST(CoalitionCost, IsMemoized) {
  const auto inst = testing::closing_example();
  const SingleStageModel model(inst);
  const auto& first = model.solve(inst.all());
  const auto& again = model.solve(inst.all());
  EXPECT_EQ(&first, &again);
  EXPECT_EQ(model.cached_coalitions(), 1u);
  const SingleStageModel copy = model;
  EXPECT_EQ(copy.cached_coalitions(), 0u);
}

TEST(ClearingProperties, MoreParticipantsNeverCostMore) {
  RandomInstanceParams params;
  params.max_participants = 5;
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const SingleStageModel model(random_instance(params, rng));
    const auto all = model.instance().all();
    for_each_subset(all, [&](ParticipantSet s) {
      for_each_subset(s, [&](ParticipantSet sub) {
        EXPECT_GE(coalition_cost(model, sub), coalition_cost(model, s));
      });
    });
  }
}

TEST(ClearingProperties, FeasibleAllocationsCoverDemand) {
  RandomInstanceParams params;
  params.allow_infeasible = true;
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = random_instance(params, rng);
    const auto r = clear(inst);
    if (!r.feasible) {
      EXPECT_LT(inst.max_supply(inst.all()), inst.demand());
      continue;
    }
    EXPECT_GE(r.allocation.total_power(inst), inst.demand());
    Money sum(0);
    for (std::size_t i = 0; i < inst.size(); ++i) sum += inst.participant(i).bid_cost(r.allocation.levels[i]);
    EXPECT_EQ(sum, r.optimal_cost.value());
  }
}

TEST(ClearingProperties, IncreasingMarginsProcureExactlyDemand) {
  RandomInstanceParams params;
  params.shape = CostShape::kIncreasingMargins;
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = random_instance(params, rng);
    ASSERT_TRUE(fully_validated(inst));
    const auto r = clear(inst);
    ASSERT_TRUE(r.feasible);
    EXPECT_EQ(r.allocation.total_power(inst), inst.demand()) << "trial " << trial;
  }
}

TEST(ClearingProperties, EntrantNeverRaisesIncumbentPower) {
  RandomInstanceParams params;
  params.shape = CostShape::kIncreasingMargins;
  params.max_participants = 5;
  Rng rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const SingleStageModel model(random_instance(params, rng));
    const auto all = model.instance().all();
    for_each_subset(all, [&](ParticipantSet s) {
      for (std::size_t i : (all - s).indices()) {
        EXPECT_TRUE(incumbent_power_increases(model, s, i).empty()) << "trial " << trial;
      }
    });
  }
}

TEST(ClearingProperties, EntrantCanRaiseIncumbentPowerWithoutIncreasingMargins) {
  // A's second step is cheap (margins 90, 20). Without C, B's 400 MW at 105
  // beats A's 400 MW at 110; with C, A's first 200 MW plus C's wins at 95.
  const AuctionInstance inst(Power(400), Power(200),
                             {testing::grid_bidder("A", 200, {90, 110}),
                              bidder("B", {{Power(400), Money(105)}}),
                              testing::grid_bidder("C", 200, {5})});
  const SingleStageModel model(inst);
  const auto grows = incumbent_power_increases(model, set_of(inst, {"A", "B"}), 2);
  EXPECT_EQ(grows, std::vector<std::size_t>{0});
}

TEST(ClearingProperties, UniformScalingPreservesAllocation) {
  RandomInstanceParams params;
  params.cost_granularity = 10;
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = random_instance(params, rng);
    const auto base = clear(inst);
    for (auto [num, den] : {std::pair{1, 2}, std::pair{9, 10}, std::pair{3, 1}}) {
      const auto scaled = clear(scale_costs(inst, num, den));
      EXPECT_EQ(scaled.allocation, base.allocation);
      EXPECT_EQ(scaled.optimal_cost.value().value() * den, base.optimal_cost.value().value() * num);
    }
  }
}

}  // namespace
}  // namespace procure
