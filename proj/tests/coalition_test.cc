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

#include "procure/coalition.hpp"

#include <algorithm>
#include <vector>

#include "fixtures.hpp"
#include "gtest/gtest.h"
#include "procure/random.hpp"

namespace procure {
namespace {

using testing::set_of;

TEST(CoalitionValue, NegativeCostWithTheBuyer) {
  const auto inst = testing::example1();
  const SingleStageModel model(inst);
  EXPECT_EQ(coalition_value(model, set_of(inst, {"PP1"}), true), Extended<Money>(Money(-40000)));
  EXPECT_EQ(coalition_value(model, set_of(inst, {"PP1"}), false), Extended<Money>(Money(0)));
  EXPECT_TRUE(coalition_value(model, ParticipantSet(), true).is_minus_infinity());
}

TEST(CoreCheck, FreeEntrantsAreBlocked) {
  const auto inst = testing::example1(true);
  const SingleStageModel model(inst);
  const auto report = core_check(model);
  EXPECT_FALSE(report.in_core);
  EXPECT_EQ(report.winners, set_of(inst, {"PP3", "PP4", "PP5", "PP6"}));
  const auto all_four = std::find_if(report.blocking.begin(), report.blocking.end(),
                                     [&](const auto& b) { return b.members == report.winners; });
  ASSERT_NE(all_four, report.blocking.end());
  EXPECT_EQ(all_four->utility_sum.value(), Money(160000));
  EXPECT_EQ(all_four->withdrawal_gain.value(), Money(40000));
  // Any single entrant alone is exactly at its bound.
  for (const auto& b : report.blocking) EXPECT_GE(b.members.size(), 2u);
}

TEST(CoreCheck, RevisedLaddersAreInCore) {
  const SingleStageModel model(testing::closing_example());
  const auto report = core_check(model);
  EXPECT_TRUE(report.in_core);
  EXPECT_TRUE(report.blocking.empty());
}

TEST(CoreCheck, SingleWinnerIsInCore) {
  const SingleStageModel model(testing::example1());
  EXPECT_TRUE(core_check(model).in_core);
}

TEST(CoreCheck, PivotalWinnersCannotBeBlocked) {
  // Both winners are needed; every K has an uncoverable remainder.
  const AuctionInstance inst(Power(400), Power(200),
                             {testing::bidder("A", {{Power(200), Money(5)}}),
                              testing::bidder("B", {{Power(200), Money(7)}})});
  const SingleStageModel model(inst);
  EXPECT_TRUE(core_check(model).in_core);
  EXPECT_THROW(core_check_direct(model, inst.all()), PivotalBidderError);
}

TEST(CoreCheck, EnforcesWinnerLimit) {
  const SingleStageModel model(testing::example1(true));
  EXPECT_THROW(core_check(model, model.instance().all(), 3), BudgetExceededError);
}

TEST(CoreCheck, ReducedCheckAgreesWithDefinition) {
  RandomInstanceParams params;
  params.max_participants = 6;
  params.slack = true;
  params.contiguous_levels = true;
  Rng rng(1);
  int blocked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const SingleStageModel model(random_instance(params, rng));
    const auto all = model.instance().all();
    const auto reduced = core_check(model, all);
    const auto direct = core_check_direct(model, all);
    EXPECT_EQ(reduced.in_core, direct.in_core) << "trial " << trial;
    blocked += !reduced.in_core;
  }
  EXPECT_GT(blocked, 0);
}

TEST(CoreCheck, InCoreBoundsTotalVcgPayments) {
  RandomInstanceParams params;
  params.slack = true;
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const SingleStageModel model(random_instance(params, rng));
    const auto report = core_check(model);
    if (!report.in_core) continue;
    const auto out = run_vcg(model);
    const auto remainder = coalition_cost(model, model.instance().all() - report.winners);
    if (!remainder.is_finite()) continue;
    EXPECT_LE(out.total_payments(), remainder.value() - out.clearing.optimal_cost.value() +
                                        out.clearing.bid_cost);
  }
}

TEST(PayoffMonotonicity, DecreasingMarginsViolate) {
  const auto inst = testing::example2(4);
  const SingleStageModel model(inst);
  const auto all = inst.all();
  const auto s = set_of(inst, {"PP1", "PP2", "PP3"});
  const std::size_t pp3 = inst.require_index("PP3");

  const auto adjacent = payoff_monotonicity_check(model, all);
  EXPECT_FALSE(adjacent.monotone);
  EXPECT_TRUE(std::any_of(adjacent.violations.begin(), adjacent.violations.end(),
                          [&](const auto& v) { return v.participant == pp3 && v.smaller == s; }));

  const auto nested = payoff_monotonicity_check(model, all, PairMode::kAllNested);
  const auto it = std::find_if(nested.violations.begin(), nested.violations.end(), [&](const auto& v) {
    return v.participant == pp3 && v.smaller == s && v.larger == all;
  });
  ASSERT_NE(it, nested.violations.end());
  EXPECT_EQ(it->payoff_smaller, Money(7000));
  EXPECT_EQ(it->payoff_larger, Money(12000));
  EXPECT_EQ(it->cost_smaller.value(), Money(33000));
  EXPECT_EQ(it->cost_smaller_without.value(), Money(40000));
  EXPECT_EQ(it->cost_larger.value(), Money(0));
  EXPECT_EQ(it->cost_larger_without.value(), Money(12000));
}

TEST(PayoffMonotonicity, AdjacentAndNestedModesAgree) {
  RandomInstanceParams params;
  params.max_participants = 5;
  Rng rng(3);
  for (int trial = 0; trial < 150; ++trial) {
    const SingleStageModel model(random_instance(params, rng));
    const auto all = model.instance().all();
    EXPECT_EQ(payoff_monotonicity_check(model, all).monotone,
              payoff_monotonicity_check(model, all, PairMode::kAllNested).monotone);
  }
}

TEST(PayoffMonotonicity, IncreasingMarginsAreMonotone) {
  RandomInstanceParams params;
  params.shape = CostShape::kIncreasingMargins;
  params.max_participants = 6;
  Rng rng(4);
  for (int trial = 0; trial < 150; ++trial) {
    const SingleStageModel model(random_instance(params, rng));
    EXPECT_TRUE(payoff_monotonicity_check(model, model.instance().all()).monotone) << trial;
  }
}

TEST(PayoffMonotonicity, SingleSupplierIsVacuous) {
  const AuctionInstance inst(Power(200), Power(200), {testing::bidder("A", {{Power(200), Money(3)}})});
  const SingleStageModel model(inst);
  EXPECT_TRUE(payoff_monotonicity_check(model, inst.all()).monotone);
}

TEST(PayoffMonotonicity, EnforcesLimit) {
  const SingleStageModel model(testing::example1(true));
  EXPECT_THROW(payoff_monotonicity_check(model, model.instance().all(), PairMode::kAdjacent, 4),
               BudgetExceededError);
}

TEST(CoreMonotonicityAudit, DecreasingMarginFamilyFailsBothWays) {
  const SingleStageModel model(testing::example2(4));
  const auto audit = core_monotonicity_audit(model, model.instance().all());
  EXPECT_FALSE(audit.all_in_core);
  EXPECT_FALSE(audit.monotonicity.monotone);
  EXPECT_TRUE(audit.consistent());
}

TEST(CoreMonotonicityAudit, IncreasingMarginsPassBothWays) {
  RandomInstanceParams params;
  params.shape = CostShape::kIncreasingMargins;
  params.max_participants = 5;
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const SingleStageModel model(random_instance(params, rng));
    const auto audit = core_monotonicity_audit(model, model.instance().all());
    EXPECT_TRUE(audit.all_in_core);
    EXPECT_TRUE(audit.monotonicity.monotone);
  }
}

TEST(CoreMonotonicityAudit, SingleParticipant) {
  const AuctionInstance inst(Power(200), Power(200), {testing::bidder("A", {{Power(200), Money(3)}})});
  const auto audit = core_monotonicity_audit(SingleStageModel(inst), inst.all());
  EXPECT_TRUE(audit.all_in_core);
  EXPECT_TRUE(audit.monotonicity.monotone);
}

TEST(CoreMonotonicityAudit, ArbitraryInstancesAreConsistent) {
  RandomInstanceParams params;
  params.max_participants = 5;
  Rng rng(7);
  int negatives = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SingleStageModel model(random_instance(params, rng));
    const auto audit = core_monotonicity_audit(model, model.instance().all());
    EXPECT_TRUE(audit.consistent()) << "trial " << trial;
    negatives += !audit.all_in_core;
  }
  EXPECT_GT(negatives, 0);
}

}  // namespace
}  // namespace procure
