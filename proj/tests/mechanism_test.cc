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

#include "procure/mechanism.hpp"

#include <vector>

#include "fixtures.hpp"
#include "gtest/gtest.h"
#include "procure/random.hpp"

namespace procure {
namespace {

using testing::bidder;

TEST(Vcg, SecondPriceForSingleOffers) {
  const auto out = run_vcg(testing::example1());
  EXPECT_EQ(out.payment("PP1"), Money(50000));
  EXPECT_EQ(out.payment("PP2"), Money(0));
  EXPECT_EQ(*out.utility("PP1"), Money(10000));
}

TEST(Vcg, FreeEntrantsEachCollectTheWholeCheapestOffer) {
  const auto out = run_vcg(testing::example1(true));
  for (const char* id : {"PP3", "PP4", "PP5", "PP6"}) {
    EXPECT_EQ(out.payment(id), Money(40000)) << id;
  }
  EXPECT_EQ(out.payment("PP1"), Money(0));
  EXPECT_EQ(out.total_payments(), Money(160000));
}

TEST(Vcg, RevisedLaddersPayEachEntrant8000) {
  const auto out = run_vcg(testing::closing_example());
  for (const char* id : {"PP3", "PP4", "PP5", "PP6"}) {
    EXPECT_EQ(out.payment(id), Money(8000)) << id;
  }
  EXPECT_EQ(out.clearing.optimal_cost.value(), Money(0));
}

TEST(Vcg, PivotalWinnerIsRefused) {
  const AuctionInstance inst(Power(800), Power(800),
                             {bidder("ONLY", {{Power(800), Money(1000)}})});
  try {
    run_vcg(inst);
    FAIL() << "expected PivotalBidderError";
  } catch (const PivotalBidderError& e) {
    EXPECT_EQ(e.participant(), "ONLY");
  }
  // Pay-as-bid has no pivot term.
  EXPECT_EQ(run_pay_as_bid(inst).payment("ONLY"), Money(1000));
}

TEST(Vcg, InfeasibleInstanceIsRejected) {
  const AuctionInstance inst(Power(1000), Power(200),
                             {bidder("A", {{Power(200), Money(1)}})});
  EXPECT_THROW(run_vcg(inst), InfeasibleError);
  EXPECT_THROW(run_pay_as_bid(inst), InfeasibleError);
}

TEST(Vcg, UtilitiesOmittedWithoutTrueCosts) {
  const AuctionInstance inst(Power(200), Power(200),
                             {Participant(BidLadder("A", {{Power(200), Money(10)}})),
                              Participant(BidLadder("B", {{Power(200), Money(20)}}))});
  const auto out = run_vcg(inst);
  EXPECT_EQ(out.payment("A"), Money(20));
  EXPECT_FALSE(out.utility("A"));
  EXPECT_FALSE(out.has_all_utilities());
}

TEST(PayAsBid, PaysBidPrices) {
  const auto out = run_pay_as_bid(testing::example1());
  EXPECT_EQ(out.payment("PP1"), Money(40000));
  EXPECT_EQ(out.payment("PP2"), Money(0));
  for (const auto& p : out.participants) EXPECT_EQ(*p.utility, Money(0));
}

TEST(PayAsBid, InflatedBidsEarnTheMarkup) {
  auto inst = testing::example1();
  inst = inst.with_bid_costs(inst.require_index("PP1"), {Money(45000)});
  const auto out = run_pay_as_bid(inst);
  EXPECT_EQ(*out.utility("PP1"), Money(5000));
}

TEST(TsoUtility, SingleOffers) {
  const auto out = run_vcg(testing::example1());
  EXPECT_EQ(out.tso_utility, Money(-50000));
  EXPECT_EQ(tso_utility(out), Money(-50000));
  Money total = out.tso_utility;
  for (const auto& p : out.participants) total += *p.utility;
  EXPECT_EQ(total, Money(-40000));
}

TEST(TsoUtility, ZeroDemand) {
  const auto out = run_vcg(testing::example1().with_demand(Power(0), Power(200)));
  EXPECT_EQ(out.tso_utility, Money(0));
  EXPECT_EQ(out.total_payments(), Money(0));
}

TEST(TsoUtility, RevisedLadders) {
  const auto out = run_vcg(testing::closing_example());
  EXPECT_EQ(out.tso_utility, Money(-32000));
  Money bidders(0);
  for (const auto& p : out.participants) bidders += *p.utility;
  EXPECT_EQ(bidders, Money(32000));
  EXPECT_EQ(out.tso_utility + bidders, Money(0));
}

TEST(DominantStrategyProbe, OverbiddingWinnerKeepsUtility) {
  const auto probe =
      dominant_strategy_probe(testing::example1(), "PP1", {{Money(45000)}, {Money(40000)}});
  EXPECT_EQ(probe.truthful_utility, Money(10000));
  ASSERT_EQ(probe.deviation_utilities.size(), 2u);
  EXPECT_EQ(probe.deviation_utilities[0], Money(10000));
  EXPECT_EQ(probe.deviation_utilities[1], Money(10000));
  EXPECT_TRUE(probe.truthful_dominates());
}

TEST(DominantStrategyProbe, OverbiddingPastTheRivalLoses) {
  const auto probe = dominant_strategy_probe(testing::example1(), "PP1", {{Money(55000)}});
  EXPECT_EQ(probe.deviation_utilities[0], Money(0));
  EXPECT_EQ(probe.best_deviation(), Money(0));
}

TEST(DominantStrategyProbe, UnderbiddingLoserCanLose) {
  // PP2 undercuts to 30000: paid 40000 for a true cost of 50000.
  const auto probe = dominant_strategy_probe(testing::example1(), "PP2", {{Money(30000)}});
  EXPECT_EQ(probe.truthful_utility, Money(0));
  EXPECT_EQ(probe.deviation_utilities[0], Money(-10000));
}

TEST(DominantStrategyProbe, RequiresTrueCosts) {
  const AuctionInstance inst(Power(200), Power(200),
                             {Participant(BidLadder("A", {{Power(200), Money(10)}})),
                              bidder("B", {{Power(200), Money(20)}})});
  EXPECT_THROW(dominant_strategy_probe(inst, "A", {}), PreconditionError);
  EXPECT_THROW(dominant_strategy_probe(inst, "Z", {}), InputError);
}

RandomInstanceParams slack_params() {
  RandomInstanceParams params;
  params.max_participants = 6;
  params.slack = true;
  return params;
}

TEST(VcgProperties, TruthfulOutcomesAreRationalAndEfficient) {
  Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = random_instance(slack_params(), rng);
    const auto vcg = run_vcg(inst);
    const auto pab = run_pay_as_bid(inst);
    Money total = vcg.tso_utility;
    for (std::size_t j = 0; j < inst.size(); ++j) {
      const auto& p = vcg.participants[j];
      EXPECT_GE(p.payment, Money(0));
      EXPECT_GE(*p.utility, Money(0));
      EXPECT_GE(p.payment, pab.participants[j].payment);
      if (!p.level) {
        EXPECT_EQ(p.payment, Money(0));
      }
      total += *p.utility;
    }
    EXPECT_EQ(total, -vcg.clearing.optimal_cost.value());
  }
}

TEST(VcgProperties, NoSampledDeviationBeatsTruth) {
  Rng rng(43);
  int probes = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const auto inst = random_instance(slack_params(), rng);
    const auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(inst.size()) - 1));
    const auto& ladder = inst.participant(j).ladder();
    std::vector<std::vector<Money>> deviations;
    for (int d = 0; d < 4; ++d) deviations.push_back(arbitrary_costs(ladder.size(), 100000, 1, rng));
    const auto probe = dominant_strategy_probe(inst, ladder.participant(), deviations);
    EXPECT_TRUE(probe.truthful_dominates()) << "trial " << trial;
    probes += static_cast<int>(deviations.size());
  }
  EXPECT_EQ(probes, 600);
}

TEST(VcgProperties, ScalingCostsScalesPayments) {
  RandomInstanceParams params = slack_params();
  params.cost_granularity = 10;
  Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = random_instance(params, rng);
    const auto base = run_vcg(inst);
    const auto scaled = run_vcg(scale_costs(inst, 9, 10));
    EXPECT_EQ(scaled.clearing.allocation, base.clearing.allocation);
    for (std::size_t j = 0; j < inst.size(); ++j) {
      EXPECT_EQ(scaled.participants[j].payment.value() * 10,
                base.participants[j].payment.value() * 9);
    }
  }
}

}  // namespace
}  // namespace procure
