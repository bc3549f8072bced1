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

#include <string>
#include <vector>

#include "procure/market.hpp"

namespace procure::testing {

inline Participant bidder(std::string id, std::vector<BidLevel> levels) {
  std::vector<Money> truth;
  for (const auto& l : levels) truth.push_back(l.cost);
  return Participant(BidLadder(std::move(id), std::move(levels)), std::move(truth));
}

inline Participant grid_bidder(std::string id, std::int64_t step,
                               std::vector<std::int64_t> costs) {
  std::vector<BidLevel> levels;
  for (std::size_t k = 0; k < costs.size(); ++k) {
    levels.push_back({Power(step * static_cast<std::int64_t>(k + 1)), Money(costs[k])});
  }
  return bidder(std::move(id), std::move(levels));
}

inline std::vector<Participant> free_entrants(int first, int count) {
  std::vector<Participant> out;
  for (int i = first; i < first + count; ++i) {
    out.push_back(bidder("PP" + std::to_string(i), {{Power(200), Money(0)}}));
  }
  return out;
}

// Two 800 MW single offers at 40000 and 50000 CHF, optionally with four free
// 200 MW entrants.
inline AuctionInstance example1(bool entrants = false) {
  std::vector<Participant> ps{bidder("PP1", {{Power(800), Money(40000)}}),
                              bidder("PP2", {{Power(800), Money(50000)}})};
  if (entrants) {
    for (auto& p : free_entrants(3, 4)) ps.push_back(std::move(p));
  }
  return AuctionInstance(Power(800), Power(200), std::move(ps));
}

inline Participant ladder_b2() { return grid_bidder("PP2", 200, {12000, 24000, 36000, 50000}); }

// Decreasing marginal cost for PP1; `entrants` free 200 MW bidders PP3...
inline AuctionInstance example2(int entrants = 1) {
  std::vector<Participant> ps{grid_bidder("PP1", 200, {12000, 25000, 33000, 40000}), ladder_b2()};
  for (auto& p : free_entrants(3, entrants)) ps.push_back(std::move(p));
  return AuctionInstance(Power(800), Power(200), std::move(ps));
}

// Revised ladders with four free entrants.
inline AuctionInstance closing_example(int entrants = 4) {
  std::vector<Participant> ps{grid_bidder("PP1", 200, {8000, 19000, 30000, 40000}), ladder_b2()};
  for (auto& p : free_entrants(3, entrants)) ps.push_back(std::move(p));
  return AuctionInstance(Power(800), Power(200), std::move(ps));
}

inline ParticipantSet set_of(const AuctionInstance& inst, std::initializer_list<const char*> ids) {
  ParticipantSet s;
  for (const char* id : ids) s = s.with(inst.require_index(id));
  return s;
}

}  // namespace procure::testing
