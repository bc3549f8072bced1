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
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "procure/errors.hpp"
#include "procure/money.hpp"
#include "procure/participant_set.hpp"

namespace procure {

struct BidLevel {
  Power power;
  Money cost;

  friend bool operator==(const BidLevel&, const BidLevel&) = default;
};

// A participant's conditional offer: at most one level can be accepted.
// Levels are kept sorted by strictly increasing power; the zero-power
// option with cost 0 is implicit.
class BidLadder {
 public:
  BidLadder() = default;

  BidLadder(std::string participant, std::vector<BidLevel> levels)
      : participant_(std::move(participant)), levels_(std::move(levels)) {
    std::sort(levels_.begin(), levels_.end(),
              [](const BidLevel& a, const BidLevel& b) {
                return a.power < b.power;
              });
    check();
  }

  const std::string& participant() const { return participant_; }
  const std::vector<BidLevel>& levels() const { return levels_; }
  std::size_t size() const { return levels_.size(); }
  bool empty() const { return levels_.empty(); }

  const Power& power(std::size_t k) const { return levels_.at(k).power; }
  const Money& cost(std::size_t k) const { return levels_.at(k).cost; }
  Power max_power() const { return empty() ? Power(0) : levels_.back().power; }

  // Copy with the same powers and new costs (aligned with sorted levels).
  BidLadder with_costs(const std::vector<Money>& costs) const {
    if (costs.size() != levels_.size()) {
      throw InputError("participant '" + participant_ + "': expected " +
                       std::to_string(levels_.size()) + " costs, got " +
                       std::to_string(costs.size()));
    }
    BidLadder out = *this;
    for (std::size_t k = 0; k < costs.size(); ++k) out.levels_[k].cost = costs[k];
    out.check();
    return out;
  }

  BidLadder renamed(std::string participant) const {
    BidLadder out = *this;
    out.participant_ = std::move(participant);
    return out;
  }

  std::vector<Money> costs() const {
    std::vector<Money> out;
    out.reserve(levels_.size());
    for (const auto& l : levels_) out.push_back(l.cost);
    return out;
  }

  friend bool operator==(const BidLadder&, const BidLadder&) = default;

 private:
  void check() const {
    if (participant_.empty()) throw InputError("empty participant identifier");
    for (std::size_t k = 0; k < levels_.size(); ++k) {
      const auto& l = levels_[k];
      if (l.power.value() <= 0) {
        throw InputError("participant '" + participant_ +
                         "': offered power must be positive, got " +
                         to_string(l.power));
      }
      if (l.cost.value() < 0) {
        throw InputError("participant '" + participant_ +
                         "': bid cost must be nonnegative, got " +
                         to_string(l.cost));
      }
      if (k > 0 && levels_[k - 1].power == l.power) {
        throw InputError("participant '" + participant_ +
                         "': duplicate power level " + to_string(l.power));
      }
    }
  }

  std::string participant_;
  std::vector<BidLevel> levels_;
};

// A ladder plus the participant's private true costs, when known.
class Participant {
 public:
  explicit Participant(BidLadder ladder,
                       std::optional<std::vector<Money>> true_costs = {})
      : ladder_(std::move(ladder)), true_costs_(std::move(true_costs)) {
    if (true_costs_) {
      if (true_costs_->size() != ladder_.size()) {
        throw InputError("participant '" + id() + "': " +
                         std::to_string(true_costs_->size()) +
                         " true costs for " + std::to_string(ladder_.size()) +
                         " ladder levels");
      }
      for (const auto& c : *true_costs_) {
        if (c.value() < 0) {
          throw InputError("participant '" + id() +
                           "': true cost must be nonnegative");
        }
      }
    }
  }

  // Levels given in any order; true costs (when present) are aligned with
  // the given order and follow the levels through sorting.
  static Participant from_unsorted(std::string id, std::vector<BidLevel> levels,
                                   std::optional<std::vector<Money>> true_costs) {
    if (!true_costs) return Participant(BidLadder(std::move(id), std::move(levels)));
    if (true_costs->size() != levels.size()) {
      throw InputError("participant '" + id + "': " +
                       std::to_string(true_costs->size()) + " true costs for " +
                       std::to_string(levels.size()) + " ladder levels");
    }
    std::vector<std::size_t> order(levels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return levels[a].power < levels[b].power;
    });
    std::vector<BidLevel> sorted_levels;
    std::vector<Money> sorted_true;
    for (std::size_t k : order) {
      sorted_levels.push_back(levels[k]);
      sorted_true.push_back((*true_costs)[k]);
    }
    return Participant(BidLadder(std::move(id), std::move(sorted_levels)),
                       std::move(sorted_true));
  }

  const std::string& id() const { return ladder_.participant(); }
  const BidLadder& ladder() const { return ladder_; }
  const std::optional<std::vector<Money>>& true_costs() const {
    return true_costs_;
  }
  bool has_true_costs() const { return true_costs_.has_value(); }

  // Bid cost of an accepted level; nullopt means nothing accepted.
  Money bid_cost(std::optional<std::size_t> level) const {
    return level ? ladder_.cost(*level) : Money(0);
  }
  Money true_cost(std::optional<std::size_t> level) const {
    if (!true_costs_) {
      throw PreconditionError("participant '" + id() + "' has no true costs");
    }
    return level ? true_costs_->at(*level) : Money(0);
  }

  bool truthful() const { return true_costs_ && *true_costs_ == ladder_.costs(); }

  Participant with_bid_costs(const std::vector<Money>& costs) const {
    return Participant(ladder_.with_costs(costs), true_costs_);
  }

  friend bool operator==(const Participant&, const Participant&) = default;

 private:
  BidLadder ladder_;
  std::optional<std::vector<Money>> true_costs_;
};

// Demand M, increment m and the participants, kept sorted by identifier.
// Participant indices (and ParticipantSet bits) refer to this order.
class AuctionInstance {
 public:
  AuctionInstance(Power demand, Power increment,
                  std::vector<Participant> participants)
      : demand_(demand), increment_(increment),
        participants_(std::move(participants)) {
    if (demand_.value() < 0) throw InputError("demand must be nonnegative");
    if (increment_.value() <= 0) throw InputError("increment must be positive");
    if (demand_.value() % increment_.value() != 0) {
      throw InputError("increment " + to_string(increment_) +
                       " MW does not divide demand " + to_string(demand_) +
                       " MW");
    }
    if (participants_.size() > kMaxParticipants) {
      throw InputError("at most " + std::to_string(kMaxParticipants) +
                       " participants are supported");
    }
    std::sort(participants_.begin(), participants_.end(),
              [](const Participant& a, const Participant& b) {
                return a.id() < b.id();
              });
    for (std::size_t i = 1; i < participants_.size(); ++i) {
      if (participants_[i - 1].id() == participants_[i].id()) {
        throw InputError("duplicate participant identifier '" +
                         participants_[i].id() + "'");
      }
    }
  }

  const Power& demand() const { return demand_; }
  const Power& increment() const { return increment_; }
  const std::vector<Participant>& participants() const { return participants_; }
  std::size_t size() const { return participants_.size(); }
  const Participant& participant(std::size_t i) const {
    return participants_.at(i);
  }
  ParticipantSet all() const { return ParticipantSet::first(size()); }

  std::optional<std::size_t> index_of(std::string_view id) const {
    auto it = std::lower_bound(
        participants_.begin(), participants_.end(), id,
        [](const Participant& p, std::string_view v) { return p.id() < v; });
    if (it == participants_.end() || it->id() != id) return std::nullopt;
    return static_cast<std::size_t>(it - participants_.begin());
  }

  std::size_t require_index(std::string_view id) const {
    auto i = index_of(id);
    if (!i) throw InputError("unknown participant '" + std::string(id) + "'");
    return *i;
  }

  std::vector<std::string> names(ParticipantSet s) const {
    std::vector<std::string> out;
    for (std::size_t i : s.indices()) out.push_back(participants_.at(i).id());
    return out;
  }

  // Total power offered by a set if every member ran at its top level.
  Power max_supply(ParticipantSet s) const {
    Power total(0);
    for (std::size_t i : s.indices()) total += participants_[i].ladder().max_power();
    return total;
  }

  bool truthful() const {
    return std::all_of(participants_.begin(), participants_.end(),
                       [](const Participant& p) { return p.truthful(); });
  }

  AuctionInstance with_bid_costs(std::size_t i,
                                 const std::vector<Money>& costs) const {
    auto ps = participants_;
    ps.at(i) = ps.at(i).with_bid_costs(costs);
    return AuctionInstance(demand_, increment_, std::move(ps));
  }

  // Every participant with true costs bids them.
  AuctionInstance truthful_version() const {
    auto ps = participants_;
    for (auto& p : ps) {
      if (p.has_true_costs()) p = p.with_bid_costs(*p.true_costs());
    }
    return AuctionInstance(demand_, increment_, std::move(ps));
  }

  AuctionInstance with_demand(Power demand, Power increment) const {
    return AuctionInstance(demand, increment, participants_);
  }

  AuctionInstance restricted_to(ParticipantSet s) const {
    std::vector<Participant> ps;
    for (std::size_t i : s.indices()) ps.push_back(participants_.at(i));
    return AuctionInstance(demand_, increment_, std::move(ps));
  }

  friend bool operator==(const AuctionInstance&, const AuctionInstance&) = default;

 private:
  Power demand_;
  Power increment_;
  std::vector<Participant> participants_;
};

// Multiplies every bid and true cost by num/den. Throws when a scaled cost
// is not a whole CHF amount.
inline AuctionInstance scale_costs(const AuctionInstance& inst, std::int64_t num,
                                   std::int64_t den) {
  if (num <= 0 || den <= 0) throw InputError("scale factor must be positive");
  auto scale = [&](Money c) {
    if ((c.value() * num) % den != 0) {
      throw InputError("cost " + to_string(c) + " is not divisible after scaling by " +
                       std::to_string(num) + "/" + std::to_string(den));
    }
    return Money(c.value() * num / den);
  };
  std::vector<Participant> ps;
  for (const auto& p : inst.participants()) {
    std::vector<Money> bids;
    for (const auto& c : p.ladder().costs()) bids.push_back(scale(c));
    std::optional<std::vector<Money>> truth;
    if (p.true_costs()) {
      truth.emplace();
      for (const auto& c : *p.true_costs()) truth->push_back(scale(c));
    }
    ps.emplace_back(p.ladder().with_costs(bids), std::move(truth));
  }
  return AuctionInstance(inst.demand(), inst.increment(), std::move(ps));
}

// ---------------------------------------------------------------------------
// Bid validation

struct Finding {
  std::string message;
  std::vector<std::size_t> levels;  // offending level indices (0-based)
};

struct ValidationReport {
  std::string participant;
  bool spacing_ok = false;
  bool marginal_cost_checked = false;
  bool increasing_marginal_cost_ok = false;
  std::vector<Finding> findings;

  bool ok() const { return spacing_ok && increasing_marginal_cost_ok; }
};

// Offered powers must be exactly m, 2m, ..., Km for some K >= 1.
inline ValidationReport validate_spacing(const BidLadder& ladder, Power m) {
  ValidationReport r;
  r.participant = ladder.participant();
  if (ladder.empty()) {
    r.findings.push_back({"ladder has no levels", {}});
    return r;
  }
  if (m.value() <= 0) {
    r.findings.push_back({"increment must be positive", {}});
    return r;
  }
  bool ok = true;
  std::int64_t expected = m.value();
  for (std::size_t k = 0; k < ladder.size(); ++k, expected += m.value()) {
    const auto p = ladder.power(k).value();
    if (p == expected) continue;
    ok = false;
    if (p % m.value() != 0) {
      r.findings.push_back({"level " + std::to_string(k + 1) + " offers " +
                                std::to_string(p) +
                                " MW, not a multiple of the increment " +
                                to_string(m) + " MW",
                            {k}});
    } else {
      std::string missing;
      for (std::int64_t q = expected; q < p; q += m.value()) {
        missing += (missing.empty() ? "" : ", ") + std::to_string(q);
      }
      r.findings.push_back({"level " + std::to_string(k + 1) + " offers " +
                                std::to_string(p) + " MW; missing " + missing +
                                " MW",
                            {k}});
    }
    break;
  }
  r.spacing_ok = ok;
  return r;
}

// Strictly increasing marginal cost over equal power steps, with the
// implicit zero level at cost 0: c(k+1)-c(k) > c(k)-c(k-1) for all k >= 1.
// Requires equally spaced levels d, 2d, ..., Kd.
inline ValidationReport check_increasing_marginal_cost(const BidLadder& ladder) {
  if (ladder.empty()) {
    throw PreconditionError("participant '" + ladder.participant() +
                            "': marginal cost undefined on an empty ladder");
  }
  if (auto spacing = validate_spacing(ladder, ladder.power(0)); !spacing.spacing_ok) {
    throw PreconditionError("participant '" + ladder.participant() +
                            "': marginal cost undefined on unequally spaced levels");
  }
  ValidationReport r;
  r.participant = ladder.participant();
  r.spacing_ok = true;
  r.marginal_cost_checked = true;
  r.increasing_marginal_cost_ok = true;
  Money previous_margin = ladder.cost(0);
  for (std::size_t k = 1; k < ladder.size(); ++k) {
    Money margin = ladder.cost(k) - ladder.cost(k - 1);
    if (!(margin > previous_margin)) {
      r.increasing_marginal_cost_ok = false;
      r.findings.push_back(
          {"marginal cost " + to_string(margin) + " from level " +
               std::to_string(k) + " to " + std::to_string(k + 1) +
               " does not exceed the previous marginal cost " +
               to_string(previous_margin),
           {k - 1, k}});
    }
    previous_margin = margin;
  }
  return r;
}

// Spacing against the auction increment, then marginal-cost curvature when
// the spacing allows it.
inline ValidationReport validate_ladder(const BidLadder& ladder, Power m) {
  ValidationReport r = validate_spacing(ladder, m);
  if (!r.spacing_ok) {
    r.findings.push_back({"marginal cost not evaluated: levels are not equally spaced by the increment", {}});
    return r;
  }
  ValidationReport curvature = check_increasing_marginal_cost(ladder);
  r.marginal_cost_checked = true;
  r.increasing_marginal_cost_ok = curvature.increasing_marginal_cost_ok;
  for (auto& f : curvature.findings) r.findings.push_back(std::move(f));
  return r;
}

inline std::vector<ValidationReport> validate_instance(const AuctionInstance& inst) {
  std::vector<ValidationReport> out;
  for (const auto& p : inst.participants()) {
    out.push_back(validate_ladder(p.ladder(), inst.increment()));
  }
  return out;
}

inline bool fully_validated(const AuctionInstance& inst) {
  for (const auto& r : validate_instance(inst)) {
    if (!r.ok()) return false;
  }
  return true;
}

// Payment minus the true cost of what was accepted.
inline Money utility(const Money& payment, const Money& accepted_true_cost) {
  return payment - accepted_true_cost;
}

}  // namespace procure
