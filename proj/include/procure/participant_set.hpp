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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace procure {

inline constexpr std::size_t kMaxParticipants = 64;

// Set of participant indices (into an AuctionInstance), stored as a bitmask.
// The TSO is never a member; it is implicit in every evaluated coalition.
class ParticipantSet {
 public:
  constexpr ParticipantSet() = default;
  constexpr explicit ParticipantSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr ParticipantSet first(std::size_t n) {
    return ParticipantSet(n >= 64 ? ~std::uint64_t{0}
                                  : (std::uint64_t{1} << n) - 1);
  }
  static constexpr ParticipantSet single(std::size_t i) {
    return ParticipantSet(std::uint64_t{1} << i);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const {
    return static_cast<std::size_t>(std::popcount(bits_));
  }
  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1U; }
  constexpr bool subset_of(ParticipantSet o) const {
    return (bits_ & ~o.bits_) == 0;
  }

  constexpr ParticipantSet with(std::size_t i) const {
    return ParticipantSet(bits_ | (std::uint64_t{1} << i));
  }
  constexpr ParticipantSet without(std::size_t i) const {
    return ParticipantSet(bits_ & ~(std::uint64_t{1} << i));
  }

  friend constexpr ParticipantSet operator|(ParticipantSet a, ParticipantSet b) {
    return ParticipantSet(a.bits_ | b.bits_);
  }
  friend constexpr ParticipantSet operator&(ParticipantSet a, ParticipantSet b) {
    return ParticipantSet(a.bits_ & b.bits_);
  }
  friend constexpr ParticipantSet operator-(ParticipantSet a, ParticipantSet b) {
    return ParticipantSet(a.bits_ & ~b.bits_);
  }
  friend constexpr bool operator==(ParticipantSet, ParticipantSet) = default;

  // Ascending member indices.
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    }
    return out;
  }

 private:
  std::uint64_t bits_ = 0;
};

// Calls f(sub) for every subset of `set`, including the empty set and `set`
// itself, in increasing bitmask order.
template <class F>
void for_each_subset(ParticipantSet set, F&& f) {
  const std::uint64_t full = set.bits();
  std::uint64_t sub = 0;
  while (true) {
    f(ParticipantSet(sub));
    if (sub == full) break;
    sub = (sub - full) & full;
  }
}

}  // namespace procure
