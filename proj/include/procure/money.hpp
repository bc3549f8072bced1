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

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/rational.hpp>

namespace procure {

// Exact quantity with a unit tag. Rep is an integer or an exact rational;
// there is no floating point anywhere in the engine.
template <class Tag, class Rep = std::int64_t>
class Quantity {
 public:
  using rep = Rep;

  constexpr Quantity() = default;
  constexpr explicit Quantity(Rep value) : value_(std::move(value)) {}

  constexpr const Rep& value() const { return value_; }

  Quantity& operator+=(const Quantity& o) {
    value_ += o.value_;
    return *this;
  }
  Quantity& operator-=(const Quantity& o) {
    value_ -= o.value_;
    return *this;
  }

  friend Quantity operator+(Quantity a, const Quantity& b) { return a += b; }
  friend Quantity operator-(Quantity a, const Quantity& b) { return a -= b; }
  friend Quantity operator-(const Quantity& a) { return Quantity(-a.value_); }
  friend Quantity operator*(const Quantity& a, const Rep& k) {
    return Quantity(a.value_ * k);
  }
  friend Quantity operator*(const Rep& k, const Quantity& a) {
    return Quantity(a.value_ * k);
  }

  friend bool operator==(const Quantity& a, const Quantity& b) {
    return a.value_ == b.value_;
  }
  friend bool operator<(const Quantity& a, const Quantity& b) {
    return a.value_ < b.value_;
  }
  friend bool operator>(const Quantity& a, const Quantity& b) { return b < a; }
  friend bool operator<=(const Quantity& a, const Quantity& b) {
    return !(b < a);
  }
  friend bool operator>=(const Quantity& a, const Quantity& b) {
    return !(a < b);
  }

  friend std::ostream& operator<<(std::ostream& os, const Quantity& q) {
    return os << q.value_;
  }

 private:
  Rep value_{};
};

struct MoneyTag {};
struct PowerTag {};

// Whole CHF. Signed so that utilities can go negative.
using Money = Quantity<MoneyTag>;
// Whole MW.
using Power = Quantity<PowerTag>;

using Rational = boost::rational<std::int64_t>;
// Expected-value money; appears once probabilities enter the objective.
using ExpectedMoney = Quantity<MoneyTag, Rational>;

// Lifts a whole-CHF amount into another exact money representation.
template <class C>
C money_as(const Money& m) {
  return C(typename C::rep(m.value()));
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline std::string to_string(const Money& m) { return std::to_string(m.value()); }
inline std::string to_string(const ExpectedMoney& m) {
  return to_string(m.value());
}
inline std::string to_string(const Power& p) { return std::to_string(p.value()); }

// A cost that may be unbounded. Used for optimal costs of coalitions that
// cannot cover demand; callers must branch on is_finite() before doing
// arithmetic.
template <class C>
class Extended {
 public:
  Extended(C value) : kind_(Kind::kFinite), value_(std::move(value)) {}

  static Extended infinity() { return Extended(Kind::kPlusInfinity); }
  static Extended minus_infinity() { return Extended(Kind::kMinusInfinity); }

  bool is_finite() const { return kind_ == Kind::kFinite; }
  bool is_plus_infinity() const { return kind_ == Kind::kPlusInfinity; }
  bool is_minus_infinity() const { return kind_ == Kind::kMinusInfinity; }

  const C& value() const {
    if (!is_finite()) throw std::logic_error("value() on an infinite cost");
    return value_;
  }

  friend Extended operator-(const Extended& e) {
    switch (e.kind_) {
      case Kind::kPlusInfinity:
        return minus_infinity();
      case Kind::kMinusInfinity:
        return infinity();
      default:
        return Extended(-e.value_);
    }
  }

  // Finite plus anything; infinities absorb.
  friend Extended operator+(const C& a, const Extended& e) {
    if (!e.is_finite()) return e;
    return Extended(a + e.value_);
  }

  friend bool operator==(const Extended& a, const Extended& b) {
    if (a.kind_ != b.kind_) return false;
    return !a.is_finite() || a.value_ == b.value_;
  }
  friend bool operator<(const Extended& a, const Extended& b) {
    if (a.rank() != b.rank()) return a.rank() < b.rank();
    return a.is_finite() && a.value_ < b.value_;
  }
  friend bool operator>(const Extended& a, const Extended& b) { return b < a; }
  friend bool operator<=(const Extended& a, const Extended& b) {
    return !(b < a);
  }
  friend bool operator>=(const Extended& a, const Extended& b) {
    return !(a < b);
  }

  friend std::string to_string(const Extended& e) {
    if (e.is_plus_infinity()) return "inf";
    if (e.is_minus_infinity()) return "-inf";
    using procure::to_string;
    return to_string(e.value_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Extended& e) {
    return os << to_string(e);
  }

 private:
  enum class Kind : std::uint8_t { kMinusInfinity, kFinite, kPlusInfinity };

  explicit Extended(Kind kind) : kind_(kind) {}
  int rank() const { return static_cast<int>(kind_); }

  Kind kind_;
  C value_{};
};

}  // namespace procure
