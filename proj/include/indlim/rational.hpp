#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <utility>

#include "indlim/errors.hpp"

namespace indlim {

/// Exact rational scalar with arbitrary-precision numerator and denominator.
///
/// Values are always stored canonicalized (coprime parts, positive
/// denominator), so operator== is a decidable exact equality. Division by
/// zero throws DivisionByZero instead of producing a silent NaN or trapping
/// inside the bignum backend.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(int v) : q_(v) {}  // NOLINT: implicit, so integer literals read naturally
  Rational(long v) : q_(static_cast<signed long>(v)) {}

  Rational(long long num, long long den) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    q_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    q_.canonicalize();
  }

  /// Accepts "p", "-p", "p/q" in base 10.
  static Rational parse(const std::string& text) {
    try {
      mpq_class q(text, 10);
      if (q.get_den() == 0) throw DivisionByZero("rational literal with zero denominator");
      q.canonicalize();
      return Rational(std::move(q));
    } catch (const std::invalid_argument&) {
      throw Error("not a rational literal: '" + text + "'");
    }
  }

  Rational operator-() const { return Rational(mpq_class(-q_)); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DivisionByZero();
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  Rational abs() const { return Rational(mpq_class(::abs(q_))); }

  double to_double() const { return q_.get_d(); }

  /// "p" or "p/q", canonical.
  std::string str() const { return q_.get_str(); }

 private:
  explicit Rational(mpq_class q) : q_(std::move(q)) {}
  mpq_class q_;
};

}  // namespace indlim
