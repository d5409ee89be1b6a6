#pragma once

#include <cmath>
#include <concepts>
#include <cstdio>
#include <string>

#include "indlim/rational.hpp"

namespace indlim {

/// Per-scalar-mode glue. The library is generic over the scalar: exact
/// rational for identity checks, double for tolerance/finite-difference work.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool is_exact = true;
  static Rational from_int(long v) { return Rational(v); }
  static double to_double(const Rational& a) { return a.to_double(); }
  static Rational abs(const Rational& a) { return a.abs(); }
  static bool is_zero(const Rational& a) { return a.is_zero(); }
  static std::string str(const Rational& a) { return a.str(); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool is_exact = false;
  static double from_int(long v) { return static_cast<double>(v); }
  static double to_double(double a) { return a; }
  static double abs(double a) { return std::fabs(a); }
  static bool is_zero(double a) { return a == 0.0; }
  static std::string str(double a) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", a);
    return buf;
  }
};

template <class S>
concept ScalarField = requires(S a, S b) {
  S();
  S(1);
  { a + b } -> std::convertible_to<S>;
  { a - b } -> std::convertible_to<S>;
  { a * b } -> std::convertible_to<S>;
  { a / b } -> std::convertible_to<S>;
  { -a } -> std::convertible_to<S>;
  { a == b } -> std::convertible_to<bool>;
  { scalar_traits<S>::is_exact } -> std::convertible_to<bool>;
};

}  // namespace indlim
