#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "indlim/finvec.hpp"
#include "indlim/rational.hpp"
#include "indlim/rng.hpp"
#include "indlim/sampling.hpp"

using namespace indlim;

using QVec = FinVec<Rational>;
using DVec = FinVec<double>;

namespace {

// Independent oracle: pad both coefficient lists to a common length and sum
// products with a plain loop, bypassing the FinVec arithmetic under test.
Rational inner_oracle(const QVec& x, const QVec& y) {
  const int n = std::max(x.degree(), y.degree());
  Rational acc(0);
  for (int k = 1; k <= n; ++k) acc += x.at(k) * y.at(k);
  return acc;
}

QVec qvec(std::initializer_list<long> entries) {
  std::vector<Rational> c;
  for (long e : entries) c.emplace_back(e);
  return QVec::make(std::move(c));
}

}  // namespace

TEST_CASE("rational scalar is canonical and exact") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-3, -6) == Rational(1, 2));
  CHECK(Rational::parse("7/21") == Rational(1, 3));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK((Rational(2, 3) * Rational(9, 4)) == Rational(3, 2));
  CHECK(Rational(5).str() == "5");
  CHECK(Rational(-1, 2).str() == "-1/2");
  CHECK_THROWS_AS(Rational(1, 0), DivisionByZero);
  CHECK_THROWS_AS(Rational(1) / Rational(0), DivisionByZero);
}

TEST_CASE("rational field axioms on random samples") {
  SplitMix64 rng(0x11feu);
  for (int t = 0; t < 400; ++t) {
    const Rational a = random_scalar<Rational>(rng);
    const Rational b = random_scalar<Rational>(rng);
    const Rational c = random_scalar<Rational>(rng);
    CHECK(a + (b + c) == (a + b) + c);
    CHECK(a * (b * c) == (a * b) * c);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + Rational(0) == a);
    CHECK(a * Rational(1) == a);
    CHECK(a - a == Rational(0));
    if (!b.is_zero()) CHECK((a / b) * b == a);
  }
}

TEST_CASE("make strips trailing zeros") {
  CHECK(qvec({1, 0, 0}) == qvec({1}));
  CHECK(qvec({1, 0, 0}).degree() == 1);
  CHECK(qvec({}).degree() == 0);
  CHECK(qvec({}).is_zero());
  CHECK(qvec({0, 2}).degree() == 2);
  CHECK(qvec({0, 2}).at(1) == Rational(0));
  CHECK(qvec({0, 2}).at(2) == Rational(2));
}

TEST_CASE("make is idempotent") {
  SplitMix64 rng(0x51eeu);
  for (int t = 0; t < 200; ++t) {
    const QVec v = random_finvec<Rational>(rng, 12);
    CHECK(QVec::make(v.coeffs()) == v);
  }
}

TEST_CASE("add and scale") {
  CHECK(add(qvec({1, 2}), qvec({0, 0, 3})) == qvec({1, 2, 3}));
  CHECK(add(qvec({1, 2}), qvec({-1, -2})).is_zero());
  CHECK(scale(Rational(0), qvec({5, 7})).is_zero());
  CHECK(scale(Rational(1, 2), qvec({4, 6})) == qvec({2, 3}));
}

TEST_CASE("degree of a sum") {
  SplitMix64 rng(0xdeu);
  for (int t = 0; t < 300; ++t) {
    const QVec x = random_finvec<Rational>(rng, 10);
    const QVec y = random_finvec<Rational>(rng, 10);
    const QVec s = add(x, y);
    CHECK(s.degree() <= std::max(x.degree(), y.degree()));
    if (x.degree() != y.degree()) CHECK(s.degree() == std::max(x.degree(), y.degree()));
  }
}

TEST_CASE("weak inner product against the summation oracle") {
  CHECK(weak_inner(qvec({1, 2, 3}), qvec({4, 5})) == Rational(14));
  CHECK(weak_inner(qvec({1, 2, 3}), qvec({4, 5})) == inner_oracle(qvec({1, 2, 3}), qvec({4, 5})));
  CHECK(weak_inner(qvec({3, -1, 7}), QVec::zero()) == Rational(0));
  CHECK(weak_inner(QVec::unit(3), QVec::unit(3)) == Rational(1));
  CHECK(weak_inner(QVec::unit(3), QVec::unit(4)) == Rational(0));

  SplitMix64 rng(0xabcdu);
  for (int t = 0; t < 300; ++t) {
    const QVec x = random_finvec<Rational>(rng, 14);
    const QVec y = random_finvec<Rational>(rng, 14);
    CHECK(weak_inner(x, y) == inner_oracle(x, y));
    CHECK(weak_inner(x, y) == weak_inner(y, x));
  }
}

TEST_CASE("bilinearity, exact") {
  SplitMix64 rng(0xb111u);
  for (int t = 0; t < 200; ++t) {
    const Rational a = random_scalar<Rational>(rng);
    const Rational b = random_scalar<Rational>(rng);
    const QVec x = random_finvec<Rational>(rng, 10);
    const QVec y = random_finvec<Rational>(rng, 10);
    const QVec z = random_finvec<Rational>(rng, 10);
    CHECK(weak_inner(add(scale(a, x), scale(b, y)), z) ==
          a * weak_inner(x, z) + b * weak_inner(y, z));
  }
}

TEST_CASE("inclusion validates the ambient index and changes nothing") {
  CHECK(include(qvec({1, 2}), 4) == qvec({1, 2}));
  CHECK(include(qvec({1, 2}), 2) == qvec({1, 2}));
  CHECK_THROWS_AS(include(qvec({1, 2, 3}), 2), AmbientTooSmall);

  // lambda_ij preserves the weak inner product
  SplitMix64 rng(0x1a3bu);
  for (int t = 0; t < 200; ++t) {
    const QVec x = random_finvec<Rational>(rng, 16);
    const QVec y = random_finvec<Rational>(rng, 16);
    const int d = 16 + static_cast<int>(rng.uniform_int(0, 8));
    CHECK(weak_inner(include(x, d), include(y, d)) == weak_inner(x, y));
  }
}

TEST_CASE("float mode compares within tolerances") {
  const DVec x = DVec::make({0.1, 0.2});
  const DVec y = DVec::make({0.3});
  CHECK(weak_inner(x, y) == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(max_abs_diff(x, DVec::make({0.1, 0.2 + 5e-10})) < 1e-9);
}

TEST_CASE("component access is 1-based and total") {
  const QVec v = qvec({4, 0, 6});
  CHECK(v.at(1) == Rational(4));
  CHECK(v.at(3) == Rational(6));
  CHECK(v.at(9) == Rational(0));
  CHECK_THROWS_AS(v.at(0), IndexOutOfRange);
  CHECK(to_string(v) == "(4, 0, 6)");
}
