#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "indlim/rational.hpp"
#include "indlim/sampling.hpp"
#include "indlim/stereo.hpp"
#include "indlim/tower.hpp"

using namespace indlim;

using Q = Rational;
using QVec = FinVec<Q>;

namespace {

QVec qvec(std::initializer_list<long> entries) {
  std::vector<Q> c;
  for (long e : entries) c.emplace_back(e);
  return QVec::make(std::move(c));
}

StereoChart<Q> chart_e1(ChartSign sign) {
  return {SpherePoint<Q>::on_sphere(QVec::unit(1)), sign};
}

}  // namespace

TEST_CASE("sphere points validate their norm") {
  CHECK(SpherePoint<Q>::on_sphere(QVec::unit(2)).degree() == 2);
  CHECK_THROWS_AS(SpherePoint<Q>::on_sphere(qvec({1, 1})), OutsideChartDomain);
  // 3-4-5 point is exactly on the circle
  const QVec p = QVec::make({Q(3, 5), Q(4, 5)});
  CHECK(SpherePoint<Q>::on_sphere(p).coords() == p);
}

TEST_CASE("stereographic projection at the pole e1") {
  const auto plus = chart_e1(ChartSign::plus);
  CHECK(stereo_project(plus, SpherePoint<Q>::on_sphere(QVec::unit(2))) == QVec::unit(2));
  CHECK(stereo_project(plus, SpherePoint<Q>::on_sphere(scale(Q(-1), QVec::unit(1)))).is_zero());
  CHECK_THROWS_AS(stereo_project(plus, SpherePoint<Q>::on_sphere(QVec::unit(1))),
                  OutsideChartDomain);

  const auto minus = chart_e1(ChartSign::minus);
  CHECK(stereo_project(minus, SpherePoint<Q>::on_sphere(QVec::unit(1))).is_zero());
  CHECK_THROWS_AS(stereo_project(minus, SpherePoint<Q>::on_sphere(scale(Q(-1), QVec::unit(1)))),
                  OutsideChartDomain);
}

TEST_CASE("inverse chart map") {
  const auto plus = chart_e1(ChartSign::plus);
  CHECK(stereo_unproject(plus, QVec::zero()).coords() == scale(Q(-1), QVec::unit(1)));
  // forward formula confirms the closed-form inverse
  const auto x = stereo_unproject(plus, QVec::unit(2));
  CHECK(x.coords() == QVec::unit(2));
  CHECK(stereo_project(plus, x) == QVec::unit(2));
  CHECK_THROWS_AS(stereo_unproject(plus, QVec::unit(1)), NotInPerp);

  const auto minus = chart_e1(ChartSign::minus);
  CHECK(stereo_unproject(minus, QVec::zero()).coords() == QVec::unit(1));
}

TEST_CASE("chart round trips are exact on random rational points") {
  SplitMix64 rng(0xca11u);
  for (int t = 0; t < 300; ++t) {
    const int level = static_cast<int>(rng.uniform_int(1, 10));
    const auto sign = rng.coin() ? ChartSign::plus : ChartSign::minus;
    const auto chart = chart_e1(sign);
    const auto y = detail::axis_insert(random_finvec<Q>(rng, level), 1);
    const auto x = stereo_unproject(chart, y);
    CHECK(weak_inner(x.coords(), x.coords()) == Q(1));
    CHECK(stereo_project(chart, x) == y);
  }
}

TEST_CASE("codomain is the pole's orthogonal complement") {
  SplitMix64 rng(0x0f0fu);
  for (int t = 0; t < 200; ++t) {
    const int level = static_cast<int>(rng.uniform_int(1, 8));
    const auto sign = rng.coin() ? ChartSign::plus : ChartSign::minus;
    const auto chart = chart_e1(sign);
    const auto x = random_unit_point<Q>(rng, level);
    try {
      const auto y = stereo_project(chart, x);
      CHECK(weak_inner(y, chart.pole.coords()) == Q(0));
    } catch (const OutsideChartDomain&) {
      // excluded point; nothing to check
    }
  }
}

TEST_CASE("charts work at a general rational pole") {
  const QVec pole = QVec::make({Q(3, 5), Q(4, 5)});
  const StereoChart<Q> chart{SpherePoint<Q>::on_sphere(pole), ChartSign::plus};
  // y orthogonal to the pole
  const QVec y = QVec::make({Q(-4, 5), Q(3, 5)});
  REQUIRE(weak_inner(y, pole) == Q(0));
  const auto x = stereo_unproject(chart, y);
  CHECK(weak_inner(x.coords(), x.coords()) == Q(1));
  CHECK(stereo_project(chart, x) == y);
  CHECK_THROWS_AS(stereo_unproject(chart, QVec::unit(1)), NotInPerp);
}

TEST_CASE("antipodal transition is the inversion y / <y,y>") {
  const auto plus = chart_e1(ChartSign::plus);
  const auto minus = chart_e1(ChartSign::minus);
  CHECK(stereo_transition(plus, minus, scale(Q(2), QVec::unit(2))) ==
        scale(Q(1, 2), QVec::unit(2)));
  // the unit sphere of the hyperplane is fixed
  const QVec unit_y = QVec::make({Q(0), Q(3, 5), Q(4, 5)});
  CHECK(stereo_transition(plus, minus, unit_y) == unit_y);
  CHECK_THROWS_AS(stereo_transition(plus, minus, QVec::zero()), OutsideChartDomain);

  SplitMix64 rng(0x7001u);
  for (int t = 0; t < 200; ++t) {
    const auto y = detail::axis_insert(random_nonzero_finvec<Q>(rng, 8), 1);
    CHECK(stereo_transition(plus, minus, y) == scale(Q(1) / weak_inner(y, y), y));
  }
}

TEST_CASE("transition cocycle on triple overlaps of distinct poles") {
  SplitMix64 rng(0x3333u);
  const StereoChart<Q> a{SpherePoint<Q>::on_sphere(QVec::unit(1)), ChartSign::plus};
  const StereoChart<Q> b{SpherePoint<Q>::on_sphere(QVec::unit(2)), ChartSign::plus};
  const StereoChart<Q> c{SpherePoint<Q>::on_sphere(QVec::unit(3)), ChartSign::plus};
  int checked = 0;
  for (int t = 0; t < 300 && checked < 150; ++t) {
    const auto x = random_unit_point<Q>(rng, 5);
    try {
      const auto ya = stereo_project(a, x);
      const auto via_b = stereo_transition(b, c, stereo_transition(a, b, ya));
      const auto direct = stereo_transition(a, c, ya);
      CHECK(via_b == direct);
      ++checked;
    } catch (const OutsideChartDomain&) {
      // sampled into an excluded point; skip
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("sphere tower satisfies the chart compatibility identity") {
  const auto tower = sphere_tower<Q>(8);
  SplitMix64 rng(0xe41u);
  for (int t = 0; t < 100; ++t) {
    const int i = static_cast<int>(rng.uniform_int(1, 7));
    const int j = static_cast<int>(rng.uniform_int(i + 1, 8));
    const ChartKey<Q> key{1, rng.coin() ? ChartSign::plus : ChartSign::minus};
    const auto ybar = random_finvec<Q>(rng, tower->dim(i));
    const auto left = tower->chart_inverse(key, j, tower->lambda(i, j, ybar));
    const auto right = tower->bond(i, j, tower->chart_inverse(key, i, ybar));
    CHECK(left == right);
  }
}

TEST_CASE("tower bonding maps act as canonical identities") {
  const auto tower = sphere_tower<Q>(6);
  SplitMix64 rng(0xb0b0u);
  for (int t = 0; t < 100; ++t) {
    const int i = static_cast<int>(rng.uniform_int(1, 6));
    const auto p = tower->random_point(i, rng, 5);
    CHECK(tower->bond(i, i, p) == p);
    CHECK(tower->contains(i, p));
  }
  CHECK_THROWS_AS(tower->bond(3, 2, qvec({1})), LevelDecrease);
  CHECK_THROWS_AS(tower->bond(2, 9, qvec({1})), IndexOutOfRange);
}

TEST_CASE("chart inverses land exactly on the sphere") {
  const auto tower = sphere_tower<Q>(8);
  SplitMix64 rng(0x5151u);
  for (int t = 0; t < 100; ++t) {
    const int i = static_cast<int>(rng.uniform_int(1, 8));
    const ChartKey<Q> key{1, rng.coin() ? ChartSign::plus : ChartSign::minus};
    const auto point = tower->chart_inverse(key, i, random_finvec<Q>(rng, i));
    CHECK(weak_inner(point, point) == Q(1));
    CHECK(point.degree() <= i + 1);
  }
}

TEST_CASE("transition naturality under inclusion") {
  const auto tower = sphere_tower<Q>(9);
  SplitMix64 rng(0x9a2u);
  int checked = 0;
  for (int t = 0; t < 300 && checked < 100; ++t) {
    const int i = static_cast<int>(rng.uniform_int(2, 8));
    const int j = static_cast<int>(rng.uniform_int(i + 1, 9));
    const ChartKey<Q> from{1, rng.coin() ? ChartSign::plus : ChartSign::minus};
    const ChartKey<Q> to{static_cast<int>(rng.uniform_int(1, 2)),
                         rng.coin() ? ChartSign::plus : ChartSign::minus};
    if (from == to) continue;
    const auto y = random_nonzero_finvec<Q>(rng, tower->dim(i));
    try {
      const auto tau_i = tower->chart_forward(to, i, tower->chart_inverse(from, i, y));
      const auto tau_j =
          tower->chart_forward(to, j, tower->chart_inverse(from, j, tower->lambda(i, j, y)));
      CHECK(tower->lambda(i, j, tau_i) == tau_j);
      ++checked;
    } catch (const OutsideChartDomain&) {
    }
  }
  CHECK(checked >= 50);
}

TEST_CASE("pole selection keeps the base point inside the chart") {
  const auto tower = sphere_tower<Q>(4);
  CHECK(tower->select_chart(QVec::unit(1)).sign == ChartSign::minus);
  CHECK(tower->select_chart(QVec::unit(2)).sign == ChartSign::plus);
  CHECK(tower->select_chart(scale(Q(-1), QVec::unit(1))).sign == ChartSign::plus);
}

TEST_CASE("first level follows the coordinate support") {
  const auto tower = sphere_tower<Q>(6);
  CHECK(tower->first_level(QVec::unit(1)) == 1);
  CHECK(tower->first_level(QVec::unit(2)) == 1);
  CHECK(tower->first_level(QVec::unit(4)) == 3);
}

TEST_CASE("random sphere points are deterministic and normalized") {
  const auto a = random_sphere_point(4, 99u);
  const auto b = random_sphere_point(4, 99u);
  CHECK(a.coords() == b.coords());
  CHECK(a.coords() != random_sphere_point(4, 100u).coords());

  const auto circle = random_sphere_point(1, 5u);
  CHECK(circle.degree() <= 2);

  for (int t = 0; t < 1000; ++t) {
    const auto p = random_sphere_point(8, static_cast<std::uint64_t>(t));
    CHECK(p.degree() <= 9);
    CHECK(std::fabs(weak_inner(p.coords(), p.coords()) - 1.0) <= 1e-12);
  }
}

TEST_CASE("float mode guards the chart domain near the pole") {
  const StereoChart<double> chart{SpherePoint<double>::on_sphere(FinVec<double>::unit(1)),
                                  ChartSign::plus};
  // slightly off the pole but inside the guard band
  std::vector<double> c = {1.0 - 1e-12, 0.0};
  c[1] = std::sqrt(1.0 - c[0] * c[0]);
  const auto near_pole = SpherePoint<double>::on_sphere(FinVec<double>::make(std::move(c)));
  CHECK_THROWS_AS(stereo_project(chart, near_pole, 1e-9), OutsideChartDomain);
}

TEST_CASE("tower registry") {
  CHECK(make_tower<Q>("sphere", 4)->name() == "sphere");
  CHECK(make_tower<Q>("euclidean", 4)->name() == "euclidean");
  CHECK(make_tower<Q>("sphere-faulty", 4)->name() == "sphere-faulty");
  CHECK_THROWS_AS(make_tower<Q>("torus", 4), UnknownTower);
}

TEST_CASE("the faulty tower really corrupts its padding map") {
  const auto good = make_tower<Q>("sphere", 6);
  const auto bad = make_tower<Q>("sphere-faulty", 6);
  const QVec y = qvec({1, 2, 3});
  CHECK(good->lambda(3, 5, y) == y);
  CHECK(bad->lambda(3, 5, y) == qvec({1, 2}));
}

TEST_CASE("euclidean tower is the trivial instance of the contract") {
  const auto tower = make_tower<Q>("euclidean", 5);
  const ChartKey<Q> key = tower->select_chart(qvec({1, 2}));
  CHECK(key.pole_axis == 0);
  CHECK(tower->chart_forward(key, 3, qvec({1, 2})) == qvec({1, 2}));
  CHECK(tower->chart_inverse(key, 3, qvec({1, 2})) == qvec({1, 2}));
  CHECK(tower->bond(2, 4, qvec({1, 2})) == qvec({1, 2}));
  CHECK_THROWS_AS(tower->chart_forward(key, 1, qvec({1, 2})), AmbientTooSmall);
}
