#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "indlim/finvec.hpp"
#include "indlim/glinf.hpp"
#include "indlim/rational.hpp"
#include "indlim/sampling.hpp"

using namespace indlim;

using Q = Rational;
using QMat = GLInfElement<Q>;
using QVec = FinVec<Q>;

namespace {

QMat qmat(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<std::vector<Q>> m;
  for (const auto& row : rows) {
    std::vector<Q> r;
    for (long e : row) r.emplace_back(e);
    m.push_back(std::move(r));
  }
  return QMat::from_block(m);
}

// Schoolbook multiply on the extended m x m blocks, independent of compose().
QMat multiply_oracle(const QMat& g, const QMat& h) {
  const int m = std::max(g.size(), h.size());
  std::vector<std::vector<Q>> out(m, std::vector<Q>(m, Q(0)));
  for (int r = 1; r <= m; ++r)
    for (int c = 1; c <= m; ++c)
      for (int k = 1; k <= m; ++k) out[r - 1][c - 1] += g.entry(r, k) * h.entry(k, c);
  return QMat::from_block(out);
}

QVec qvec(std::initializer_list<long> entries) {
  std::vector<Q> c;
  for (long e : entries) c.emplace_back(e);
  return QVec::make(std::move(c));
}

}  // namespace

TEST_CASE("from_block canonicalizes and rejects singular blocks") {
  CHECK(qmat({{2}}).size() == 1);
  CHECK(qmat({{2}}).entry(1, 1) == Q(2));
  CHECK(qmat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}).size() == 0);
  CHECK(qmat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) == QMat::identity());
  CHECK_THROWS_AS(qmat({{1, 1}, {1, 1}}), Singular);
  // only a full identity cross trims: a unit diagonal with off-diagonal data stays
  CHECK(qmat({{1, 1}, {0, 1}}).size() == 2);
}

TEST_CASE("embedding is the identity on canonical elements") {
  const QMat rot = qmat({{0, -1}, {1, 0}});
  CHECK(rot.embed(3) == rot);
  CHECK(rot.embed(2) == rot);
  CHECK(QMat::identity().embed(5) == QMat::identity());
  CHECK_THROWS_AS(qmat({{2, 0, 0}, {0, 3, 0}, {0, 0, 4}}).embed(2), AmbientTooSmall);
}

TEST_CASE("composition matches the schoolbook oracle") {
  CHECK(compose(qmat({{2}}), qmat({{3}})) == qmat({{6}}));

  const QMat lhs = qmat({{0, -1}, {1, 0}}).embed(3);
  const QMat diag = qmat({{1, 0, 0}, {0, 1, 0}, {0, 0, 5}});
  CHECK(compose(lhs, diag) == qmat({{0, -1, 0}, {1, 0, 0}, {0, 0, 5}}));
  CHECK(compose(lhs, diag) == multiply_oracle(lhs, diag));

  SplitMix64 rng(0xc0deu);
  for (int t = 0; t < 200; ++t) {
    const QMat g = random_gl<Q>(rng, 8);
    const QMat h = random_gl<Q>(rng, 8);
    CHECK(compose(g, h) == multiply_oracle(g, h));
    CHECK(compose(g, QMat::identity()) == g);
    CHECK(compose(QMat::identity(), g) == g);
  }
}

TEST_CASE("exact inversion verified by multiplication") {
  CHECK(inverse(qmat({{2}})) == QMat::from_block({{Q(1, 2)}}));
  CHECK(inverse(QMat::identity()) == QMat::identity());

  SplitMix64 rng(0x1badu);
  for (int t = 0; t < 120; ++t) {
    const QMat g = random_gl<Q>(rng, 6);
    const QMat gi = inverse(g);
    CHECK(compose(g, gi) == QMat::identity());
    CHECK(compose(gi, g) == QMat::identity());
  }
}

TEST_CASE("group axioms, exact") {
  SplitMix64 rng(0xfaceu);
  for (int t = 0; t < 300; ++t) {
    const QMat g = random_gl<Q>(rng, 8);
    const QMat h = random_gl<Q>(rng, 8);
    const QMat k = random_gl<Q>(rng, 8);
    CHECK(compose(compose(g, h), k) == compose(g, compose(h, k)));
  }
}

TEST_CASE("action on finitely supported vectors") {
  CHECK(apply(QMat::identity(), qvec({3, 1, 4})) == qvec({3, 1, 4}));
  CHECK(apply(qmat({{2}}), qvec({1, 5})) == qvec({2, 5}));
  CHECK(apply(qmat({{0, -1}, {1, 0}}), qvec({1, 0, 7})) == qvec({0, 1, 7}));

  // direct multiply oracle on the padded prefix
  SplitMix64 rng(0xa11du);
  for (int t = 0; t < 150; ++t) {
    const QMat g = random_gl<Q>(rng, 6);
    const QVec v = random_finvec<Q>(rng, 9);
    const QVec gv = apply(g, v);
    const int m = std::max(g.size(), v.degree());
    for (int r = 1; r <= m; ++r) {
      Q acc(0);
      for (int c = 1; c <= m; ++c) acc += g.entry(r, c) * v.at(c);
      CHECK(gv.at(r) == acc);
    }
  }
}

TEST_CASE("embedding commutes with composition and the action") {
  SplitMix64 rng(0xeeffu);
  for (int t = 0; t < 150; ++t) {
    const QMat g = random_gl<Q>(rng, 6);
    const QMat h = random_gl<Q>(rng, 6);
    const int base = std::max({1, g.size(), h.size()});
    const int m = base + static_cast<int>(rng.uniform_int(0, 3));
    const int k = m + static_cast<int>(rng.uniform_int(0, 3));
    CHECK(g.embed(m).embed(k) == g.embed(k));
    CHECK(compose(g.embed(m), h.embed(m)) == compose(g, h).embed(m));

    const QVec v = random_finvec<Q>(rng, 6);
    const int d = std::max({g.size(), v.degree(), 1}) + static_cast<int>(rng.uniform_int(0, 3));
    CHECK(apply(g, include(v, d)) == apply(g.embed(d), v));
  }
}

TEST_CASE("canonicalization soundness") {
  SplitMix64 rng(0x50fau);
  for (int t = 0; t < 150; ++t) {
    const QMat g = random_gl<Q>(rng, 7);
    CHECK(QMat::from_block(g.block_rows()) == g);
    CHECK(QMat::from_block(g.block_rows(g.size() + 3)) == g);
  }
}

TEST_CASE("float mode flags numerically singular blocks") {
  using DMat = GLInfElement<double>;
  CHECK_THROWS_AS(DMat::from_block({{1.0, 1.0}, {1.0, 1.0 + 1e-15}}), Singular);
  const DMat fine = DMat::from_block({{1.0, 1.0}, {1.0, 2.0}});
  CHECK(fine.size() == 2);
  const DMat gi = inverse(fine);
  CHECK(max_abs_diff(compose(fine, gi), DMat::identity()) < 1e-12);
}

TEST_CASE("matrix entries extend with the identity pattern") {
  const QMat g = qmat({{2, 1}, {1, 1}});
  CHECK(g.entry(3, 3) == Q(1));
  CHECK(g.entry(2, 5) == Q(0));
  CHECK_THROWS_AS(g.entry(0, 1), IndexOutOfRange);
}
