#pragma once

#include <vector>

#include "indlim/finvec.hpp"
#include "indlim/glinf.hpp"
#include "indlim/rng.hpp"
#include "indlim/scalar.hpp"
#include "indlim/stereo.hpp"
#include "indlim/tangent.hpp"
#include "indlim/tower.hpp"

namespace indlim {

/// Small random scalar num/den with |num| <= span, 1 <= den <= span.
/// Rational-valued in both scalar modes so exact and float runs sample the
/// same kind of data.
template <ScalarField S>
S random_scalar(SplitMix64& rng, long span = 9) {
  const long num = rng.uniform_int(-span, span);
  const long den = rng.uniform_int(1, span);
  return scalar_traits<S>::from_int(num) / scalar_traits<S>::from_int(den);
}

template <ScalarField S>
FinVec<S> random_finvec(SplitMix64& rng, int max_degree, long span = 9) {
  const int len = static_cast<int>(rng.uniform_int(0, max_degree));
  std::vector<S> c;
  c.reserve(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) c.push_back(random_scalar<S>(rng, span));
  return FinVec<S>::make(std::move(c));
}

template <ScalarField S>
FinVec<S> random_nonzero_finvec(SplitMix64& rng, int max_degree, long span = 9) {
  for (;;) {
    FinVec<S> v = random_finvec<S>(rng, max_degree, span);
    if (!v.is_zero()) return v;
  }
}

/// Random invertible block of size <= max_block (rejection on singular draws).
template <ScalarField S>
GLInfElement<S> random_gl(SplitMix64& rng, int max_block, long span = 5) {
  const int n = static_cast<int>(rng.uniform_int(1, max_block));
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<std::vector<S>> rows(static_cast<std::size_t>(n),
                                     std::vector<S>(static_cast<std::size_t>(n)));
    for (auto& row : rows)
      for (auto& v : row) v = random_scalar<S>(rng, span);
    try {
      return GLInfElement<S>::from_block(rows);
    } catch (const Singular&) {
      // try again with fresh entries
    }
  }
  // practically unreachable with random entries
  return GLInfElement<S>::identity();
}

/// Random point of S^level through the inverse chart map: exact unit norm
/// over exact scalars, support within the first level+1 coordinates.
template <ScalarField S>
SpherePoint<S> random_unit_point(SplitMix64& rng, int level, long span = 5) {
  const ChartSign sign = rng.coin() ? ChartSign::plus : ChartSign::minus;
  const StereoChart<S> chart{SpherePoint<S>::on_sphere(FinVec<S>::unit(1)), sign};
  const FinVec<S> ybar = random_finvec<S>(rng, level, span);
  return stereo_unproject(chart, detail::axis_insert(ybar, 1));
}

/// Like random_unit_point, but rejects points too close to the excluded
/// point of any of the given chart keys (exactly-excluded over exact
/// scalars, within the guard for floats).
template <ScalarField S>
SpherePoint<S> random_unit_point_avoiding(SplitMix64& rng, int level,
                                          const std::vector<ChartKey<S>>& keys,
                                          double guard = 1e-6, long span = 5) {
  for (;;) {
    SpherePoint<S> x = random_unit_point<S>(rng, level, span);
    bool ok = true;
    for (const auto& key : keys) {
      const S t = weak_inner(x.coords(), key.pole());
      const S denom = S(1) - sign_scalar<S>(key.sign) * t;
      if constexpr (scalar_traits<S>::is_exact) {
        if (scalar_traits<S>::is_zero(denom)) ok = false;
      } else {
        if (scalar_traits<S>::to_double(scalar_traits<S>::abs(denom)) <= guard) ok = false;
      }
      if (!ok) break;
    }
    if (ok) return x;
  }
}

/// Random chart-coordinate tangent rep at the given level.
template <ScalarField S>
TangentRep<S> random_tangent_rep(const ManifoldTower<S>& tower, const ChartKey<S>& chart,
                                 int level, SplitMix64& rng, long span = 5) {
  const int d = tower.dim(level);
  return th(tower, chart, level, random_finvec<S>(rng, d, span), random_finvec<S>(rng, d, span));
}

/// Random intrinsic sphere tangent at a random point of S^level.
template <ScalarField S>
IntrinsicTangent<S> random_intrinsic_tangent(const ManifoldTower<S>& tower, int level,
                                             SplitMix64& rng, long span = 5) {
  const SpherePoint<S> x = random_unit_point<S>(rng, level, span);
  const ChartKey<S> chart = tower.select_chart(x.coords());
  const FinVec<S> vbar = random_finvec<S>(rng, tower.dim(level), span);
  const FinVec<S> ybar = tower.chart_forward(chart, level, x.coords());
  FinVec<S> v = tower.d_chart_inverse(chart, level, ybar, vbar);
  return IntrinsicTangent<S>::make(x, std::move(v));
}

}  // namespace indlim
