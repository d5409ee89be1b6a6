#pragma once

#include <string>
#include <utility>

#include "indlim/errors.hpp"
#include "indlim/finvec.hpp"
#include "indlim/scalar.hpp"

namespace indlim {

enum class ChartSign { plus, minus };

inline ChartSign opposite(ChartSign s) {
  return s == ChartSign::plus ? ChartSign::minus : ChartSign::plus;
}

inline const char* to_cstring(ChartSign s) { return s == ChartSign::plus ? "+" : "-"; }

template <ScalarField S>
S sign_scalar(ChartSign s) {
  return s == ChartSign::plus ? S(1) : S(-1);
}

/// A point of the unit sphere: <x,x> = 1, exactly for exact scalars and
/// within tol for floats. Construction goes through the validating factory.
template <ScalarField S>
class SpherePoint {
 public:
  static SpherePoint on_sphere(FinVec<S> coords, double tol = 1e-9) {
    const S q = weak_inner(coords, coords);
    if constexpr (scalar_traits<S>::is_exact) {
      if (!(q == S(1))) throw OutsideChartDomain("point is not on the unit sphere");
    } else {
      if (scalar_traits<S>::to_double(scalar_traits<S>::abs(q - S(1))) > tol)
        throw OutsideChartDomain("point is not on the unit sphere (|<x,x>-1| > tol)");
    }
    return SpherePoint(std::move(coords));
  }

  const FinVec<S>& coords() const { return coords_; }
  int degree() const { return coords_.degree(); }

  friend bool operator==(const SpherePoint& a, const SpherePoint& b) {
    return a.coords_ == b.coords_;
  }
  friend bool operator!=(const SpherePoint& a, const SpherePoint& b) { return !(a == b); }

 private:
  explicit SpherePoint(FinVec<S> c) : coords_(std::move(c)) {}
  FinVec<S> coords_;
};

/// One stereographic chart of the sphere: a pole a and a sign choosing
/// between the two charts of the atlas,
///
///   sign +:  U = S \ {a},   u(x) = (x - <x,a> a) / (1 - <x,a>)
///   sign -:  U = S \ {-a},  u(x) = (x - <x,a> a) / (1 + <x,a>)
///
/// Both map onto the hyperplane {a}^perp.
template <ScalarField S>
struct StereoChart {
  SpherePoint<S> pole;
  ChartSign sign;
};

namespace detail {

template <ScalarField S>
S chart_denominator(const StereoChart<S>& chart, const S& pole_component) {
  return S(1) - sign_scalar<S>(chart.sign) * pole_component;
}

template <ScalarField S>
void check_in_chart(const StereoChart<S>& chart, const S& denom, double domain_guard) {
  if constexpr (scalar_traits<S>::is_exact) {
    if (scalar_traits<S>::is_zero(denom))
      throw OutsideChartDomain(std::string("point excluded from the u") +
                               to_cstring(chart.sign) + " chart");
  } else {
    if (scalar_traits<S>::to_double(scalar_traits<S>::abs(denom)) <= domain_guard)
      throw OutsideChartDomain(std::string("point within domain guard of the u") +
                               to_cstring(chart.sign) + " chart pole");
  }
}

}  // namespace detail

/// Chart map u(x). The result lies in {a}^perp.
template <ScalarField S>
FinVec<S> stereo_project(const StereoChart<S>& chart, const SpherePoint<S>& x,
                         double domain_guard = 1e-9) {
  const FinVec<S>& a = chart.pole.coords();
  const S t = weak_inner(x.coords(), a);
  const S denom = detail::chart_denominator(chart, t);
  detail::check_in_chart(chart, denom, domain_guard);
  return scale(S(1) / denom, sub(x.coords(), scale(t, a)));
}

/// Inverse chart map on {a}^perp:
///
///   x = (2y + s(<y,y> - 1) a) / (<y,y> + 1),   s = sign
///
/// Throws NotInPerp unless <y,a> = 0 (within tol for floats). The result is
/// exactly unit-norm for exact scalars.
template <ScalarField S>
SpherePoint<S> stereo_unproject(const StereoChart<S>& chart, const FinVec<S>& y,
                                double tol = 1e-9) {
  const FinVec<S>& a = chart.pole.coords();
  const S ya = weak_inner(y, a);
  if constexpr (scalar_traits<S>::is_exact) {
    if (!scalar_traits<S>::is_zero(ya)) throw NotInPerp("chart argument has a pole component");
  } else {
    if (scalar_traits<S>::to_double(scalar_traits<S>::abs(ya)) > tol)
      throw NotInPerp("chart argument has a pole component beyond tol");
  }
  const S s = sign_scalar<S>(chart.sign);
  const S q = weak_inner(y, y);
  const FinVec<S> numerator = add(scale(S(2), y), scale(s * (q - S(1)), a));
  return SpherePoint<S>::on_sphere(scale(S(1) / (q + S(1)), numerator), tol);
}

/// Differential of the chart map at x in ambient direction v:
///
///   du(x) v = (v - <v,a> a) / d  +  s (x - <x,a> a) <v,a> / d^2,   d = 1 - s<x,a>
template <ScalarField S>
FinVec<S> d_stereo_project(const StereoChart<S>& chart, const SpherePoint<S>& x,
                           const FinVec<S>& v, double domain_guard = 1e-9) {
  const FinVec<S>& a = chart.pole.coords();
  const S s = sign_scalar<S>(chart.sign);
  const S t = weak_inner(x.coords(), a);
  const S va = weak_inner(v, a);
  const S denom = detail::chart_denominator(chart, t);
  detail::check_in_chart(chart, denom, domain_guard);
  const FinVec<S> first = scale(S(1) / denom, sub(v, scale(va, a)));
  const FinVec<S> second =
      scale(s * va / (denom * denom), sub(x.coords(), scale(t, a)));
  return add(first, second);
}

/// Differential of the inverse chart map at y in direction w:
///
///   d(u^-1)(y) w = (2w + 2s<y,w> a) / (q+1) - (2y + s(q-1) a) 2<y,w> / (q+1)^2,  q = <y,y>
template <ScalarField S>
FinVec<S> d_stereo_unproject(const StereoChart<S>& chart, const FinVec<S>& y, const FinVec<S>& w,
                             double tol = 1e-9) {
  const FinVec<S>& a = chart.pole.coords();
  const S ya = weak_inner(y, a);
  if constexpr (scalar_traits<S>::is_exact) {
    if (!scalar_traits<S>::is_zero(ya)) throw NotInPerp("chart argument has a pole component");
  } else {
    if (scalar_traits<S>::to_double(scalar_traits<S>::abs(ya)) > tol)
      throw NotInPerp("chart argument has a pole component beyond tol");
  }
  const S s = sign_scalar<S>(chart.sign);
  const S q = weak_inner(y, y);
  const S yw = weak_inner(y, w);
  const S qp1 = q + S(1);
  const FinVec<S> first = scale(S(1) / qp1, add(scale(S(2), w), scale(S(2) * s * yw, a)));
  const FinVec<S> numerator = add(scale(S(2), y), scale(s * (q - S(1)), a));
  const FinVec<S> second = scale(S(2) * yw / (qp1 * qp1), numerator);
  return sub(first, second);
}

/// Chart transition u_to . u_from^-1, evaluated by composing the forward and
/// inverse formulas. For the antipodal pair (same pole, opposite signs) this
/// equals y / <y,y>.
template <ScalarField S>
FinVec<S> stereo_transition(const StereoChart<S>& from, const StereoChart<S>& to,
                            const FinVec<S>& y, double domain_guard = 1e-9) {
  const SpherePoint<S> x = stereo_unproject(from, y, domain_guard);
  return stereo_project(to, x, domain_guard);
}

}  // namespace indlim
