#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "indlim/errors.hpp"
#include "indlim/finvec.hpp"
#include "indlim/glinf.hpp"
#include "indlim/scalar.hpp"
#include "indlim/stereo.hpp"
#include "indlim/tower.hpp"

namespace indlim {

/// Coordinate representative of a path germ: the class of the affine curve
/// t -> h_i(base + t vel) in the chart family identified by `chart`, living
/// at tower level `level`. Two reps at levels i <= j of the same chart
/// family represent the same germ iff their canonical (base, vel) pairs
/// agree — that is the coordinate shadow of the tangent bonding map, which
/// zero-pads both slots.
template <ScalarField S>
struct TangentRep {
  const ManifoldTower<S>* tower = nullptr;
  ChartKey<S> chart;
  int level = 0;
  FinVec<S> base;
  FinVec<S> vel;

  friend bool operator==(const TangentRep& a, const TangentRep& b) {
    return a.tower == b.tower && a.chart == b.chart && a.level == b.level &&
           a.base == b.base && a.vel == b.vel;
  }
  friend bool operator!=(const TangentRep& a, const TangentRep& b) { return !(a == b); }

  /// Equality of the underlying germs, ignoring the representation level.
  bool same_germ(const TangentRep& o) const {
    return tower == o.tower && chart == o.chart && base == o.base && vel == o.vel;
  }
};

/// Chart lift Th_i: builds the rep of the affine curve through h_i(ybar)
/// with chart velocity vbar.
template <ScalarField S>
TangentRep<S> th(const ManifoldTower<S>& tower, const ChartKey<S>& chart, int level,
                 FinVec<S> ybar, FinVec<S> vbar) {
  const int d = tower.dim(level);
  if (ybar.degree() > d || vbar.degree() > d)
    throw AmbientTooSmall("th: chart data of degree " +
                          std::to_string(std::max(ybar.degree(), vbar.degree())) +
                          " at level " + std::to_string(level) + " (d=" + std::to_string(d) + ")");
  return TangentRep<S>{&tower, chart, level, std::move(ybar), std::move(vbar)};
}

/// Tangent bonding map in coordinates: raises the level, payload unchanged
/// (the bonding maps zero-pad, and canonical forms absorb zero padding).
template <ScalarField S>
TangentRep<S> phi_T(const TangentRep<S>& rep, int j) {
  if (j < rep.level)
    throw LevelDecrease("phi_T: level " + std::to_string(rep.level) + " down to " +
                        std::to_string(j));
  if (j > rep.tower->max_level())
    throw IndexOutOfRange("phi_T: level " + std::to_string(j) + " beyond tower truncation");
  TangentRep<S> out = rep;
  out.level = j;
  return out;
}

/// The evaluable realization of the tangent bonding map: pushes the curve
/// through the tower's own maps (chart at level i, bonding map, chart at
/// level j) instead of relying on canonical forms. For a compatible tower
/// this agrees with phi_T exactly; for a corrupted tower it does not, which
/// is what the diagram checks detect.
template <ScalarField S>
TangentRep<S> pushforward(const TangentRep<S>& rep, int j) {
  if (j < rep.level) throw LevelDecrease("pushforward: target level below source");
  const ManifoldTower<S>& tw = *rep.tower;
  const int i = rep.level;
  const FinVec<S> foot_i = tw.chart_inverse(rep.chart, i, rep.base);
  const FinVec<S> v_amb = tw.d_chart_inverse(rep.chart, i, rep.base, rep.vel);
  const FinVec<S> foot_j = tw.bond(i, j, foot_i);
  const FinVec<S> v_amb_j = tw.d_bond(i, j, foot_i, v_amb);
  return TangentRep<S>{&tw, rep.chart, j, tw.chart_forward(rep.chart, j, foot_j),
                       tw.d_chart_forward(rep.chart, j, foot_j, v_amb_j)};
}

template <ScalarField S>
struct TrivializedTangent {
  FinVec<S> foot;
  FinVec<S> fiber;
};

/// The trivialization Psi_i over one chart domain: rep -> (foot point,
/// chart velocity). Fiberwise linear by construction on reps; the honest
/// work is the chart evaluation producing the foot.
template <ScalarField S>
struct Trivialization {
  const ManifoldTower<S>* tower = nullptr;
  ChartKey<S> chart;
  int level = 0;

  TrivializedTangent<S> apply(const TangentRep<S>& rep) const {
    if (rep.tower != tower || !(rep.chart == chart))
      throw OutsideChartDomain("trivialization applied outside its chart family");
    if (rep.level != level)
      throw IndexOutOfRange("trivialization level " + std::to_string(level) +
                            " applied to rep at level " + std::to_string(rep.level));
    return TrivializedTangent<S>{tower->chart_inverse(chart, level, rep.base), rep.vel};
  }

  TangentRep<S> invert(const FinVec<S>& foot, const FinVec<S>& fiber) const {
    return th(*tower, chart, level, tower->chart_forward(chart, level, foot), fiber);
  }
};

template <ScalarField S>
TrivializedTangent<S> trivialize(const TangentRep<S>& rep) {
  return Trivialization<S>{rep.tower, rep.chart, rep.level}.apply(rep);
}

/// The bundle projection pi: the foot point of the germ.
template <ScalarField S>
FinVec<S> projection(const TangentRep<S>& rep) {
  return rep.tower->chart_inverse(rep.chart, rep.level, rep.base);
}

/// Fiber transition T between two chart families at a foot point, assembled
/// on the active block at the given level (default: the first level
/// containing the foot): column k is the chart-B velocity of the basis
/// fiber e_k pushed through Psi_B . Psi_A^-1. For every rep at that level,
/// fiber_B = apply(T, fiber_A).
template <ScalarField S>
GLInfElement<S> transition_fiber(const ManifoldTower<S>& tower, const ChartKey<S>& from,
                                 const ChartKey<S>& to, const FinVec<S>& foot, int level = -1) {
  if (level < 0) level = tower.first_level(foot);
  const int d = tower.dim(level);
  const FinVec<S> ybar = tower.chart_forward(from, level, foot);
  tower.chart_forward(to, level, foot);  // both chart domains must contain the foot
  std::vector<std::vector<S>> cols;
  cols.reserve(static_cast<std::size_t>(d));
  for (int k = 1; k <= d; ++k) {
    const FinVec<S> v_amb = tower.d_chart_inverse(from, level, ybar, FinVec<S>::unit(k));
    cols.push_back(tower.d_chart_forward(to, level, foot, v_amb).coeffs());
  }
  std::vector<std::vector<S>> rows(static_cast<std::size_t>(d),
                                   std::vector<S>(static_cast<std::size_t>(d), S(0)));
  for (int k = 0; k < d; ++k)
    for (int r = 0; r < static_cast<int>(cols[k].size()); ++r) rows[r][k] = cols[k][r];
  try {
    return GLInfElement<S>::from_block(rows);
  } catch (const Singular& e) {
    throw NumericallySingular(std::string("transition_fiber: ") + e.what());
  }
}

template <ScalarField S>
struct DiagramReport {
  int samples = 0;
  double max_residual = 0.0;
  bool exact = scalar_traits<S>::is_exact;
  std::optional<std::string> first_counterexample;
  bool ok(double tol) const { return exact ? max_residual == 0.0 : max_residual <= tol; }
};

/// Commutativity of (bond_ij x lambda_ij) . Psi_i against Psi_j . Phi_ij,
/// with both composite paths evaluated through independent machinery:
/// the left path pads the level-i trivialization with the tower's bond and
/// lambda maps, the right path pushes the germ forward and trivializes at
/// level j. Exact zero residual for a compatible tower over exact scalars.
template <ScalarField S>
DiagramReport<S> diagram_check(const ManifoldTower<S>& tower, int i, int j,
                               const std::vector<TangentRep<S>>& samples) {
  if (j < i) throw LevelDecrease("diagram_check: j < i");
  DiagramReport<S> report;
  for (const auto& rep : samples) {
    const TrivializedTangent<S> at_i = trivialize(rep);
    const FinVec<S> left_foot = tower.bond(i, j, at_i.foot);
    const FinVec<S> left_fiber = tower.lambda(i, j, at_i.fiber);
    const TrivializedTangent<S> right = trivialize(pushforward(rep, j));
    const double residual =
        std::max(max_abs_diff(left_foot, right.foot), max_abs_diff(left_fiber, right.fiber));
    ++report.samples;
    if (residual > report.max_residual) report.max_residual = residual;
    const bool equal_here = (left_foot == right.foot) && (left_fiber == right.fiber);
    if (!equal_here && !report.first_counterexample) {
      report.first_counterexample = "rep(base=" + to_string(rep.base) +
                                    ", vel=" + to_string(rep.vel) + ", i=" + std::to_string(i) +
                                    ", j=" + std::to_string(j) + ")";
    }
  }
  return report;
}

/// A tangent vector in the ambient picture: a foot point on the sphere and
/// a velocity orthogonal to it.
template <ScalarField S>
struct IntrinsicTangent {
  SpherePoint<S> point;
  FinVec<S> vector;

  static IntrinsicTangent make(SpherePoint<S> point, FinVec<S> vector, double tol = 1e-9) {
    const S ip = weak_inner(point.coords(), vector);
    if constexpr (scalar_traits<S>::is_exact) {
      if (!scalar_traits<S>::is_zero(ip))
        throw OutsideChartDomain("intrinsic tangent: <x,v> != 0");
    } else {
      if (scalar_traits<S>::to_double(scalar_traits<S>::abs(ip)) > tol)
        throw OutsideChartDomain("intrinsic tangent: |<x,v>| > tol");
    }
    return IntrinsicTangent{std::move(point), std::move(vector)};
  }

  friend bool operator==(const IntrinsicTangent& a, const IntrinsicTangent& b) {
    return a.point == b.point && a.vector == b.vector;
  }

 private:
  IntrinsicTangent(SpherePoint<S> p, FinVec<S> v) : point(std::move(p)), vector(std::move(v)) {}
};

/// Chart rep -> (foot, ambient velocity). For the sphere tower the velocity
/// is tangent: <x,v> = 0 exactly over exact scalars.
template <ScalarField S>
IntrinsicTangent<S> to_intrinsic(const TangentRep<S>& rep, double tol = 1e-9) {
  const ManifoldTower<S>& tw = *rep.tower;
  FinVec<S> foot = tw.chart_inverse(rep.chart, rep.level, rep.base);
  FinVec<S> v = tw.d_chart_inverse(rep.chart, rep.level, rep.base, rep.vel);
  return IntrinsicTangent<S>::make(SpherePoint<S>::on_sphere(std::move(foot), tol), std::move(v),
                                   tol);
}

template <ScalarField S>
TangentRep<S> from_intrinsic(const ManifoldTower<S>& tower, const ChartKey<S>& chart, int level,
                             const IntrinsicTangent<S>& t) {
  FinVec<S> ybar = tower.chart_forward(chart, level, t.point.coords());
  FinVec<S> vbar = tower.d_chart_forward(chart, level, t.point.coords(), t.vector);
  return th(tower, chart, level, std::move(ybar), std::move(vbar));
}

/// Central-difference directional derivative (f(x+hv) - f(x-hv)) / 2h: the
/// universal numerical oracle for the closed-form differentials. Exact for
/// affine f even over exact scalars.
template <ScalarField S>
FinVec<S> directional_derivative(const std::function<FinVec<S>(const FinVec<S>&)>& f,
                                 const FinVec<S>& x, const FinVec<S>& v, const S& h) {
  if (scalar_traits<S>::is_zero(h)) throw ConfigInvalid("directional_derivative: h = 0");
  FinVec<S> fp, fm;
  try {
    fp = f(add(x, scale(h, v)));
    fm = f(sub(x, scale(h, v)));
  } catch (const std::exception& e) {
    throw EvaluationFailure(std::string("directional_derivative: ") + e.what());
  }
  return scale(S(1) / (S(2) * h), sub(fp, fm));
}

template <ScalarField S>
S directional_derivative_scalar(const std::function<S(const FinVec<S>&)>& f, const FinVec<S>& x,
                                const FinVec<S>& v, const S& h) {
  if (scalar_traits<S>::is_zero(h)) throw ConfigInvalid("directional_derivative: h = 0");
  S fp, fm;
  try {
    fp = f(add(x, scale(h, v)));
    fm = f(sub(x, scale(h, v)));
  } catch (const std::exception& e) {
    throw EvaluationFailure(std::string("directional_derivative: ") + e.what());
  }
  return (fp - fm) / (S(2) * h);
}

struct Prop2Report {
  int samples = 0;
  int failures = 0;
  std::optional<std::string> first_counterexample;
  bool ok() const { return failures == 0; }
};

/// The set-level bijection between lim TM_i and T(lim M_i) on samples: every
/// intrinsic tangent with finite support enters the tower at the level its
/// support dictates, round-trips through the chart rep identically, and the
/// reps it induces at different levels are one equivalence class. Exact
/// comparisons over exact scalars; within tol for floats.
template <ScalarField S>
Prop2Report prop2_roundtrip(const ManifoldTower<S>& tower,
                            const std::vector<IntrinsicTangent<S>>& samples, int push_depth = 3,
                            double tol = 1e-9) {
  Prop2Report report;
  auto vec_eq = [tol](const FinVec<S>& a, const FinVec<S>& b) {
    if constexpr (scalar_traits<S>::is_exact) return a == b;
    return max_abs_diff(a, b) <= tol;
  };
  auto intrinsic_eq = [&](const IntrinsicTangent<S>& a, const IntrinsicTangent<S>& b) {
    return vec_eq(a.point.coords(), b.point.coords()) && vec_eq(a.vector, b.vector);
  };
  auto germ_eq = [&](const TangentRep<S>& a, const TangentRep<S>& b) {
    return a.chart == b.chart && vec_eq(a.base, b.base) && vec_eq(a.vel, b.vel);
  };
  auto fail = [&](const IntrinsicTangent<S>& t, const std::string& what) {
    ++report.failures;
    if (!report.first_counterexample)
      report.first_counterexample =
          what + " at (x=" + to_string(t.point.coords()) + ", v=" + to_string(t.vector) + ")";
  };
  for (const auto& t : samples) {
    ++report.samples;
    const int support = std::max(t.point.degree(), t.vector.degree());
    const int n = std::max(tower.min_level(), support - 1);
    if (n > tower.max_level()) {
      fail(t, "entry level beyond truncation");
      continue;
    }
    if (tower.first_level(t.point.coords()) > n) {
      fail(t, "support bound n(x) violated");
      continue;
    }
    const ChartKey<S> chart = tower.select_chart(t.point.coords());
    const TangentRep<S> rep_n = from_intrinsic(tower, chart, n, t);
    if (!intrinsic_eq(to_intrinsic(rep_n, tol), t)) {
      fail(t, "intrinsic round trip at entry level");
      continue;
    }
    const int top = std::min(tower.max_level(), n + push_depth);
    for (int j = n + 1; j <= top; ++j) {
      const TangentRep<S> rep_j = from_intrinsic(tower, chart, j, t);
      // one class: the pushforward of the entry rep matches the direct rep at j
      if (!germ_eq(phi_T(rep_n, j), rep_j) || !germ_eq(pushforward(rep_n, j), rep_j)) {
        fail(t, "class mismatch between levels " + std::to_string(n) + " and " +
                    std::to_string(j));
        break;
      }
      if (!intrinsic_eq(to_intrinsic(rep_j, tol), t)) {
        fail(t, "intrinsic round trip at level " + std::to_string(j));
        break;
      }
    }
  }
  return report;
}

}  // namespace indlim
