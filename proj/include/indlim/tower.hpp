#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "indlim/errors.hpp"
#include "indlim/finvec.hpp"
#include "indlim/rng.hpp"
#include "indlim/scalar.hpp"
#include "indlim/stereo.hpp"

namespace indlim {

/// Identifies one chart family of a tower. Poles are restricted to basis
/// vectors (axis k means pole e_k) so that the hyperplane {pole}^perp has a
/// coordinate-slot identification with R^d and every chart formula stays
/// rational. Axis 0 is the trivial global chart of the euclidean tower.
template <ScalarField S>
struct ChartKey {
  int pole_axis = 1;
  ChartSign sign = ChartSign::plus;

  friend bool operator==(const ChartKey&, const ChartKey&) = default;

  FinVec<S> pole() const {
    return pole_axis >= 1 ? FinVec<S>::unit(pole_axis) : FinVec<S>::zero();
  }
};

template <ScalarField S>
std::string to_string(const ChartKey<S>& key) {
  if (key.pole_axis == 0) return "id";
  return "e" + std::to_string(key.pole_axis) + to_cstring(key.sign);
}

namespace detail {

/// {e_m}^perp <-> R^d slot maps: insert a zero at slot m / delete slot m.
template <ScalarField S>
FinVec<S> axis_insert(const FinVec<S>& y, int axis) {
  std::vector<S> c = y.coeffs();
  if (static_cast<int>(c.size()) >= axis) c.insert(c.begin() + (axis - 1), S(0));
  return FinVec<S>::make(std::move(c));
}

template <ScalarField S>
FinVec<S> axis_delete(const FinVec<S>& z, int axis) {
  std::vector<S> c = z.coeffs();
  if (static_cast<int>(c.size()) >= axis) c.erase(c.begin() + (axis - 1));
  return FinVec<S>::make(std::move(c));
}

}  // namespace detail

/// A directed tower of manifolds M_i (dimension d_i, strictly increasing)
/// with coordinate bonding maps and, for each base point, a chart family
/// h_i : R^{d_i} -> U_i subset M_i compatible with the bonding maps:
/// h_j . lambda_ij = bond_ij . h_i on chart arguments.
///
/// chart_forward is the chart map (h_i)^-1, chart_inverse is h_i; d_* are
/// their differentials. lambda is the chart-coordinate zero padding
/// R^{d_i} -> R^{d_j} and d_bond the derivative of the bonding map; both
/// are virtual so deliberately corrupted towers can be registered to prove
/// the verification suites detect violations.
template <ScalarField S>
class ManifoldTower {
 public:
  virtual ~ManifoldTower() = default;

  virtual const std::string& name() const = 0;
  virtual int min_level() const = 0;
  virtual int max_level() const = 0;
  virtual int dim(int level) const = 0;

  virtual bool contains(int level, const FinVec<S>& point) const = 0;
  virtual FinVec<S> bond(int i, int j, const FinVec<S>& point) const = 0;
  virtual FinVec<S> d_bond(int i, int j, const FinVec<S>& point, const FinVec<S>& v) const = 0;
  virtual FinVec<S> lambda(int i, int j, const FinVec<S>& chart_vec) const = 0;

  /// First level whose manifold contains the point (n(x)).
  virtual int first_level(const FinVec<S>& point) const = 0;

  virtual ChartKey<S> select_chart(const FinVec<S>& base_point) const = 0;

  /// Deterministic sample of a point of M_level from the given generator.
  virtual FinVec<S> random_point(int level, SplitMix64& rng, long span) const = 0;

  virtual FinVec<S> chart_forward(const ChartKey<S>& key, int level,
                                  const FinVec<S>& point) const = 0;
  virtual FinVec<S> chart_inverse(const ChartKey<S>& key, int level,
                                  const FinVec<S>& ybar) const = 0;
  virtual FinVec<S> d_chart_forward(const ChartKey<S>& key, int level, const FinVec<S>& point,
                                    const FinVec<S>& v) const = 0;
  virtual FinVec<S> d_chart_inverse(const ChartKey<S>& key, int level, const FinVec<S>& ybar,
                                    const FinVec<S>& vbar) const = 0;

 protected:
  void check_level(int i) const {
    if (i < min_level() || i > max_level())
      throw IndexOutOfRange("tower '" + name() + "': level " + std::to_string(i) +
                            " outside " + std::to_string(min_level()) + ".." +
                            std::to_string(max_level()));
  }
  void check_level_pair(int i, int j) const {
    check_level(i);
    check_level(j);
    if (j < i) throw LevelDecrease("tower '" + name() + "': bonding from level " +
                                   std::to_string(i) + " down to " + std::to_string(j));
  }
};

/// The sphere tower S^1 c S^2 c ... with the stereographic atlas. M_i is the
/// unit sphere of R^{i+1}, d_i = i, the bonding maps are the coordinate
/// inclusions, and the chart family of a base point uses pole e_1 with the
/// sign chosen so the point is inside the chart domain. All chart formulas
/// are rational, so exact scalars verify every compatibility identity
/// exactly.
template <ScalarField S>
class SphereTower : public ManifoldTower<S> {
 public:
  explicit SphereTower(int max_dim, double domain_guard = 1e-9, double tol = 1e-9)
      : name_("sphere"), max_dim_(max_dim), guard_(domain_guard), tol_(tol) {
    if (max_dim < 2) throw ConfigInvalid("sphere tower needs max_dim >= 2");
  }

  const std::string& name() const override { return name_; }
  int min_level() const override { return 1; }
  int max_level() const override { return max_dim_; }
  int dim(int level) const override {
    this->check_level(level);
    return level;
  }

  bool contains(int level, const FinVec<S>& p) const override {
    this->check_level(level);
    if (p.degree() > level + 1) return false;
    const S q = weak_inner(p, p);
    if constexpr (scalar_traits<S>::is_exact) return q == S(1);
    return scalar_traits<S>::to_double(scalar_traits<S>::abs(q - S(1))) <= tol_;
  }

  FinVec<S> bond(int i, int j, const FinVec<S>& p) const override {
    this->check_level_pair(i, j);
    if (p.degree() > i + 1)
      throw AmbientTooSmall("bond: point not in S^" + std::to_string(i));
    return include(p, j + 1);
  }

  FinVec<S> d_bond(int i, int j, const FinVec<S>& p, const FinVec<S>& v) const override {
    this->check_level_pair(i, j);
    (void)p;
    return include(v, j + 1);
  }

  FinVec<S> lambda(int i, int j, const FinVec<S>& y) const override {
    this->check_level_pair(i, j);
    if (y.degree() > i)
      throw AmbientTooSmall("lambda: chart vector of degree " + std::to_string(y.degree()) +
                            " at level " + std::to_string(i));
    return include(y, j);
  }

  int first_level(const FinVec<S>& p) const override {
    return std::max(min_level(), p.degree() - 1);
  }

  ChartKey<S> select_chart(const FinVec<S>& base) const override {
    const S t = weak_inner(base, FinVec<S>::unit(1));
    bool use_plus;
    if constexpr (scalar_traits<S>::is_exact) {
      use_plus = !(t == S(1));
    } else {
      use_plus = scalar_traits<S>::to_double(t) < 1.0 - guard_;
    }
    return ChartKey<S>{1, use_plus ? ChartSign::plus : ChartSign::minus};
  }

  /// Inverse chart image of random rational chart coordinates: exactly
  /// unit-norm over exact scalars, support within the first level+1 slots.
  FinVec<S> random_point(int level, SplitMix64& rng, long span) const override {
    this->check_level(level);
    const ChartKey<S> key{1, rng.coin() ? ChartSign::plus : ChartSign::minus};
    std::vector<S> c;
    const int len = static_cast<int>(rng.uniform_int(0, level));
    c.reserve(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) {
      const long num = rng.uniform_int(-span, span);
      const long den = rng.uniform_int(1, span);
      c.push_back(scalar_traits<S>::from_int(num) / scalar_traits<S>::from_int(den));
    }
    return chart_inverse(key, level, FinVec<S>::make(std::move(c)));
  }

  FinVec<S> chart_forward(const ChartKey<S>& key, int level,
                          const FinVec<S>& point) const override {
    const StereoChart<S> chart = make_chart(key, level);
    if (point.degree() > level + 1)
      throw AmbientTooSmall("chart_forward: point not in S^" + std::to_string(level));
    const auto x = SpherePoint<S>::on_sphere(point, tol_);
    return detail::axis_delete(stereo_project(chart, x, guard_), key.pole_axis);
  }

  FinVec<S> chart_inverse(const ChartKey<S>& key, int level, const FinVec<S>& ybar) const override {
    const StereoChart<S> chart = make_chart(key, level);
    if (ybar.degree() > level)
      throw AmbientTooSmall("chart_inverse: chart vector of degree " +
                            std::to_string(ybar.degree()) + " at level " + std::to_string(level));
    const FinVec<S> y = detail::axis_insert(ybar, key.pole_axis);
    return stereo_unproject(chart, y, tol_).coords();
  }

  FinVec<S> d_chart_forward(const ChartKey<S>& key, int level, const FinVec<S>& point,
                            const FinVec<S>& v) const override {
    const StereoChart<S> chart = make_chart(key, level);
    const auto x = SpherePoint<S>::on_sphere(point, tol_);
    return detail::axis_delete(d_stereo_project(chart, x, v, guard_), key.pole_axis);
  }

  FinVec<S> d_chart_inverse(const ChartKey<S>& key, int level, const FinVec<S>& ybar,
                            const FinVec<S>& vbar) const override {
    const StereoChart<S> chart = make_chart(key, level);
    if (ybar.degree() > level || vbar.degree() > level)
      throw AmbientTooSmall("d_chart_inverse: chart vectors exceed level dimension");
    const FinVec<S> y = detail::axis_insert(ybar, key.pole_axis);
    const FinVec<S> w = detail::axis_insert(vbar, key.pole_axis);
    return d_stereo_unproject(chart, y, w, tol_);
  }

  double domain_guard() const { return guard_; }
  double tol() const { return tol_; }

 protected:
  StereoChart<S> make_chart(const ChartKey<S>& key, int level) const {
    this->check_level(level);
    if (key.pole_axis < 1 || key.pole_axis > level + 1)
      throw IndexOutOfRange("chart pole e" + std::to_string(key.pole_axis) +
                            " is not on S^" + std::to_string(level));
    return StereoChart<S>{SpherePoint<S>::on_sphere(key.pole(), tol_), key.sign};
  }

  std::string name_;

 private:
  int max_dim_;
  double guard_;
  double tol_;
};

/// The trivial tower R^1 c R^2 c ... with the identity chart; the degenerate
/// instance of the same contract, used by the functoriality suites.
template <ScalarField S>
class EuclideanTower : public ManifoldTower<S> {
 public:
  explicit EuclideanTower(int max_dim) : max_dim_(max_dim), name_("euclidean") {
    if (max_dim < 1) throw ConfigInvalid("euclidean tower needs max_dim >= 1");
  }

  const std::string& name() const override { return name_; }
  int min_level() const override { return 1; }
  int max_level() const override { return max_dim_; }
  int dim(int level) const override {
    this->check_level(level);
    return level;
  }

  bool contains(int level, const FinVec<S>& p) const override {
    this->check_level(level);
    return p.degree() <= level;
  }

  FinVec<S> bond(int i, int j, const FinVec<S>& p) const override {
    this->check_level_pair(i, j);
    if (p.degree() > i) throw AmbientTooSmall("bond: point not in R^" + std::to_string(i));
    return include(p, j);
  }

  FinVec<S> d_bond(int i, int j, const FinVec<S>& p, const FinVec<S>& v) const override {
    this->check_level_pair(i, j);
    (void)p;
    return include(v, j);
  }

  FinVec<S> lambda(int i, int j, const FinVec<S>& y) const override {
    return bond(i, j, y);
  }

  int first_level(const FinVec<S>& p) const override {
    return std::max(min_level(), p.degree());
  }

  ChartKey<S> select_chart(const FinVec<S>&) const override {
    return ChartKey<S>{0, ChartSign::plus};
  }

  FinVec<S> random_point(int level, SplitMix64& rng, long span) const override {
    this->check_level(level);
    std::vector<S> c;
    const int len = static_cast<int>(rng.uniform_int(0, level));
    c.reserve(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) {
      const long num = rng.uniform_int(-span, span);
      const long den = rng.uniform_int(1, span);
      c.push_back(scalar_traits<S>::from_int(num) / scalar_traits<S>::from_int(den));
    }
    return FinVec<S>::make(std::move(c));
  }

  FinVec<S> chart_forward(const ChartKey<S>&, int level, const FinVec<S>& point) const override {
    this->check_level(level);
    if (point.degree() > level) throw AmbientTooSmall("chart_forward: point beyond R^level");
    return point;
  }

  FinVec<S> chart_inverse(const ChartKey<S>&, int level, const FinVec<S>& ybar) const override {
    this->check_level(level);
    if (ybar.degree() > level) throw AmbientTooSmall("chart_inverse: vector beyond R^level");
    return ybar;
  }

  FinVec<S> d_chart_forward(const ChartKey<S>&, int level, const FinVec<S>&,
                            const FinVec<S>& v) const override {
    this->check_level(level);
    return v;
  }

  FinVec<S> d_chart_inverse(const ChartKey<S>&, int level, const FinVec<S>&,
                            const FinVec<S>& vbar) const override {
    this->check_level(level);
    return vbar;
  }

 private:
  int max_dim_;
  std::string name_;
};

/// Sphere tower whose chart-coordinate padding map silently zeroes the top
/// coordinate of the source level. Exists so the suites' detection of
/// compatibility violations can itself be tested; never a model of anything.
template <ScalarField S>
class LambdaFaultTower : public SphereTower<S> {
 public:
  explicit LambdaFaultTower(int max_dim, double domain_guard = 1e-9, double tol = 1e-9)
      : SphereTower<S>(max_dim, domain_guard, tol) {
    this->name_ = "sphere-faulty";
  }

  FinVec<S> lambda(int i, int j, const FinVec<S>& y) const override {
    FinVec<S> padded = SphereTower<S>::lambda(i, j, y);
    std::vector<S> c = padded.coeffs();
    if (static_cast<int>(c.size()) >= i) c[i - 1] = S(0);
    return FinVec<S>::make(std::move(c));
  }
};

template <ScalarField S>
std::unique_ptr<ManifoldTower<S>> sphere_tower(int max_dim, double domain_guard = 1e-9,
                                               double tol = 1e-9) {
  return std::make_unique<SphereTower<S>>(max_dim, domain_guard, tol);
}

/// Tower registry for the harness: "sphere", "euclidean", and the
/// self-check tower "sphere-faulty".
template <ScalarField S>
std::unique_ptr<ManifoldTower<S>> make_tower(const std::string& name, int max_dim,
                                             double domain_guard = 1e-9, double tol = 1e-9) {
  if (name == "sphere") return std::make_unique<SphereTower<S>>(max_dim, domain_guard, tol);
  if (name == "euclidean") return std::make_unique<EuclideanTower<S>>(max_dim);
  if (name == "sphere-faulty")
    return std::make_unique<LambdaFaultTower<S>>(max_dim, domain_guard, tol);
  throw UnknownTower("unknown tower '" + name + "'");
}

/// Deterministic pseudo-random point of S^dim (support in the first dim+1
/// coordinates): dim+1 centered uniform components, rejected while tiny,
/// then normalized. Same (dim, seed) always yields the same point.
inline SpherePoint<double> random_sphere_point(int dim, std::uint64_t seed) {
  if (dim < 1) throw ConfigInvalid("random_sphere_point: dim must be >= 1");
  SplitMix64 rng(mix_seed(seed, 0x5f3759df, static_cast<std::uint64_t>(dim)));
  for (;;) {
    std::vector<double> c(static_cast<std::size_t>(dim) + 1);
    for (auto& v : c) v = rng.uniform_real(-1.0, 1.0);
    double q = 0.0;
    for (double v : c) q += v * v;
    if (q < 1e-6) continue;
    const double inv = 1.0 / std::sqrt(q);
    for (auto& v : c) v *= inv;
    return SpherePoint<double>::on_sphere(FinVec<double>::make(std::move(c)), 1e-12);
  }
}

}  // namespace indlim
