#include "indlim/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

#include "indlim/dirlim.hpp"
#include "indlim/finvec.hpp"
#include "indlim/glinf.hpp"
#include "indlim/rational.hpp"
#include "indlim/rng.hpp"
#include "indlim/sampling.hpp"
#include "indlim/stereo.hpp"
#include "indlim/systems.hpp"
#include "indlim/tangent.hpp"
#include "indlim/tower.hpp"

namespace indlim {
namespace {

using nlohmann::ordered_json;

constexpr double kFdStep = 1e-6;      // central-difference step
constexpr double kFdRelTol = 1e-5;    // closed form vs finite difference
constexpr double kDomainGuard = 1e-9; // float-mode chart domain guard
constexpr double kPoleMargin = 0.05;  // sampling margin around chart poles

const std::set<std::string> kSuites = {"group",   "functorial", "charts",    "cocycle",
                                       "diagram", "tangency",   "roundtrip", "derivative",
                                       "all"};
const std::set<std::string> kSphereSuites = {"cocycle", "tangency", "roundtrip", "derivative"};
const std::set<std::string> kTowers = {"sphere", "euclidean", "sphere-faulty"};

/// One trial: returns pass/fail, accumulates a residual, fills a
/// counterexample description on failure.
using Trial = std::function<bool(SplitMix64& rng, double& residual, std::string& cex)>;

struct CheckRunner {
  const SuiteConfig& cfg;
  std::vector<CheckResult> results;

  void check(const std::string& owning_suite, const std::string& id, bool record_residual,
             const Trial& trial) {
    CheckResult res;
    res.id = id;
    res.trials = cfg.trials;
    double max_resid = 0.0;
    const std::uint64_t suite_hash = fnv1a(owning_suite);
    for (int k = 0; k < cfg.trials; ++k) {
      SplitMix64 rng(mix_seed(cfg.seed, suite_hash, static_cast<std::uint64_t>(k)));
      double resid = 0.0;
      std::string cex;
      const bool ok = trial(rng, resid, cex);
      max_resid = std::max(max_resid, resid);
      if (!ok) {
        ++res.failures;
        if (!res.counterexample)
          res.counterexample = "trial " + std::to_string(k) + (cex.empty() ? "" : ": " + cex);
      }
    }
    if (record_residual) res.max_residual = max_resid;
    results.push_back(std::move(res));
  }
};

template <ScalarField S, class V>
bool values_match(const V& a, const V& b, double tol, double& resid) {
  const double r = max_abs_diff(a, b);
  resid = std::max(resid, r);
  if constexpr (scalar_traits<S>::is_exact) return a == b;
  return r <= tol;
}

/// Resamples through chart-domain rejections.
template <class F>
auto retry_domain(F&& f) {
  for (int attempt = 0;; ++attempt) {
    try {
      return f();
    } catch (const OutsideChartDomain&) {
      if (attempt >= 64) throw;
    } catch (const NotInPerp&) {
      if (attempt >= 64) throw;
    }
  }
}

int level_low(const SuiteConfig& cfg, int tower_min, int floor_level = 1) {
  return std::max({cfg.dim_min, tower_min, floor_level});
}

// ---------------------------------------------------------------- group ---

template <ScalarField S>
void suite_group(CheckRunner& r) {
  const bool exact = scalar_traits<S>::is_exact;
  const double tol = r.cfg.tol;
  const int max_block = exact ? 8 : 6;
  const long span = exact ? 5 : 2;

  r.check("group", "gl.compose.assoc", !exact, [=](SplitMix64& rng, double& resid, std::string& cex) {
    const auto g = random_gl<S>(rng, max_block, span);
    const auto h = random_gl<S>(rng, max_block, span);
    const auto k = random_gl<S>(rng, max_block, span);
    const bool ok = values_match<S>(compose(compose(g, h), k), compose(g, compose(h, k)), tol, resid);
    if (!ok) cex = "g=" + to_string(g) + " h=" + to_string(h) + " k=" + to_string(k);
    return ok;
  });

  r.check("group", "gl.identity.twosided", !exact, [=](SplitMix64& rng, double& resid, std::string& cex) {
    const auto g = random_gl<S>(rng, max_block, span);
    const auto e = GLInfElement<S>::identity();
    const bool ok = values_match<S>(compose(g, e), g, tol, resid) &&
                    values_match<S>(compose(e, g), g, tol, resid);
    if (!ok) cex = "g=" + to_string(g);
    return ok;
  });

  r.check("group", "gl.inverse.twosided", !exact, [=](SplitMix64& rng, double& resid, std::string& cex) {
    const auto g = random_gl<S>(rng, max_block, span);
    const auto gi = inverse(g);
    const auto e = GLInfElement<S>::identity();
    const bool ok = values_match<S>(compose(g, gi), e, tol, resid) &&
                    values_match<S>(compose(gi, g), e, tol, resid);
    if (!ok) cex = "g=" + to_string(g);
    return ok;
  });

  r.check("group", "gl.canonical.roundtrip", !exact, [=](SplitMix64& rng, double& resid, std::string& cex) {
    const auto g = random_gl<S>(rng, max_block, span);
    const auto again = GLInfElement<S>::from_block(g.block_rows());
    const auto padded = GLInfElement<S>::from_block(g.block_rows(g.size() + 2));
    const bool ok =
        values_match<S>(again, g, tol, resid) && values_match<S>(padded, g, tol, resid);
    if (!ok) cex = "g=" + to_string(g);
    return ok;
  });
}

// ----------------------------------------------------------- functorial ---

template <ScalarField S>
void suite_functorial(CheckRunner& r) {
  const bool exact = scalar_traits<S>::is_exact;
  const double tol = r.cfg.tol;
  const int hi = std::max(r.cfg.dim_max, 8);
  const long span = exact ? 5 : 2;
  const auto rn = finvec_system<S>(hi);
  const auto gl = glinf_system<S>(hi);

  r.check("functorial", "rn.bond.identity", !exact, [=](SplitMix64& rng, double& resid, std::string& cex) {
    const int i = static_cast<int>(rng.uniform_int(1, hi));
    const auto x = random_finvec<S>(rng, i, span);
    const bool ok = values_match<S>(rn.bond(i, i, x), x, tol, resid);
    if (!ok) cex = "i=" + std::to_string(i) + " x=" + to_string(x);
    return ok;
  });

  r.check("functorial", "rn.bond.compose", !exact, [=](SplitMix64& rng, double& resid, std::string& cex) {
    const int i = static_cast<int>(rng.uniform_int(1, hi));
    const int j = static_cast<int>(rng.uniform_int(i, hi));
    const int k = static_cast<int>(rng.uniform_int(j, hi));
    const auto x = random_finvec<S>(rng, i, span);
    const bool ok = values_match<S>(rn.bond(j, k, rn.bond(i, j, x)), rn.bond(i, k, x), tol, resid);
    if (!ok) cex = "(i,j,k)=(" + std::to_string(i) + "," + std::to_string(j) + "," +
                   std::to_string(k) + ") x=" + to_string(x);
    return ok;
  });

  r.check("functorial", "gl.embed.identity", !exact, [=](SplitMix64& rng, double& resid, std::string& cex) {
    const auto g = random_gl<S>(rng, 8, span);
    const int i = std::max(1, g.size());
    const bool ok = values_match<S>(gl.bond(i, i, g), g, tol, resid);
    if (!ok) cex = "g=" + to_string(g);
    return ok;
  });

  r.check("functorial", "gl.embed.compose", !exact, [=](SplitMix64& rng, double& resid, std::string& cex) {
    const auto g = random_gl<S>(rng, 8, span);
    const int i = std::max(1, g.size());
    const int m = static_cast<int>(rng.uniform_int(i, hi));
    const int k = static_cast<int>(rng.uniform_int(m, hi));
    const bool ok = values_match<S>(g.embed(m).embed(k), g.embed(k), tol, resid);
    if (!ok) cex = "g=" + to_string(g) + " m=" + std::to_string(m) + " k=" + std::to_string(k);
    return ok;
  });

  r.check("functorial", "gl.embed.mul", !exact, [=](SplitMix64& rng, double& resid, std::string& cex) {
    const auto g = random_gl<S>(rng, 8, span);
    const auto h = random_gl<S>(rng, 8, span);
    const int m = static_cast<int>(rng.uniform_int(std::max(g.size(), h.size()), hi));
    const bool ok =
        values_match<S>(compose(g.embed(m), h.embed(m)), compose(g, h).embed(m), tol, resid);
    if (!ok) cex = "g=" + to_string(g) + " h=" + to_string(h);
    return ok;
  });

  r.check("functorial", "gl.action.include", !exact, [=](SplitMix64& rng, double& resid, std::string& cex) {
    const auto g = random_gl<S>(rng, 8, span);
    const auto v = random_finvec<S>(rng, 8, span);
    const int d = static_cast<int>(rng.uniform_int(std::max(g.size(), v.degree()), hi));
    const bool ok = values_match<S>(apply(g, include(v, d)), apply(g.embed(d), v), tol, resid);
    if (!ok) cex = "g=" + to_string(g) + " v=" + to_string(v) + " d=" + std::to_string(d);
    return ok;
  });

  r.check("functorial", "dirlim.inject.canonical", false, [=](SplitMix64& rng, double&, std::string& cex) {
    const int i = static_cast<int>(rng.uniform_int(1, hi));
    const int j = static_cast<int>(rng.uniform_int(i, hi));
    const auto x = random_finvec<S>(rng, i, span);
    const bool ok = equivalent(inject(rn, i, x), inject(rn, j, rn.bond(i, j, x)));
    if (!ok) cex = "(i,j)=(" + std::to_string(i) + "," + std::to_string(j) + ") x=" + to_string(x);
    return ok;
  });

  r.check("functorial", "dirlim.equiv.laws", false, [=](SplitMix64& rng, double&, std::string& cex) {
    const int i = static_cast<int>(rng.uniform_int(1, hi));
    const int j = static_cast<int>(rng.uniform_int(i, hi));
    const int k = static_cast<int>(rng.uniform_int(j, hi));
    const auto x = random_finvec<S>(rng, i, span);
    const auto a = inject(rn, i, x);
    const auto b = inject(rn, j, rn.bond(i, j, x));
    const auto c = inject(rn, k, rn.bond(i, k, x));
    const auto different = inject(rn, i, add(x, FinVec<S>::unit(1)));
    const bool ok = equivalent(a, a) && equivalent(a, b) && equivalent(b, a) &&
                    equivalent(b, c) && equivalent(a, c) && !equivalent(a, different);
    if (!ok) cex = "x=" + to_string(x);
    return ok;
  });

  r.check("functorial", "dirlim.inject.injective", false, [=](SplitMix64& rng, double&, std::string& cex) {
    const int i = static_cast<int>(rng.uniform_int(1, hi));
    const auto x = random_finvec<S>(rng, i, span);
    const auto y = add(x, scale(random_scalar<S>(rng, span) + S(1) / S(7), FinVec<S>::unit(1)));
    if (x == y) return true;
    const bool ok = !equivalent(inject(rn, i, x), inject(rn, i, y));
    if (!ok) cex = "x=" + to_string(x) + " y=" + to_string(y);
    return ok;
  });

  r.check("functorial", "dirlim.universal.factor", false, [=](SplitMix64& rng, double&, std::string& cex) {
    std::vector<std::pair<int, FinVec<S>>> cone_samples;
    for (int s = 0; s < 3; ++s) {
      const int i = static_cast<int>(rng.uniform_int(1, hi));
      cone_samples.emplace_back(i, random_finvec<S>(rng, i, span));
    }
    const auto psi = universal_map<FinVec<S>, S>(
        rn, [](int, const FinVec<S>& x) { return x.at(1); },
        [=](const S& a, const S& b) {
          if constexpr (scalar_traits<S>::is_exact) return a == b;
          return scalar_traits<S>::to_double(scalar_traits<S>::abs(a - b)) <= tol;
        },
        cone_samples);
    const int i = static_cast<int>(rng.uniform_int(1, hi));
    const auto x = random_finvec<S>(rng, i, span);
    const bool ok = psi(inject(rn, i, x)) == x.at(1);
    if (!ok) cex = "x=" + to_string(x);
    return ok;
  });
}

// --------------------------------------------------------------- charts ---

template <ScalarField S>
void suite_charts(CheckRunner& r) {
  const bool exact = scalar_traits<S>::is_exact;
  const double tol = r.cfg.tol;
  const auto tower = make_tower<S>(r.cfg.tower, r.cfg.dim_max, kDomainGuard, r.cfg.tol);
  const ManifoldTower<S>& tw = *tower;
  const int lo = level_low(r.cfg, tw.min_level());
  const int hi = r.cfg.dim_max;
  const bool stereo = r.cfg.tower != "euclidean";
  const long span = 5;

  r.check("charts", "charts.eq1", !exact, [&tw, lo, hi, tol, span](SplitMix64& rng, double& resid, std::string& cex) {
    const int i = hi > lo ? static_cast<int>(rng.uniform_int(lo, hi - 1)) : lo;
    const int j = hi > lo ? static_cast<int>(rng.uniform_int(i + 1, hi)) : lo;
    const ChartKey<S> key{tw.select_chart(FinVec<S>::zero()).pole_axis == 0 ? 0 : 1,
                          rng.coin() ? ChartSign::plus : ChartSign::minus};
    const auto ybar = random_finvec<S>(rng, tw.dim(i), span);
    const auto left = tw.chart_inverse(key, j, tw.lambda(i, j, ybar));
    const auto right = tw.bond(i, j, tw.chart_inverse(key, i, ybar));
    const bool ok = values_match<S>(left, right, tol, resid);
    if (!ok) cex = "(i,j)=(" + std::to_string(i) + "," + std::to_string(j) +
                   ") ybar=" + to_string(ybar) + " chart=" + to_string(key);
    return ok;
  });

  r.check("charts", "charts.roundtrip", !exact, [&tw, lo, hi, tol, span](SplitMix64& rng, double& resid, std::string& cex) {
    return retry_domain([&] {
      const int i = static_cast<int>(rng.uniform_int(lo, hi));
      const ChartKey<S> key{tw.select_chart(FinVec<S>::zero()).pole_axis == 0 ? 0 : 1,
                            rng.coin() ? ChartSign::plus : ChartSign::minus};
      const auto x = tw.random_point(i, rng, span);
      const auto back = tw.chart_inverse(key, i, tw.chart_forward(key, i, x));
      const bool ok = values_match<S>(back, x, tol, resid);
      if (!ok) cex = "x=" + to_string(x) + " chart=" + to_string(key);
      return ok;
    });
  });

  r.check("charts", "charts.unitnorm", false, [&tw, lo, hi, span](SplitMix64& rng, double&, std::string& cex) {
    const int i = static_cast<int>(rng.uniform_int(lo, hi));
    const ChartKey<S> key = tw.select_chart(tw.random_point(i, rng, span));
    const auto ybar = random_finvec<S>(rng, tw.dim(i), span);
    const auto point = tw.chart_inverse(key, i, ybar);
    const bool ok = tw.contains(i, point);
    if (!ok) cex = "ybar=" + to_string(ybar) + " point=" + to_string(point);
    return ok;
  });

  if (stereo) {
    r.check("charts", "charts.orthogonal", !exact, [lo, hi, tol, span](SplitMix64& rng, double& resid, std::string& cex) {
      return retry_domain([&] {
        const int i = static_cast<int>(rng.uniform_int(lo, hi));
        const StereoChart<S> chart{SpherePoint<S>::on_sphere(FinVec<S>::unit(1)),
                                   rng.coin() ? ChartSign::plus : ChartSign::minus};
        const auto x = random_unit_point<S>(rng, i, span);
        const S ip = weak_inner(stereo_project(chart, x), chart.pole.coords());
        const double res = scalar_traits<S>::to_double(scalar_traits<S>::abs(ip));
        resid = std::max(resid, res);
        const bool ok = scalar_traits<S>::is_exact ? scalar_traits<S>::is_zero(ip) : res <= tol;
        if (!ok) cex = "x=" + to_string(x.coords());
        return ok;
      });
    });

    r.check("charts", "charts.naturality", !exact, [&tw, lo, hi, tol, span](SplitMix64& rng, double& resid, std::string& cex) {
      return retry_domain([&] {
        const int i = hi > lo ? static_cast<int>(rng.uniform_int(lo, hi - 1)) : lo;
        const int j = hi > lo ? static_cast<int>(rng.uniform_int(i + 1, hi)) : lo;
        const ChartKey<S> from{1, rng.coin() ? ChartSign::plus : ChartSign::minus};
        const ChartKey<S> to{static_cast<int>(rng.uniform_int(1, 2)),
                             rng.coin() ? ChartSign::plus : ChartSign::minus};
        if (from == to) return true;
        const auto y = random_nonzero_finvec<S>(rng, tw.dim(i), span);
        const auto tau_i = tw.chart_forward(to, i, tw.chart_inverse(from, i, y));
        const auto left = tw.lambda(i, j, tau_i);
        const auto right = tw.chart_forward(to, j, tw.chart_inverse(from, j, tw.lambda(i, j, y)));
        const bool ok = values_match<S>(left, right, tol, resid);
        if (!ok) cex = "y=" + to_string(y) + " from=" + to_string(from) + " to=" + to_string(to);
        return ok;
      });
    });
  }
}

// -------------------------------------------------------------- diagram ---

template <ScalarField S>
void suite_diagram(CheckRunner& r) {
  const bool exact = scalar_traits<S>::is_exact;
  const double tol = r.cfg.tol;
  const auto tower = make_tower<S>(r.cfg.tower, r.cfg.dim_max, kDomainGuard, r.cfg.tol);
  const ManifoldTower<S>& tw = *tower;
  const int lo = level_low(r.cfg, tw.min_level());
  const int hi = r.cfg.dim_max;
  const long span = 5;

  auto rand_chart = [&tw](SplitMix64& rng) {
    const int axis = tw.select_chart(FinVec<S>::zero()).pole_axis == 0 ? 0 : 1;
    return ChartKey<S>{axis, rng.coin() ? ChartSign::plus : ChartSign::minus};
  };

  r.check("diagram", "diagram.commute", !exact, [&tw, lo, hi, tol, span, rand_chart](SplitMix64& rng, double& resid, std::string& cex) {
    const int i = static_cast<int>(rng.uniform_int(lo, hi));
    const int j = static_cast<int>(rng.uniform_int(i, hi));
    const auto rep = random_tangent_rep(tw, rand_chart(rng), i, rng, span);
    const auto report = diagram_check(tw, i, j, {rep});
    resid = std::max(resid, report.max_residual);
    const bool ok = report.ok(tol);
    if (!ok && report.first_counterexample) cex = *report.first_counterexample;
    return ok;
  });

  r.check("diagram", "diagram.projection", !exact, [&tw, lo, hi, tol, span, rand_chart](SplitMix64& rng, double& resid, std::string& cex) {
    const int i = static_cast<int>(rng.uniform_int(lo, hi));
    const int j = static_cast<int>(rng.uniform_int(i, hi));
    const auto rep = random_tangent_rep(tw, rand_chart(rng), i, rng, span);
    const auto left = tw.bond(i, j, projection(rep));
    const auto right = projection(pushforward(rep, j));
    const bool ok = values_match<S>(left, right, tol, resid);
    if (!ok) cex = "rep(base=" + to_string(rep.base) + ", vel=" + to_string(rep.vel) + ")";
    return ok;
  });

  r.check("diagram", "diagram.lift", !exact, [&tw, lo, hi, tol, span, rand_chart](SplitMix64& rng, double& resid, std::string& cex) {
    const int i = static_cast<int>(rng.uniform_int(lo, hi));
    const int j = static_cast<int>(rng.uniform_int(i, hi));
    const auto key = rand_chart(rng);
    const auto ybar = random_finvec<S>(rng, tw.dim(i), span);
    const auto vbar = random_finvec<S>(rng, tw.dim(i), span);
    const auto left = pushforward(th(tw, key, i, ybar, vbar), j);
    const auto right = th(tw, key, j, tw.lambda(i, j, ybar), tw.lambda(i, j, vbar));
    const bool ok = values_match<S>(left.base, right.base, tol, resid) &&
                    values_match<S>(left.vel, right.vel, tol, resid);
    if (!ok) cex = "ybar=" + to_string(ybar) + " vbar=" + to_string(vbar) + " (i,j)=(" +
                   std::to_string(i) + "," + std::to_string(j) + ")";
    return ok;
  });

  r.check("diagram", "diagram.fiber.linear", !exact, [&tw, lo, hi, tol, span, rand_chart](SplitMix64& rng, double& resid, std::string& cex) {
    const int i = static_cast<int>(rng.uniform_int(lo, hi));
    const auto key = rand_chart(rng);
    const auto ybar = random_finvec<S>(rng, tw.dim(i), span);
    const auto v1 = random_finvec<S>(rng, tw.dim(i), span);
    const auto v2 = random_finvec<S>(rng, tw.dim(i), span);
    const S c = random_scalar<S>(rng, span);
    // trivialization fiber is linear on lifts ...
    const auto combined = trivialize(th(tw, key, i, ybar, add(scale(c, v1), v2))).fiber;
    const auto split = add(scale(c, trivialize(th(tw, key, i, ybar, v1)).fiber),
                           trivialize(th(tw, key, i, ybar, v2)).fiber);
    bool ok = values_match<S>(combined, split, tol, resid);
    // ... and so is the intrinsic velocity it encodes
    const auto dc = tw.d_chart_inverse(key, i, ybar, add(scale(c, v1), v2));
    const auto ds = add(scale(c, tw.d_chart_inverse(key, i, ybar, v1)),
                        tw.d_chart_inverse(key, i, ybar, v2));
    ok = values_match<S>(dc, ds, tol, resid) && ok;
    if (!ok) cex = "ybar=" + to_string(ybar) + " v1=" + to_string(v1) + " v2=" + to_string(v2);
    return ok;
  });
}

// -------------------------------------------------------------- cocycle ---

template <ScalarField S>
void cocycle_identity(CheckRunner& r) {
  const bool exact = scalar_traits<S>::is_exact;
  const double tol = r.cfg.tol;
  const auto tower = make_tower<S>(r.cfg.tower, r.cfg.dim_max, kDomainGuard, r.cfg.tol);
  const ManifoldTower<S>& tw = *tower;
  const int lo = level_low(r.cfg, tw.min_level(), 2);
  const int hi = r.cfg.dim_max;

  r.check("cocycle", "cocycle.identity", !exact, [&tw, lo, hi, tol](SplitMix64& rng, double& resid, std::string& cex) {
    return retry_domain([&] {
      const int level = static_cast<int>(rng.uniform_int(lo, hi));
      const ChartKey<S> a{1, rng.coin() ? ChartSign::plus : ChartSign::minus};
      const auto foot = random_unit_point_avoiding<S>(rng, level, {a}, kPoleMargin, 3).coords();
      const auto t = transition_fiber(tw, a, a, foot, level);
      const bool ok = values_match<S>(t, GLInfElement<S>::identity(), tol, resid);
      if (!ok) cex = "foot=" + to_string(foot) + " T=" + to_string(t);
      return ok;
    });
  });
}

template <ScalarField S>
void cocycle_compose(CheckRunner& r) {
  const bool exact = scalar_traits<S>::is_exact;
  const double tol = r.cfg.tol;
  const auto tower = make_tower<S>(r.cfg.tower, r.cfg.dim_max, kDomainGuard, r.cfg.tol);
  const ManifoldTower<S>& tw = *tower;
  const int lo = level_low(r.cfg, tw.min_level(), 2);
  const int hi = r.cfg.dim_max;

  r.check("cocycle", "cocycle.invert", !exact, [&tw, lo, hi, tol](SplitMix64& rng, double& resid, std::string& cex) {
    return retry_domain([&] {
      const int level = static_cast<int>(rng.uniform_int(lo, hi));
      const ChartKey<S> a{1, rng.coin() ? ChartSign::plus : ChartSign::minus};
      const ChartKey<S> b{2, rng.coin() ? ChartSign::plus : ChartSign::minus};
      const auto foot = random_unit_point_avoiding<S>(rng, level, {a, b}, kPoleMargin, 3).coords();
      const auto ab = transition_fiber(tw, a, b, foot, level);
      const auto ba = transition_fiber(tw, b, a, foot, level);
      const bool ok = values_match<S>(compose(ba, ab), GLInfElement<S>::identity(), tol, resid);
      if (!ok) cex = "foot=" + to_string(foot);
      return ok;
    });
  });

  r.check("cocycle", "cocycle.compose", !exact, [&tw, lo, hi, tol](SplitMix64& rng, double& resid, std::string& cex) {
    return retry_domain([&] {
      const int level = static_cast<int>(rng.uniform_int(lo, hi));
      const ChartKey<S> a{1, rng.coin() ? ChartSign::plus : ChartSign::minus};
      const ChartKey<S> b{2, rng.coin() ? ChartSign::plus : ChartSign::minus};
      const ChartKey<S> c{3, rng.coin() ? ChartSign::plus : ChartSign::minus};
      const auto foot =
          random_unit_point_avoiding<S>(rng, level, {a, b, c}, kPoleMargin, 3).coords();
      const auto ab = transition_fiber(tw, a, b, foot, level);
      const auto bc = transition_fiber(tw, b, c, foot, level);
      const auto ac = transition_fiber(tw, a, c, foot, level);
      const bool ok = values_match<S>(compose(bc, ab), ac, tol, resid);
      if (!ok) cex = "foot=" + to_string(foot);
      return ok;
    });
  });
}

void suite_cocycle(CheckRunner& r) {
  switch (r.cfg.mode) {
    case ScalarMode::Auto:
      cocycle_identity<Rational>(r);
      cocycle_compose<double>(r);
      break;
    case ScalarMode::Rational:
      cocycle_identity<Rational>(r);
      cocycle_compose<Rational>(r);
      break;
    case ScalarMode::Float:
      cocycle_identity<double>(r);
      cocycle_compose<double>(r);
      break;
  }
}

// ------------------------------------------------------------- tangency ---

template <ScalarField S>
void suite_tangency(CheckRunner& r) {
  const bool exact = scalar_traits<S>::is_exact;
  const double tol = r.cfg.tol;
  const auto tower = make_tower<S>(r.cfg.tower, r.cfg.dim_max, kDomainGuard, r.cfg.tol);
  const ManifoldTower<S>& tw = *tower;
  const int lo = level_low(r.cfg, tw.min_level(), 2);
  const int hi = r.cfg.dim_max;
  const long span = 5;

  r.check("tangency", "tangency.orthogonal", !exact, [&tw, lo, hi, tol, span](SplitMix64& rng, double& resid, std::string& cex) {
    return retry_domain([&] {
      const int i = static_cast<int>(rng.uniform_int(lo, hi));
      const ChartKey<S> key{1, rng.coin() ? ChartSign::plus : ChartSign::minus};
      const auto rep = random_tangent_rep(tw, key, i, rng, span);
      const auto t = to_intrinsic(rep, tol);
      const S ip = weak_inner(t.point.coords(), t.vector);
      const double res = scalar_traits<S>::to_double(scalar_traits<S>::abs(ip));
      resid = std::max(resid, res);
      const bool ok = scalar_traits<S>::is_exact ? scalar_traits<S>::is_zero(ip) : res <= tol;
      if (!ok) cex = "rep(base=" + to_string(rep.base) + ", vel=" + to_string(rep.vel) + ")";
      return ok;
    });
  });

  r.check("tangency", "tangency.roundtrip", !exact, [&tw, lo, hi, tol, span](SplitMix64& rng, double& resid, std::string& cex) {
    return retry_domain([&] {
      const int i = static_cast<int>(rng.uniform_int(lo, hi));
      const ChartKey<S> key{1, rng.coin() ? ChartSign::plus : ChartSign::minus};
      const auto rep = random_tangent_rep(tw, key, i, rng, span);
      const auto back = from_intrinsic(tw, key, i, to_intrinsic(rep, tol));
      const bool ok = values_match<S>(back.base, rep.base, tol, resid) &&
                      values_match<S>(back.vel, rep.vel, tol, resid);
      if (!ok) cex = "rep(base=" + to_string(rep.base) + ", vel=" + to_string(rep.vel) + ")";
      return ok;
    });
  });

  r.check("tangency", "tangency.chart.free", !exact, [&tw, lo, hi, tol, span](SplitMix64& rng, double& resid, std::string& cex) {
    return retry_domain([&] {
      const int i = static_cast<int>(rng.uniform_int(lo, hi));
      const ChartKey<S> a{1, rng.coin() ? ChartSign::plus : ChartSign::minus};
      const ChartKey<S> b{2, rng.coin() ? ChartSign::plus : ChartSign::minus};
      const auto foot = random_unit_point_avoiding<S>(rng, i, {a, b}, kPoleMargin, 3).coords();
      const auto ybar = tw.chart_forward(a, i, foot);
      const auto vbar = random_finvec<S>(rng, tw.dim(i), span);
      const auto rep_a = th(tw, a, i, ybar, vbar);
      const auto t = to_intrinsic(rep_a, tol);
      const auto rep_b = from_intrinsic(tw, b, i, t);
      const auto t_again = to_intrinsic(rep_b, tol);
      bool ok = values_match<S>(t_again.point.coords(), t.point.coords(), tol, resid) &&
                values_match<S>(t_again.vector, t.vector, tol, resid);
      const auto fiber_map = transition_fiber(tw, a, b, foot, i);
      ok = values_match<S>(rep_b.vel, apply(fiber_map, rep_a.vel), tol, resid) && ok;
      if (!ok) cex = "foot=" + to_string(foot) + " vbar=" + to_string(vbar);
      return ok;
    });
  });
}

// ------------------------------------------------------------ roundtrip ---

template <ScalarField S>
void suite_roundtrip(CheckRunner& r) {
  const double tol = r.cfg.tol;
  const auto tower = make_tower<S>(r.cfg.tower, r.cfg.dim_max, kDomainGuard, r.cfg.tol);
  const ManifoldTower<S>& tw = *tower;
  const int lo = level_low(r.cfg, tw.min_level(), 2);
  const int hi = r.cfg.dim_max;
  const long span = 5;

  r.check("roundtrip", "prop2.support", false, [&tw, lo, hi, span, tol](SplitMix64& rng, double&, std::string& cex) {
    return retry_domain([&] {
      const int level = static_cast<int>(rng.uniform_int(lo, hi));
      const auto t = random_intrinsic_tangent(tw, level, rng, span);
      const auto report = prop2_roundtrip(tw, {t}, 0, tol);
      const bool ok = report.ok();
      if (!ok && report.first_counterexample) cex = *report.first_counterexample;
      return ok;
    });
  });

  r.check("roundtrip", "prop2.classes", false, [&tw, lo, hi, span](SplitMix64& rng, double&, std::string& cex) {
    return retry_domain([&] {
      const int level = static_cast<int>(rng.uniform_int(lo, hi));
      const auto t = random_intrinsic_tangent(tw, level, rng, span);
      const int support = std::max(t.point.degree(), t.vector.degree());
      const int n = std::max(tw.min_level(), support - 1);
      const auto chart = tw.select_chart(t.point.coords());
      const auto sys = tangent_system(tw);
      const auto rep_n = from_intrinsic(tw, chart, n, t);
      bool ok = true;
      for (int j = n + 1; j <= std::min(hi, n + 3) && ok; ++j) {
        const auto rep_j = from_intrinsic(tw, chart, j, t);
        ok = equivalent(inject(sys, n, rep_n), inject(sys, j, rep_j));
      }
      if (!ok)
        cex = "x=" + to_string(t.point.coords()) + " v=" + to_string(t.vector) +
              " n=" + std::to_string(n);
      return ok;
    });
  });

  r.check("roundtrip", "prop2.pushforward", false, [&tw, lo, hi, span, tol](SplitMix64& rng, double&, std::string& cex) {
    return retry_domain([&] {
      const int level = static_cast<int>(rng.uniform_int(lo, hi));
      const auto t = random_intrinsic_tangent(tw, level, rng, span);
      const auto report = prop2_roundtrip(tw, {t}, 3, tol);
      const bool ok = report.ok();
      if (!ok && report.first_counterexample) cex = *report.first_counterexample;
      return ok;
    });
  });
}

// ----------------------------------------------------------- derivative ---

double rel_diff(const FinVec<double>& a, const FinVec<double>& b) {
  const int n = std::max(a.degree(), b.degree());
  double worst = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double x = a.at(k), y = b.at(k);
    worst = std::max(worst, std::fabs(x - y) / std::max({std::fabs(x), std::fabs(y), 1.0}));
  }
  return worst;
}

void suite_derivative(CheckRunner& r) {
  using D = double;
  const auto tower = make_tower<D>(r.cfg.tower, r.cfg.dim_max, kDomainGuard, r.cfg.tol);
  const ManifoldTower<D>& tw = *tower;
  const int lo = level_low(r.cfg, tw.min_level(), 2);
  const int hi = r.cfg.dim_max;

  r.check("derivative", "deriv.unproject.fd", true, [lo, hi](SplitMix64& rng, double& resid, std::string& cex) {
    return retry_domain([&] {
      const int level = static_cast<int>(rng.uniform_int(lo, hi));
      const StereoChart<D> chart{SpherePoint<D>::on_sphere(FinVec<D>::unit(1)),
                                 rng.coin() ? ChartSign::plus : ChartSign::minus};
      const auto y = detail::axis_insert(random_finvec<D>(rng, level, 3), 1);
      const auto w = detail::axis_insert(random_finvec<D>(rng, level, 3), 1);
      const auto closed = d_stereo_unproject(chart, y, w);
      const auto fd = directional_derivative<D>(
          [&chart](const FinVec<D>& arg) { return stereo_unproject(chart, arg).coords(); }, y, w,
          kFdStep);
      const double rd = rel_diff(closed, fd);
      resid = std::max(resid, rd);
      const bool ok = rd <= kFdRelTol;
      if (!ok) cex = "y=" + to_string(y) + " w=" + to_string(w);
      return ok;
    });
  });

  r.check("derivative", "deriv.project.fd", true, [lo, hi](SplitMix64& rng, double& resid, std::string& cex) {
    return retry_domain([&] {
      const int level = static_cast<int>(rng.uniform_int(lo, hi));
      const ChartKey<D> key{1, rng.coin() ? ChartSign::plus : ChartSign::minus};
      const StereoChart<D> chart{SpherePoint<D>::on_sphere(key.pole()), key.sign};
      const auto x = random_unit_point_avoiding<D>(rng, level, {key}, kPoleMargin, 3);
      // tangential unit direction at x
      auto raw_dir = random_nonzero_finvec<D>(rng, level + 1, 3);
      auto tang = sub(raw_dir, scale(weak_inner(raw_dir, x.coords()), x.coords()));
      const double norm = std::sqrt(weak_inner(tang, tang));
      if (norm < 1e-3) return true;
      tang = scale(1.0 / norm, tang);
      const auto closed = d_stereo_project(chart, x, tang);
      // great-circle curve through x with velocity tang
      auto circle = [&](double t) {
        return add(scale(std::cos(t), x.coords()), scale(std::sin(t), tang));
      };
      const auto up = stereo_project(chart, SpherePoint<D>::on_sphere(circle(kFdStep)));
      const auto dn = stereo_project(chart, SpherePoint<D>::on_sphere(circle(-kFdStep)));
      const auto fd = scale(1.0 / (2.0 * kFdStep), sub(up, dn));
      const double rd = rel_diff(closed, fd);
      resid = std::max(resid, rd);
      const bool ok = rd <= kFdRelTol;
      if (!ok) cex = "x=" + to_string(x.coords()) + " v=" + to_string(tang);
      return ok;
    });
  });

  r.check("derivative", "deriv.transition.fd", true, [&tw, lo, hi](SplitMix64& rng, double& resid, std::string& cex) {
    return retry_domain([&] {
      const int level = static_cast<int>(rng.uniform_int(lo, hi));
      const ChartKey<D> a{1, rng.coin() ? ChartSign::plus : ChartSign::minus};
      const ChartKey<D> b{2, rng.coin() ? ChartSign::plus : ChartSign::minus};
      const auto foot = random_unit_point_avoiding<D>(rng, level, {a, b}, kPoleMargin, 3).coords();
      const auto ybar = tw.chart_forward(a, level, foot);
      const auto fiber_map = transition_fiber(tw, a, b, foot, level);
      auto tau = [&](const FinVec<D>& arg) {
        return tw.chart_forward(b, level, tw.chart_inverse(a, level, arg));
      };
      const int d = tw.dim(level);
      const int k = static_cast<int>(rng.uniform_int(1, d));
      const auto fd = directional_derivative<D>(tau, ybar, FinVec<D>::unit(k), kFdStep);
      std::vector<D> col(static_cast<std::size_t>(d), 0.0);
      for (int row = 1; row <= d; ++row) col[row - 1] = fiber_map.entry(row, k);
      const double rd = rel_diff(FinVec<D>::make(std::move(col)), fd);
      resid = std::max(resid, rd);
      const bool ok = rd <= kFdRelTol;
      if (!ok) cex = "foot=" + to_string(foot) + " column=" + std::to_string(k);
      return ok;
    });
  });

  r.check("derivative", "deriv.linear.exact", true, [](SplitMix64& rng, double& resid, std::string& cex) {
    const auto l = random_gl<D>(rng, 5, 3);
    const auto x = random_finvec<D>(rng, 5, 3);
    const auto v = random_finvec<D>(rng, 5, 3);
    const double h = rng.coin() ? 1e-2 : kFdStep;
    const auto fd = directional_derivative<D>(
        [&l](const FinVec<D>& arg) { return apply(l, arg); }, x, v, h);
    const double rd = rel_diff(fd, apply(l, v));
    resid = std::max(resid, rd);
    // truncation vanishes for linear maps; what is left is rounding, eps/h
    const bool ok = rd <= 64 * std::numeric_limits<double>::epsilon() / h;
    if (!ok) cex = "L=" + to_string(l) + " v=" + to_string(v);
    return ok;
  });

  r.check("derivative", "deriv.sqnorm", true, [](SplitMix64& rng, double& resid, std::string& cex) {
    const auto x = random_finvec<D>(rng, 6, 3);
    const auto v = random_finvec<D>(rng, 6, 3);
    const double fd = directional_derivative_scalar<D>(
        [](const FinVec<D>& arg) { return weak_inner(arg, arg); }, x, v, kFdStep);
    const double expected = 2.0 * weak_inner(x, v);
    const double err = std::fabs(fd - expected) / std::max(1.0, std::fabs(expected));
    resid = std::max(resid, err);
    const bool ok = err <= 1e-8;
    if (!ok) cex = "x=" + to_string(x) + " v=" + to_string(v);
    return ok;
  });
}

// ------------------------------------------------------------ dispatch ---

void run_one(const std::string& name, CheckRunner& r) {
  const bool rational = r.cfg.mode != ScalarMode::Float;  // Auto prefers exact arithmetic
  if (name == "group") {
    rational ? suite_group<Rational>(r) : suite_group<double>(r);
  } else if (name == "functorial") {
    rational ? suite_functorial<Rational>(r) : suite_functorial<double>(r);
  } else if (name == "charts") {
    rational ? suite_charts<Rational>(r) : suite_charts<double>(r);
  } else if (name == "cocycle") {
    suite_cocycle(r);
  } else if (name == "diagram") {
    rational ? suite_diagram<Rational>(r) : suite_diagram<double>(r);
  } else if (name == "tangency") {
    rational ? suite_tangency<Rational>(r) : suite_tangency<double>(r);
  } else if (name == "roundtrip") {
    rational ? suite_roundtrip<Rational>(r) : suite_roundtrip<double>(r);
  } else if (name == "derivative") {
    suite_derivative(r);
  } else {
    throw UnknownSuite("unknown suite '" + name + "'");
  }
}

const std::vector<std::string> kSuiteOrder = {"group",   "functorial", "charts",    "cocycle",
                                              "diagram", "tangency",   "roundtrip", "derivative"};

std::string dims_string(const SuiteConfig& cfg) {
  return std::to_string(cfg.dim_min) + ".." + std::to_string(cfg.dim_max);
}

}  // namespace

std::string to_string(ScalarMode mode) {
  switch (mode) {
    case ScalarMode::Auto: return "auto";
    case ScalarMode::Rational: return "rational";
    case ScalarMode::Float: return "float";
  }
  return "auto";
}

std::string to_string(OutputFormat format) {
  return format == OutputFormat::Json ? "json" : "text";
}

ScalarMode parse_mode(const std::string& text) {
  if (text == "auto") return ScalarMode::Auto;
  if (text == "rational") return ScalarMode::Rational;
  if (text == "float") return ScalarMode::Float;
  throw ConfigInvalid("unknown scalar mode '" + text + "' (want rational|float|auto)");
}

OutputFormat parse_format(const std::string& text) {
  if (text == "text") return OutputFormat::Text;
  if (text == "json") return OutputFormat::Json;
  throw ConfigInvalid("unknown output format '" + text + "' (want text|json)");
}

void parse_dims(const std::string& text, int& lo, int& hi) {
  const auto sep = text.find("..");
  try {
    if (sep == std::string::npos) {
      lo = hi = std::stoi(text);
      return;
    }
    lo = std::stoi(text.substr(0, sep));
    hi = std::stoi(text.substr(sep + 2));
  } catch (const std::exception&) {
    throw ConfigInvalid("bad dims range '" + text + "' (want e.g. 2..12)");
  }
}

void validate_config(const SuiteConfig& cfg) {
  if (!kSuites.count(cfg.suite)) throw UnknownSuite("unknown suite '" + cfg.suite + "'");
  if (!kTowers.count(cfg.tower)) throw UnknownTower("unknown tower '" + cfg.tower + "'");
  if (cfg.trials < 1) throw ConfigInvalid("trials must be >= 1");
  if (cfg.dim_min < 1) throw ConfigInvalid("dims lower bound must be >= 1");
  if (cfg.dim_min > cfg.dim_max) throw ConfigInvalid("dims range is empty");
  if (!(cfg.tol > 0)) throw ConfigInvalid("tol must be > 0");
  const bool needs_sphere = kSphereSuites.count(cfg.suite) > 0 || cfg.suite == "all";
  if (needs_sphere && cfg.tower == "euclidean")
    throw ConfigInvalid("suite '" + cfg.suite + "' needs a sphere tower");
  if (cfg.suite == "derivative" && cfg.mode == ScalarMode::Rational)
    throw ConfigInvalid("the derivative suite is float-only");
  if (cfg.tower != "euclidean" && cfg.dim_max < 2)
    throw ConfigInvalid("sphere towers need dims upper bound >= 2");
}

SuiteReport run_suite(const SuiteConfig& cfg) {
  validate_config(cfg);
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.suite = cfg.suite;
  report.config = cfg;
  CheckRunner runner{cfg, {}};
  if (cfg.suite == "all") {
    for (const auto& name : kSuiteOrder) run_one(name, runner);
  } else {
    run_one(cfg.suite, runner);
  }
  report.checks = std::move(runner.results);
  report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                            [](const CheckResult& c) { return c.failures == 0; });
  report.duration_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string report_to_json(const SuiteReport& report) {
  ordered_json j;
  j["suite"] = report.suite;
  j["config"] = ordered_json{{"tower", report.config.tower},
                             {"suite", report.config.suite},
                             {"dims", dims_string(report.config)},
                             {"trials", report.config.trials},
                             {"seed", report.config.seed},
                             {"tol", report.config.tol},
                             {"mode", to_string(report.config.mode)},
                             {"format", to_string(report.config.format)}};
  j["checks"] = ordered_json::array();
  for (const auto& c : report.checks) {
    ordered_json jc;
    jc["id"] = c.id;
    jc["trials"] = c.trials;
    jc["failures"] = c.failures;
    jc["max_residual"] = c.max_residual ? ordered_json(*c.max_residual) : ordered_json(nullptr);
    jc["counterexample"] =
        c.counterexample ? ordered_json(*c.counterexample) : ordered_json(nullptr);
    j["checks"].push_back(std::move(jc));
  }
  j["pass"] = report.pass;
  j["duration_ms"] = report.duration_ms;
  return j.dump(2) + "\n";
}

std::string report_to_text(const SuiteReport& report) {
  std::ostringstream out;
  out << "suite " << report.suite << " (tower=" << report.config.tower
      << ", dims=" << dims_string(report.config) << ", trials=" << report.config.trials
      << ", seed=" << report.config.seed << ", tol=" << report.config.tol
      << ", mode=" << to_string(report.config.mode) << ")\n";
  for (const auto& c : report.checks) {
    out << (c.failures == 0 ? "  [ok]   " : "  [FAIL] ") << c.id << ": trials=" << c.trials
        << " failures=" << c.failures;
    if (c.max_residual) out << " max_residual=" << *c.max_residual;
    if (c.counterexample) out << "\n         counterexample: " << *c.counterexample;
    out << "\n";
  }
  out << (report.pass ? "PASS" : "FAIL") << " (" << report.checks.size() << " checks, "
      << report.duration_ms << " ms)\n";
  return out.str();
}

std::vector<std::pair<std::string, std::string>> list_suites() {
  return {
      {"group", "GL(infinity) group axioms: associativity, identity, inverses, canonical form"},
      {"functorial", "bonding-map laws for the R^n and GL(R^n) systems; direct-limit engine laws"},
      {"charts", "stereographic chart compatibility with the tower inclusions and round trips"},
      {"cocycle", "fiber transition identity, inverses, and cocycle composition"},
      {"diagram", "trivialization diagram, projection square, chart-lift compatibility"},
      {"tangency", "intrinsic tangent orthogonality and chart independence"},
      {"roundtrip", "set-level bijection between lim TM_i and T lim M_i on samples"},
      {"derivative", "closed-form differentials against central finite differences"},
      {"all", "every suite above, in order"},
  };
}

}  // namespace indlim
