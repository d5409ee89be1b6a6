#pragma once

#include <algorithm>
#include <string>

#include "indlim/dirlim.hpp"
#include "indlim/finvec.hpp"
#include "indlim/glinf.hpp"
#include "indlim/tangent.hpp"
#include "indlim/tower.hpp"

namespace indlim {

/// The R^n tower as a directed system: objects R^1 .. R^max_index with the
/// zero-padding inclusions as bonding maps.
template <ScalarField S>
DirectedSystem<FinVec<S>> finvec_system(int max_index) {
  DirectedSystem<FinVec<S>> sys;
  sys.name = "R^n";
  sys.min_index = 1;
  sys.max_index = max_index;
  sys.bond = [](int i, int j, const FinVec<S>& x) {
    if (j < i) throw IndexOutOfRange("R^n bond with j < i");
    include(x, i);  // x must already live in R^i
    return include(x, j);
  };
  sys.equal = [](const FinVec<S>& a, const FinVec<S>& b) { return a == b; };
  sys.contains = [](int i, const FinVec<S>& x) { return x.degree() <= i; };
  sys.min_level = [](const FinVec<S>& x) { return std::max(1, x.degree()); };
  sys.injective = true;
  return sys;
}

/// GL(R^1) -> GL(R^2) -> ... with the corner embeddings.
template <ScalarField S>
DirectedSystem<GLInfElement<S>> glinf_system(int max_index) {
  DirectedSystem<GLInfElement<S>> sys;
  sys.name = "GL(R^n)";
  sys.min_index = 1;
  sys.max_index = max_index;
  sys.bond = [](int i, int j, const GLInfElement<S>& g) {
    if (j < i) throw IndexOutOfRange("GL bond with j < i");
    g.embed(i);  // g must already live in GL(R^i)
    return g.embed(j);
  };
  sys.equal = [](const GLInfElement<S>& a, const GLInfElement<S>& b) { return a == b; };
  sys.contains = [](int i, const GLInfElement<S>& g) { return g.size() <= i; };
  sys.min_level = [](const GLInfElement<S>& g) { return std::max(1, g.size()); };
  sys.injective = true;
  return sys;
}

/// TM_1 -> TM_2 -> ... over one chart family of a tower, with the tangent
/// bonding maps in coordinates as bonds. Used by the Proposition-2 class
/// checks.
template <ScalarField S>
DirectedSystem<TangentRep<S>> tangent_system(const ManifoldTower<S>& tower) {
  DirectedSystem<TangentRep<S>> sys;
  sys.name = "TM_i(" + tower.name() + ")";
  sys.min_index = tower.min_level();
  sys.max_index = tower.max_level();
  sys.bond = [](int i, int j, const TangentRep<S>& rep) {
    if (rep.level != i) throw IndexOutOfRange("tangent bond: rep level differs from index");
    return phi_T(rep, j);
  };
  sys.equal = [](const TangentRep<S>& a, const TangentRep<S>& b) { return a == b; };
  sys.contains = [&tower](int i, const TangentRep<S>& rep) {
    return std::max(rep.base.degree(), rep.vel.degree()) <= tower.dim(i);
  };
  sys.injective = true;
  return sys;
}

}  // namespace indlim
