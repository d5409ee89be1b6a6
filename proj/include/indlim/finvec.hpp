#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "indlim/errors.hpp"
#include "indlim/scalar.hpp"

namespace indlim {

/// A finitely supported scalar sequence: one element of R^infinity.
///
/// The canonical form stores the shortest prefix (no trailing zeros), so
/// equality of canonical forms is the equality of the sequences and the
/// zero-padding inclusions between truncation levels act as the identity.
/// degree() is the length of that prefix; the zero vector has degree 0.
/// Components are addressed 1-based, matching the usual x_1, x_2, ... naming.
template <ScalarField S>
class FinVec {
 public:
  FinVec() = default;

  /// Canonicalizes: strips trailing zeros.
  static FinVec make(std::vector<S> coeffs) {
    while (!coeffs.empty() && scalar_traits<S>::is_zero(coeffs.back())) coeffs.pop_back();
    FinVec v;
    v.coeffs_ = std::move(coeffs);
    return v;
  }

  static FinVec make(std::initializer_list<S> coeffs) { return make(std::vector<S>(coeffs)); }

  /// Standard basis vector e_k (1-based).
  static FinVec unit(int k) {
    if (k < 1) throw IndexOutOfRange("unit vector index must be >= 1");
    std::vector<S> c(static_cast<std::size_t>(k), S(0));
    c.back() = S(1);
    return make(std::move(c));
  }

  static FinVec zero() { return {}; }

  int degree() const { return static_cast<int>(coeffs_.size()); }
  bool is_zero() const { return coeffs_.empty(); }

  /// Component x_k, 1-based; zero beyond the stored prefix.
  S at(int k) const {
    if (k < 1) throw IndexOutOfRange("component index must be >= 1");
    const auto idx = static_cast<std::size_t>(k - 1);
    return idx < coeffs_.size() ? coeffs_[idx] : S(0);
  }

  const std::vector<S>& coeffs() const { return coeffs_; }

  friend bool operator==(const FinVec& a, const FinVec& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const FinVec& a, const FinVec& b) { return !(a == b); }

 private:
  std::vector<S> coeffs_;
};

template <ScalarField S>
FinVec<S> add(const FinVec<S>& x, const FinVec<S>& y) {
  std::vector<S> out(std::max(x.coeffs().size(), y.coeffs().size()), S(0));
  for (std::size_t i = 0; i < x.coeffs().size(); ++i) out[i] = x.coeffs()[i];
  for (std::size_t i = 0; i < y.coeffs().size(); ++i) out[i] = out[i] + y.coeffs()[i];
  return FinVec<S>::make(std::move(out));
}

template <ScalarField S>
FinVec<S> scale(const S& c, const FinVec<S>& x) {
  std::vector<S> out;
  out.reserve(x.coeffs().size());
  for (const S& v : x.coeffs()) out.push_back(c * v);
  return FinVec<S>::make(std::move(out));
}

template <ScalarField S>
FinVec<S> sub(const FinVec<S>& x, const FinVec<S>& y) {
  return add(x, scale(S(-1), y));
}

template <ScalarField S>
FinVec<S> operator+(const FinVec<S>& x, const FinVec<S>& y) { return add(x, y); }
template <ScalarField S>
FinVec<S> operator-(const FinVec<S>& x, const FinVec<S>& y) { return sub(x, y); }
template <ScalarField S>
FinVec<S> operator*(const S& c, const FinVec<S>& x) { return scale(c, x); }

/// The weak inner product <x,y> = sum_i x_i y_i; the sum is finite because
/// the supports are.
template <ScalarField S>
S weak_inner(const FinVec<S>& x, const FinVec<S>& y) {
  const std::size_t n = std::min(x.coeffs().size(), y.coeffs().size());
  S acc(0);
  for (std::size_t i = 0; i < n; ++i) acc = acc + x.coeffs()[i] * y.coeffs()[i];
  return acc;
}

/// Zero-padding inclusion into R^ambient_dim. The identity on canonical
/// forms; exists to validate ambient bookkeeping in tower code.
template <ScalarField S>
FinVec<S> include(const FinVec<S>& x, int ambient_dim) {
  if (x.degree() > ambient_dim)
    throw AmbientTooSmall("include: vector of degree " + std::to_string(x.degree()) +
                          " into R^" + std::to_string(ambient_dim));
  return x;
}

/// Max over components of |x_k - y_k| as a double. Exact scalars convert for
/// reporting only; equality checks should use operator== instead.
template <ScalarField S>
double max_abs_diff(const FinVec<S>& x, const FinVec<S>& y) {
  const int n = std::max(x.degree(), y.degree());
  double m = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double d = scalar_traits<S>::to_double(scalar_traits<S>::abs(x.at(k) - y.at(k)));
    m = std::max(m, d);
  }
  return m;
}

template <ScalarField S>
std::string to_string(const FinVec<S>& x) {
  std::string out = "(";
  for (int k = 1; k <= x.degree(); ++k) {
    if (k > 1) out += ", ";
    out += scalar_traits<S>::str(x.at(k));
  }
  out += ")";
  return out;
}

template <ScalarField S>
std::ostream& operator<<(std::ostream& os, const FinVec<S>& x) {
  return os << to_string(x);
}

}  // namespace indlim
