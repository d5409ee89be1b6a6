#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "indlim/errors.hpp"
#include "indlim/finvec.hpp"
#include "indlim/scalar.hpp"

namespace indlim {

namespace detail {

/// Gauss-Jordan inversion of an n x n row-major block. Exact scalars use
/// full pivoting (largest remaining entry, column swaps tracked); floats use
/// partial pivoting with the given pivot floor. Returns nothing when no
/// acceptable pivot exists.
template <ScalarField S>
std::optional<std::vector<S>> invert_dense(std::vector<S> a, int n, double pivot_floor) {
  std::vector<S> inv(static_cast<std::size_t>(n) * n, S(0));
  for (int i = 0; i < n; ++i) inv[i * n + i] = S(1);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  auto absval = [](const S& v) { return scalar_traits<S>::abs(v); };

  for (int k = 0; k < n; ++k) {
    int pr = -1, pc = -1;
    if constexpr (scalar_traits<S>::is_exact) {
      S best(0);
      for (int r = k; r < n; ++r)
        for (int c = k; c < n; ++c) {
          S m = absval(a[r * n + c]);
          if (!(m == S(0)) && (pr < 0 || best < m)) { best = m; pr = r; pc = c; }
        }
      if (pr < 0) return std::nullopt;
    } else {
      double best = 0.0;
      for (int r = k; r < n; ++r) {
        const double m = scalar_traits<S>::to_double(absval(a[r * n + k]));
        if (m > best) { best = m; pr = r; }
      }
      pc = k;
      if (pr < 0 || best <= pivot_floor) return std::nullopt;
    }
    if (pr != k) {
      for (int c = 0; c < n; ++c) {
        std::swap(a[k * n + c], a[pr * n + c]);
        std::swap(inv[k * n + c], inv[pr * n + c]);
      }
    }
    if (pc != k) {
      for (int r = 0; r < n; ++r) std::swap(a[r * n + k], a[r * n + pc]);
      std::swap(perm[k], perm[pc]);
    }
    const S pv = a[k * n + k];
    for (int c = 0; c < n; ++c) {
      a[k * n + c] = a[k * n + c] / pv;
      inv[k * n + c] = inv[k * n + c] / pv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == k) continue;
      const S f = a[r * n + k];
      if (scalar_traits<S>::is_zero(f)) continue;
      for (int c = 0; c < n; ++c) {
        a[r * n + c] = a[r * n + c] - f * a[k * n + c];
        inv[r * n + c] = inv[r * n + c] - f * inv[k * n + c];
      }
    }
  }

  // Column swaps permuted the variables; undo on the way out.
  std::vector<S> out(static_cast<std::size_t>(n) * n, S(0));
  for (int k = 0; k < n; ++k)
    for (int c = 0; c < n; ++c) out[perm[k] * n + c] = inv[k * n + c];
  return out;
}

}  // namespace detail

/// An element of GL(infinity): an invertible matrix of countable size equal
/// to the identity outside a finite leading block. Canonical form trims
/// every trailing row/column pair that already matches the identity pattern,
/// so equality is plain comparison and embedding into a larger ambient space
/// is the identity. The group identity is the empty block (size 0).
template <ScalarField S>
class GLInfElement {
 public:
  GLInfElement() = default;

  static GLInfElement identity() { return {}; }

  /// Builds the canonical element with the given leading block.
  /// Throws Singular when the block is not invertible (exact zero
  /// determinant, or a pivot below 1e-12 * max|entry| for floats).
  static GLInfElement from_block(const std::vector<std::vector<S>>& rows) {
    const int n = static_cast<int>(rows.size());
    std::vector<S> a;
    a.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != n)
        throw Error("from_block: matrix must be square");
      for (const S& v : row) a.push_back(v);
    }
    if (!detail::invert_dense<S>(a, n, pivot_floor(a)))
      throw Singular("from_block: singular block of size " + std::to_string(n));
    GLInfElement g;
    g.a_ = std::move(a);
    g.n_ = n;
    g.canonicalize();
    return g;
  }

  /// Size of the canonical leading block.
  int size() const { return n_; }

  /// Entry (r, c), 1-based, following the identity pattern beyond the block.
  S entry(int r, int c) const {
    if (r < 1 || c < 1) throw IndexOutOfRange("matrix entry indices are 1-based");
    if (r <= n_ && c <= n_) return a_[(r - 1) * static_cast<std::size_t>(n_) + (c - 1)];
    return r == c ? S(1) : S(0);
  }

  /// The leading m x m block as rows, m >= size().
  std::vector<std::vector<S>> block_rows(int m = -1) const {
    if (m < 0) m = n_;
    if (m < n_) throw AmbientTooSmall("block_rows: m below canonical size");
    std::vector<std::vector<S>> rows(m, std::vector<S>(m, S(0)));
    for (int r = 1; r <= m; ++r)
      for (int c = 1; c <= m; ++c) rows[r - 1][c - 1] = entry(r, c);
    return rows;
  }

  friend bool operator==(const GLInfElement& a, const GLInfElement& b) {
    return a.n_ == b.n_ && a.a_ == b.a_;
  }
  friend bool operator!=(const GLInfElement& a, const GLInfElement& b) { return !(a == b); }

  /// GL(R^n) -> GL(R^m): the identity on canonical elements, with the
  /// ambient size validated.
  GLInfElement embed(int m) const {
    if (m < n_)
      throw AmbientTooSmall("embed: GL element of size " + std::to_string(n_) + " into GL(R^" +
                            std::to_string(m) + ")");
    return *this;
  }

  friend GLInfElement compose(const GLInfElement& g, const GLInfElement& h) {
    const int m = std::max(g.n_, h.n_);
    GLInfElement out;
    out.n_ = m;
    out.a_.assign(static_cast<std::size_t>(m) * m, S(0));
    for (int r = 1; r <= m; ++r)
      for (int c = 1; c <= m; ++c) {
        S acc(0);
        for (int k = 1; k <= m; ++k) acc = acc + g.entry(r, k) * h.entry(k, c);
        out.a_[(r - 1) * static_cast<std::size_t>(m) + (c - 1)] = acc;
      }
    out.canonicalize();
    return out;
  }

  friend GLInfElement inverse(const GLInfElement& g) {
    auto inv = detail::invert_dense<S>(g.a_, g.n_, pivot_floor(g.a_));
    if (!inv)
      throw NumericallySingular("inverse: pivot underflow at size " + std::to_string(g.n_));
    GLInfElement out;
    out.a_ = std::move(*inv);
    out.n_ = g.n_;
    out.canonicalize();
    return out;
  }

  /// Action on R^infinity: the block acts on the leading size() coordinates,
  /// everything beyond passes through unchanged.
  friend FinVec<S> apply(const GLInfElement& g, const FinVec<S>& v) {
    const int n = g.n_;
    const int m = std::max(n, v.degree());
    std::vector<S> out(static_cast<std::size_t>(m), S(0));
    for (int r = 1; r <= n; ++r) {
      S acc(0);
      for (int c = 1; c <= n; ++c) acc = acc + g.entry(r, c) * v.at(c);
      out[r - 1] = acc;
    }
    for (int r = n + 1; r <= m; ++r) out[r - 1] = v.at(r);
    return FinVec<S>::make(std::move(out));
  }

 private:
  static double pivot_floor(const std::vector<S>& a) {
    if constexpr (scalar_traits<S>::is_exact) return 0.0;
    double mx = 0.0;
    for (const S& v : a) mx = std::max(mx, scalar_traits<S>::to_double(scalar_traits<S>::abs(v)));
    return 1e-12 * mx;
  }

  bool identity_cross(int i) const {
    // row i and column i of the leading i x i ... n x n corner match e_i
    for (int c = 1; c <= n_; ++c) {
      const S want = (c == i) ? S(1) : S(0);
      if (!(a_[(i - 1) * static_cast<std::size_t>(n_) + (c - 1)] == want)) return false;
    }
    for (int r = 1; r <= n_; ++r) {
      const S want = (r == i) ? S(1) : S(0);
      if (!(a_[(r - 1) * static_cast<std::size_t>(n_) + (i - 1)] == want)) return false;
    }
    return true;
  }

  void canonicalize() {
    int k = n_;
    while (k > 0 && identity_cross(k)) --k;
    if (k == n_) return;
    std::vector<S> trimmed;
    trimmed.reserve(static_cast<std::size_t>(k) * k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) trimmed.push_back(a_[r * static_cast<std::size_t>(n_) + c]);
    a_ = std::move(trimmed);
    n_ = k;
  }

  std::vector<S> a_;  // row-major n_ x n_
  int n_ = 0;
};

template <ScalarField S>
std::string to_string(const GLInfElement<S>& g) {
  std::string out = "[";
  for (int r = 1; r <= g.size(); ++r) {
    if (r > 1) out += "; ";
    for (int c = 1; c <= g.size(); ++c) {
      if (c > 1) out += ", ";
      out += scalar_traits<S>::str(g.entry(r, c));
    }
  }
  out += "]";
  return out;
}

/// Max entrywise |g - h| over the common extended block, as a double.
template <ScalarField S>
double max_abs_diff(const GLInfElement<S>& g, const GLInfElement<S>& h) {
  const int m = std::max(g.size(), h.size());
  double mx = 0.0;
  for (int r = 1; r <= m; ++r)
    for (int c = 1; c <= m; ++c) {
      const double d =
          scalar_traits<S>::to_double(scalar_traits<S>::abs(g.entry(r, c) - h.entry(r, c)));
      mx = std::max(mx, d);
    }
  return mx;
}

}  // namespace indlim
