#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls the library routine it is compared against.

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "adjfac/matrix.hpp"
#include "adjfac/matrix_io.hpp"
#include "adjfac/random.hpp"

namespace oracle {

using namespace adjfac;

/// Leibniz formula: sum over all permutations.
template <class S>
S leibniz_det(const Mat<S>& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  S total(0);
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    S term(1);
    for (int i = 0; i < n; ++i) term = term * a(i, perm[i]);
    total = (inversions % 2 == 0) ? S(total + term) : S(total - term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

template <class S>
Mat<S> delete_row_col(const Mat<S>& a, int row, int col) {
  const int n = static_cast<int>(a.rows());
  Mat<S> out(n - 1, n - 1);
  for (int i = 0, oi = 0; i < n; ++i) {
    if (i == row) continue;
    for (int j = 0, oj = 0; j < n; ++j) {
      if (j == col) continue;
      out(oi, oj++) = a(i, j);
    }
    ++oi;
  }
  return out;
}

/// Transposed cofactor matrix, each cofactor by Leibniz.
template <class S>
Mat<S> cofactor_adjugate(const Mat<S>& a) {
  const int n = static_cast<int>(a.rows());
  Mat<S> out(n, n);
  if (n == 1) {
    out(0, 0) = S(1);
    return out;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      S minor = leibniz_det(delete_row_col(a, j, i));
      out(i, j) = ((i + j) % 2 == 0) ? minor : S(S(0) - minor);
    }
  return out;
}

/// m-subsets of {0..n-1} in lexicographic order, generated by bitmask scan.
inline std::vector<std::vector<int>> subsets_lex(int n, int m) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1U << n); ++mask) {
    if (__builtin_popcount(mask) != m) continue;
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1U << i)) s.push_back(i);
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <class S>
Mat<S> minor_compound(const Mat<S>& a, int m) {
  const auto subs = subsets_lex(static_cast<int>(a.rows()), m);
  const auto k = static_cast<Eigen::Index>(subs.size());
  Mat<S> out(k, k);
  for (Eigen::Index r = 0; r < k; ++r)
    for (Eigen::Index c = 0; c < k; ++c) {
      Mat<S> sub(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) sub(i, j) = a(subs[r][i], subs[c][j]);
      out(r, c) = leibniz_det(sub);
    }
  return out;
}

/// Rank as the largest k with a nonzero k x k minor (small matrices only).
inline int brute_rank(const RatMatrix& a) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  for (int k = std::min(rows, cols); k > 0; --k) {
    for (const auto& rs : subsets_lex(rows, k))
      for (const auto& cs : subsets_lex(cols, k)) {
        RatMatrix sub(k, k);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) sub(i, j) = a(rs[i], cs[j]);
        if (sgn(leibniz_det(sub)) != 0) return k;
      }
  }
  return 0;
}

/// Term-by-term product accumulated in an ordered map.
inline Polynomial naive_product(const Polynomial& p, const Polynomial& q) {
  std::map<Monomial, Integer> acc;
  for (const Term& a : p.terms())
    for (const Term& b : q.terms()) acc[a.monomial * b.monomial] += a.coeff * b.coeff;
  std::vector<Term> terms;
  for (auto& [m, c] : acc)
    if (sgn(c) != 0) terms.push_back(Term{m, c});
  return Polynomial::from_terms(std::move(terms), 0, std::max(p.dimension(), q.dimension()));
}

/// Random polynomial in the n*n matrix variables (and optionally t).
inline Polynomial random_polynomial(int n, Rng& rng, int max_terms = 6, int max_degree = 3, bool with_t = false) {
  std::vector<Term> terms;
  const int count = uniform_int(rng, 0, max_terms);
  for (int k = 0; k < count; ++k) {
    Monomial m;
    const int degree = uniform_int(rng, 0, max_degree);
    for (int d = 0; d < degree; ++d) {
      std::size_t slot = static_cast<std::size_t>(uniform_int(rng, 0, n * n - 1));
      if (with_t && uniform_int(rng, 0, 3) == 0) slot = kTSlot;
      m.set_exponent(slot, m.exponent(slot) + 1);
    }
    terms.push_back(Term{m, Integer(uniform_int(rng, -9, 9))});
  }
  return Polynomial::from_terms(std::move(terms), 0, n);
}

inline std::map<std::size_t, Rational> random_rational_point(int n, Rng& rng, bool with_t = false) {
  std::map<std::size_t, Rational> point;
  for (int s = 0; s < n * n; ++s)
    point[static_cast<std::size_t>(s)] = Rational(uniform_int(rng, -7, 7), uniform_int(rng, 1, 4));
  if (with_t) point[kTSlot] = Rational(uniform_int(rng, -7, 7), uniform_int(rng, 1, 4));
  for (auto& [slot, v] : point) v.canonicalize();
  return point;
}

inline PolyMatrix generic(int n) {
  PolyMatrix x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = Polynomial::x(n, i + 1, j + 1);
  return x;
}

inline Polynomial power(const Polynomial& p, unsigned e) {
  Polynomial out(1);
  for (unsigned k = 0; k < e; ++k) out = naive_product(out, p);
  return out;
}

}  // namespace oracle
