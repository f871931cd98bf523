#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "adjfac/polynomial.hpp"
#include "adjfac/scalar.hpp"

namespace adjfac {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using PolyMatrix = Mat<Polynomial>;
using IntMatrix = Mat<Integer>;
using RatMatrix = Mat<Rational>;
using FpMatrix = Mat<Fp>;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Running sum of products. The polynomial specialization defers all work to
/// one sum_of_products merge in take(); it holds references, so operands must
/// outlive the call to take().
template <class S>
class SumOfProducts {
 public:
  void add(const S& a, bool negate = false) {
    if (negate) {
      sum_ -= a;
    } else {
      sum_ += a;
    }
  }
  void add_product(const S& a, const S& b, bool negate = false) {
    if (is_zero(a) || is_zero(b)) return;
    add(a * b, negate);
  }
  S take() { return std::exchange(sum_, S(0)); }

 private:
  S sum_ = S(0);
};

template <>
class SumOfProducts<Polynomial> {
 public:
  void add(const Polynomial& a, bool negate = false) { terms_.push_back(ProductTerm{&a, nullptr, negate}); }
  void add_product(const Polynomial& a, const Polynomial& b, bool negate = false) {
    terms_.push_back(ProductTerm{&a, &b, negate});
  }
  Polynomial take() {
    Polynomial out = sum_of_products(terms_);
    terms_.clear();
    return out;
  }

 private:
  std::vector<ProductTerm> terms_;
};

template <class S>
Mat<S> mat_mul(const Mat<S>& a, const Mat<S>& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("mat_mul: inner dimensions differ");
  Mat<S> out(a.rows(), b.cols());
  SumOfProducts<S> acc;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      for (Eigen::Index k = 0; k < a.cols(); ++k) acc.add_product(a(i, k), b(k, j));
      out(i, j) = acc.take();
    }
  }
  return out;
}

template <class S, class... Rest>
Mat<S> mat_mul(const Mat<S>& a, const Mat<S>& b, const Rest&... rest) {
  return mat_mul(mat_mul(a, b), rest...);
}

template <class S>
Mat<S> transpose(const Mat<S>& a) {
  return a.transpose();
}

template <class S>
Mat<S> scalar_matrix(Eigen::Index n, const S& value) {
  Mat<S> out = Mat<S>::Constant(n, n, S(0));
  for (Eigen::Index i = 0; i < n; ++i) out(i, i) = value;
  return out;
}

template <class S>
Mat<S> scaled(const Mat<S>& a, const S& c) {
  Mat<S> out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) * c;
  return out;
}

template <class S>
bool is_zero_matrix(const Mat<S>& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!is_zero(a(i, j))) return false;
  return true;
}

/// Exact entrywise equality (Eigen's operator== would build an expression).
template <class S>
bool equal(const Mat<S>& a, const Mat<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!(a(i, j) == b(i, j))) return false;
  return true;
}

template <class To, class From, class F>
Mat<To> map_entries(const Mat<From>& a, F&& f) {
  Mat<To> out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = f(a(i, j));
  return out;
}

PolyMatrix to_poly(const IntMatrix& a);
RatMatrix to_rational(const IntMatrix& a);
FpMatrix to_fp(const IntMatrix& a, std::uint64_t p);
PolyMatrix reduce_mod(const PolyMatrix& a, std::uint64_t p);

// ---------------------------------------------------------------------------
// Index subsets (rows/columns of minors), lexicographic order.

std::uint64_t binomial(int n, int k);

struct IndexSubset {
  std::vector<int> indices;  // 0-based, strictly increasing
  std::size_t position = 0;  // rank among all m-subsets of {0..n-1}
};

/// All m-subsets of {0..n-1} in lexicographic order.
std::vector<IndexSubset> index_subsets(int n, int m);
std::size_t subset_position(const std::vector<int>& indices, int n);
std::vector<int> complement(const std::vector<int>& indices, int n);

template <class S>
Mat<S> submatrix(const Mat<S>& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  Mat<S> out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(rows[i], cols[j]);
  return out;
}

// ---------------------------------------------------------------------------
// Determinants and adjugate

namespace detail {

inline void require_square(Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (rows != cols) throw DimensionMismatch(std::string(what) + ": matrix is not square");
}

inline int position_in(std::uint32_t mask, int j) { return std::popcount(mask & ((1U << j) - 1U)); }

/// top[mask]: minor on rows 0..k-1 and the k columns of `mask`.
template <class S>
std::vector<S> top_minors(const Mat<S>& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<S> table(std::size_t{1} << n, S(0));
  table[0] = S(1);
  SumOfProducts<S> acc;
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    const int row = std::popcount(mask) - 1;
    for (int j = 0; j < n; ++j) {
      if ((mask & (1U << j)) == 0) continue;
      const bool negate = ((row + position_in(mask, j)) & 1) != 0;
      acc.add_product(a(row, j), table[mask & ~(1U << j)], negate);
    }
    table[mask] = acc.take();
  }
  return table;
}

/// bottom[mask]: minor on the last k rows and the k columns of `mask`.
template <class S>
std::vector<S> bottom_minors(const Mat<S>& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<S> table(std::size_t{1} << n, S(0));
  table[0] = S(1);
  SumOfProducts<S> acc;
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    const int row = n - std::popcount(mask);
    for (int j = 0; j < n; ++j) {
      if ((mask & (1U << j)) == 0) continue;
      const bool negate = (position_in(mask, j) & 1) != 0;
      acc.add_product(a(row, j), table[mask & ~(1U << j)], negate);
    }
    table[mask] = acc.take();
  }
  return table;
}

}  // namespace detail

/// Laplace expansion with every minor on the leading rows memoized by its
/// column subset (2^n table).
template <class S>
S det_laplace(const Mat<S>& a) {
  detail::require_square(a.rows(), a.cols(), "det_laplace");
  if (a.rows() > 24) throw std::invalid_argument("det_laplace: dimension too large for the subset table");
  if (a.rows() == 0) return S(1);
  const auto table = detail::top_minors(a);
  return table.back();
}

/// Fraction-free elimination; every intermediate division is exact in an
/// integral domain.
template <class S>
S det_bareiss(Mat<S> m) {
  detail::require_square(m.rows(), m.cols(), "det_bareiss");
  const Eigen::Index n = m.rows();
  if (n == 0) return S(1);
  S previous(1);
  bool negate = false;
  SumOfProducts<S> acc;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (is_zero(m(k, k))) {
      Eigen::Index swap = k + 1;
      while (swap < n && is_zero(m(swap, k))) ++swap;
      if (swap == n) return S(0);
      m.row(k).swap(m.row(swap));
      negate = !negate;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        acc.add_product(m(k, k), m(i, j));
        acc.add_product(m(i, k), m(k, j), true);
        m(i, j) = exact_quotient(acc.take(), previous);
      }
    }
    previous = m(k, k);
  }
  S result = m(n - 1, n - 1);
  if (negate) result = S(0) - result;
  return result;
}

/// Classical adjoint: entry (i, j) is (-1)^(i+j) times the minor deleting
/// row j and column i. Every cofactor is assembled from the two memo tables
/// of leading and trailing row minors by a generalized Laplace expansion.
/// The 1x1 adjugate is [[1]].
template <class S>
Mat<S> adjugate(const Mat<S>& a) {
  detail::require_square(a.rows(), a.cols(), "adjugate");
  const int n = static_cast<int>(a.rows());
  if (n == 0) throw std::invalid_argument("adjugate: empty matrix");
  if (n > 24) throw std::invalid_argument("adjugate: dimension too large for the subset table");
  const auto top = detail::top_minors(a);
  const auto bottom = detail::bottom_minors(a);
  const std::uint32_t full = (1U << n) - 1U;
  Mat<S> out(n, n);
  SumOfProducts<S> acc;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      // Minor M(r, c): rows other than r, columns other than c. Its first r
      // rows come from `top`, the remaining n-1-r rows from `bottom`.
      const std::uint32_t cols = full & ~(1U << c);
      const int row_sign = r * (r + 1) / 2;
      for (std::uint32_t sub = cols;; sub = (sub - 1) & cols) {
        if (std::popcount(sub) == r) {
          int col_sign = 0;
          for (int j = 0; j < n; ++j)
            if ((sub & (1U << j)) != 0) col_sign += (j < c ? j + 1 : j);
          const bool negate = ((row_sign + col_sign + r + c) & 1) != 0;
          acc.add_product(top[sub], bottom[cols & ~sub], negate);
        }
        if (sub == 0) break;
      }
      out(c, r) = acc.take();
    }
  }
  return out;
}

/// m-th compound: C(n,m) x C(n,m) matrix of m x m minors, rows and columns
/// indexed by lexicographically ordered subsets.
template <class S>
Mat<S> compound(const Mat<S>& a, int m) {
  detail::require_square(a.rows(), a.cols(), "compound");
  const int n = static_cast<int>(a.rows());
  if (m < 1 || m > n) throw std::out_of_range("compound: order must lie in [1, n]");
  const auto subsets = index_subsets(n, m);
  const auto size = static_cast<Eigen::Index>(subsets.size());
  Mat<S> out(size, size);
  for (const auto& rows : subsets)
    for (const auto& cols : subsets)
      out(static_cast<Eigen::Index>(rows.position), static_cast<Eigen::Index>(cols.position)) =
          det_laplace(submatrix(a, rows.indices, cols.indices));
  return out;
}

/// Complementary compound D: entry (S, T) is (-1)^(sum S + sum T) times the
/// minor on the complementary rows and columns, so compound(a, m) * D^T = det(a) I.
template <class S>
Mat<S> complementary_compound(const Mat<S>& a, int m) {
  detail::require_square(a.rows(), a.cols(), "complementary_compound");
  const int n = static_cast<int>(a.rows());
  if (m < 1 || m > n) throw std::out_of_range("complementary_compound: order must lie in [1, n]");
  const auto subsets = index_subsets(n, m);
  const auto size = static_cast<Eigen::Index>(subsets.size());
  auto index_sum = [](const std::vector<int>& v) {
    int s = 0;
    for (int i : v) s += i;
    return s;
  };
  Mat<S> out(size, size);
  for (const auto& rows : subsets) {
    for (const auto& cols : subsets) {
      S minor = det_laplace(submatrix(a, complement(rows.indices, n), complement(cols.indices, n)));
      if (((index_sum(rows.indices) + index_sum(cols.indices)) & 1) != 0) minor = S(0) - minor;
      out(static_cast<Eigen::Index>(rows.position), static_cast<Eigen::Index>(cols.position)) = std::move(minor);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Field-domain elimination (Rational, Fp)

template <class S>
inline constexpr bool is_field_v = std::is_same_v<S, Rational> || std::is_same_v<S, Fp>;

template <class S>
struct RowEchelon {
  Mat<S> reduced;             // reduced row echelon form
  std::vector<int> pivots;    // pivot column of each nonzero row
  int rank() const { return static_cast<int>(pivots.size()); }
};

/// Gauss-Jordan elimination; the pivot is the first nonzero entry scanning
/// columns left to right.
template <class S>
RowEchelon<S> row_echelon(Mat<S> m) {
  static_assert(is_field_v<S>, "row_echelon needs a field; specialize polynomial matrices first");
  RowEchelon<S> out;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < m.cols() && r < m.rows(); ++c) {
    Eigen::Index p = r;
    while (p < m.rows() && is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    if (p != r) m.row(p).swap(m.row(r));
    const S inv = S(1) / m(r, c);
    for (Eigen::Index j = c; j < m.cols(); ++j) m(r, j) = m(r, j) * inv;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      const S f = m(i, c);
      for (Eigen::Index j = c; j < m.cols(); ++j) m(i, j) = m(i, j) - f * m(r, j);
    }
    out.pivots.push_back(static_cast<int>(c));
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

/// Determinant by Gaussian elimination; one inversion per pivot.
template <class S>
S det_field(Mat<S> m) {
  static_assert(is_field_v<S>, "det_field needs a field");
  detail::require_square(m.rows(), m.cols(), "det_field");
  const Eigen::Index n = m.rows();
  S det(1);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && is_zero(m(p, c))) ++p;
    if (p == n) return S(0);
    if (p != c) {
      m.row(p).swap(m.row(c));
      det = S(0) - det;
    }
    det = det * m(c, c);
    const S inv = S(1) / m(c, c);
    for (Eigen::Index i = c + 1; i < n; ++i) {
      if (is_zero(m(i, c))) continue;
      const S f = m(i, c) * inv;
      for (Eigen::Index j = c + 1; j < n; ++j) m(i, j) = m(i, j) - f * m(c, j);
    }
  }
  return det;
}

template <class S>
int rank_exact(const Mat<S>& a) {
  return row_echelon(a).rank();
}

/// Columns of `a` at the pivot positions: a basis of its column space.
template <class S>
Mat<S> column_space_basis(const Mat<S>& a) {
  const auto ech = row_echelon(a);
  Mat<S> out(a.rows(), ech.rank());
  for (int k = 0; k < ech.rank(); ++k) out.col(k) = a.col(ech.pivots[static_cast<std::size_t>(k)]);
  return out;
}

template <class S>
Mat<S> nullspace_basis(const Mat<S>& a) {
  const auto ech = row_echelon(a);
  std::vector<bool> is_pivot(static_cast<std::size_t>(a.cols()), false);
  for (int p : ech.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<Vec<S>> basis;
  for (Eigen::Index free = 0; free < a.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    Vec<S> v = Vec<S>::Constant(a.cols(), S(0));
    v(free) = S(1);
    for (int k = 0; k < ech.rank(); ++k) v(ech.pivots[static_cast<std::size_t>(k)]) = S(0) - ech.reduced(k, free);
    basis.push_back(std::move(v));
  }
  Mat<S> out(a.cols(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = basis[k];
  return out;
}

/// Some x with a x = b, or nullopt when the system is inconsistent.
template <class S>
std::optional<Mat<S>> solve(const Mat<S>& a, const Mat<S>& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("solve: row counts differ");
  Mat<S> aug(a.rows(), a.cols() + b.cols());
  aug << a, b;
  const auto ech = row_echelon(aug);
  Mat<S> x = Mat<S>::Constant(a.cols(), b.cols(), S(0));
  for (int k = 0; k < ech.rank(); ++k) {
    const int p = ech.pivots[static_cast<std::size_t>(k)];
    if (p >= a.cols()) return std::nullopt;
    x.row(p) = ech.reduced.block(k, a.cols(), 1, b.cols());
  }
  return x;
}

template <class S>
std::optional<Mat<S>> inverse(const Mat<S>& a) {
  detail::require_square(a.rows(), a.cols(), "inverse");
  if (rank_exact(a) != a.rows()) return std::nullopt;
  return solve(a, Mat<S>(Mat<S>::Identity(a.rows(), a.cols())));
}

// ---------------------------------------------------------------------------
// Characteristic polynomial

/// det(t I + a) as a monic polynomial in t.
Polynomial char_poly_shifted(const IntMatrix& a);
/// det(q (t I + a)) with q the least common denominator of a: an integral
/// polynomial with the same roots and t-adic valuation as det(t I + a).
Polynomial char_poly_shifted(const RatMatrix& a);

}  // namespace adjfac
