#include "adjfac/matrix.hpp"

#include <numeric>

namespace adjfac {

PolyMatrix to_poly(const IntMatrix& a) {
  return map_entries<Polynomial>(a, [](const Integer& v) { return Polynomial(v); });
}

RatMatrix to_rational(const IntMatrix& a) {
  return map_entries<Rational>(a, [](const Integer& v) { return Rational(v); });
}

FpMatrix to_fp(const IntMatrix& a, std::uint64_t p) {
  return map_entries<Fp>(a, [p](const Integer& v) { return Fp::from_integer(v, p); });
}

PolyMatrix reduce_mod(const PolyMatrix& a, std::uint64_t p) {
  return map_entries<Polynomial>(a, [p](const Polynomial& v) { return v.reduce_mod(p); });
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::vector<IndexSubset> index_subsets(int n, int m) {
  if (m < 0 || m > n) throw std::out_of_range("index_subsets: size out of range");
  std::vector<IndexSubset> out;
  std::vector<int> current(static_cast<std::size_t>(m));
  std::iota(current.begin(), current.end(), 0);
  for (;;) {
    out.push_back(IndexSubset{current, out.size()});
    // Advance to the lexicographic successor.
    int i = m - 1;
    while (i >= 0 && current[static_cast<std::size_t>(i)] == n - m + i) --i;
    if (i < 0) break;
    ++current[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j) current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::size_t subset_position(const std::vector<int>& indices, int n) {
  // Count subsets that precede `indices` lexicographically.
  const int m = static_cast<int>(indices.size());
  std::size_t pos = 0;
  int prev = -1;
  for (int k = 0; k < m; ++k) {
    const int cur = indices[static_cast<std::size_t>(k)];
    if (cur <= prev || cur >= n) throw std::invalid_argument("subset_position: not a strictly increasing subset");
    for (int v = prev + 1; v < cur; ++v) pos += binomial(n - v - 1, m - k - 1);
    prev = cur;
  }
  return pos;
}

std::vector<int> complement(const std::vector<int>& indices, int n) {
  std::vector<int> out;
  std::size_t k = 0;
  for (int v = 0; v < n; ++v) {
    if (k < indices.size() && indices[k] == v) {
      ++k;
    } else {
      out.push_back(v);
    }
  }
  return out;
}

Polynomial char_poly_shifted(const IntMatrix& a) {
  detail::require_square(a.rows(), a.cols(), "char_poly_shifted");
  PolyMatrix shifted = to_poly(a);
  for (Eigen::Index i = 0; i < a.rows(); ++i) shifted(i, i) += Polynomial::t();
  return det_laplace(shifted);
}

Polynomial char_poly_shifted(const RatMatrix& a) {
  detail::require_square(a.rows(), a.cols(), "char_poly_shifted");
  Integer q = 1;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) q = lcm(q, a(i, j).get_den());
  PolyMatrix shifted(a.rows(), a.cols());
  const Polynomial qt = Polynomial::t().scaled(q);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const Rational v = a(i, j) * q;
      shifted(i, j) = Polynomial(Integer(v.get_num()));
    }
    shifted(i, i) += qt;
  }
  return det_laplace(shifted);
}

}  // namespace adjfac
