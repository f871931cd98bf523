#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "adjfac/matrix.hpp"

namespace adjfac {

using Rng = std::mt19937_64;

/// Generator for trial `index` of a run seeded with `seed`.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Entries uniform in [-bound, bound].
inline IntMatrix random_int_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, int bound = 5) {
  IntMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = uniform_int(rng, -bound, bound);
  return out;
}

/// Entries uniform in F_p.
inline FpMatrix random_fp_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t p, Rng& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
  FpMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = Fp(static_cast<std::int64_t>(dist(rng)), p);
  return out;
}

/// A product U of `steps` elementary operations "row i += c * row j" with
/// c in [-bound, bound], together with its inverse. det(U) = 1.
template <class S>
std::pair<Mat<S>, Mat<S>> random_unimodular_pair(Eigen::Index n, Rng& rng, int steps, int bound = 3) {
  Mat<S> u = Mat<S>::Identity(n, n);
  Mat<S> u_inv = Mat<S>::Identity(n, n);
  if (n < 2) return {u, u_inv};
  const int last = static_cast<int>(n) - 1;
  for (int s = 0; s < steps; ++s) {
    const int i = uniform_int(rng, 0, last);
    int j = uniform_int(rng, 0, last - 1);
    if (j >= i) ++j;
    int c = uniform_int(rng, -bound, bound - 1);
    if (c >= 0) ++c;
    const S cs(c);
    // U <- E U  and  U^-1 <- U^-1 E^-1, with E = I + c e_i e_j^T.
    for (Eigen::Index k = 0; k < n; ++k) u(i, k) = u(i, k) + cs * u(j, k);
    for (Eigen::Index k = 0; k < n; ++k) u_inv(k, j) = u_inv(k, j) - cs * u_inv(k, i);
  }
  return {u, u_inv};
}

}  // namespace adjfac
