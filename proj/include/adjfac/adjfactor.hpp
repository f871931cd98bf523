#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "adjfac/matrix.hpp"
#include "adjfac/matrix_io.hpp"

namespace adjfac {

/// A proved identity failed to hold: an implementation defect, never an
/// expected outcome.
class TheoremViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline constexpr int kDefaultSymbolicLimit = 6;

/// Largest n accepted for fully symbolic work.
int symbolic_limit(bool allow_large);

struct GenericContext {
  int n = 0;
  PolyMatrix X;
  Polynomial detX;
  PolyMatrix adjX;
};

/// X = (x_i_j) with det and adjugate; X adj(X) = det(X) I is checked before
/// returning. Throws std::out_of_range unless 1 <= n <= symbolic_limit.
GenericContext make_generic(int n, bool allow_large = false);

/// Context for an arbitrary square polynomial matrix in place of X.
GenericContext make_context(const PolyMatrix& x);

/// Context of X^T, reusing the cached determinant and adjugate.
GenericContext transposed(const GenericContext& ctx);

struct IdentityCheck {
  std::string name;
  bool passed = false;
  std::string method;  // empty when the identity was expanded directly
};

struct IdentityReport {
  int n = 0;
  std::vector<IdentityCheck> checks;
  bool all_passed() const;
};

/// X adj(X) = det(X) I, adj(X) X = det(X) I and det(adj(X)) = det(X)^(n-1).
IdentityReport verify_fundamental(const GenericContext& ctx);

struct CompoundCheck {
  int m = 0;
  std::uint64_t exponent = 0;  // C(n-1, m-1)
  bool determinant = false;
  bool complementary = false;
  /// "expansion", or "divisor" when det(C_m) was pinned down without
  /// expanding it (see verify_compound).
  std::string method;
};

/// det(C_m(X)) = det(X)^C(n-1,m-1) and C_m(X) D^T = det(X) I for the
/// complementary compound D. The product identity is always expanded. When
/// det(C_m(X)) is too large to expand (n = 5, m in {2, 3}), the product
/// shows det(C_m) divides det(X)^C(n,m); det(X) is irreducible, so
/// det(C_m) = u det(X)^a, and evaluating at diag(2, 1, ..., 1) fixes u = 1
/// and a. Random integer points corroborate.
CompoundCheck verify_compound(const GenericContext& ctx, int m);

/// Every symbolic identity of the suite: the fundamental identities,
/// adj(XB) = adj(B) adj(X) and adj(BX) = adj(X) adj(B) for a seeded integer
/// B, conjugation by a seeded unimodular U, the diagonal factorization,
/// sandwich divisibility for a seeded alternating A, and the compound
/// identities for every m. `corrupted` appends det(adj(X)) = det(X)^n, which
/// must fail.
IdentityReport verify_suite(const GenericContext& ctx, std::uint64_t seed, bool corrupted = false);

enum class Feasibility { feasible, infeasible_odd, infeasible_exponent };

/// Which (n, d) admit a factorization adj(X) = Y Z with det(Y) = det(X)^d
/// in characteristic 0. Exponents outside 0 < d < n-1 are rejected first,
/// then odd n, then even n with d not in {1, n-2}.
Feasibility theorem_main_guard(int n, int d);
std::string to_string(Feasibility f);

/// Integer matrix with A^T = -A and zero diagonal.
class AlternatingMatrix {
 public:
  /// Throws std::invalid_argument unless `entries` is square and alternating.
  explicit AlternatingMatrix(IntMatrix entries);

  int n() const { return static_cast<int>(entries_.rows()); }
  const IntMatrix& entries() const { return entries_; }
  const Integer& det() const { return det_; }
  bool invertible() const { return sgn(det_) != 0; }

 private:
  IntMatrix entries_;
  Integer det_;
};

/// n/2 diagonal blocks [[0,1],[-1,0]]. Throws for odd n.
AlternatingMatrix standard_symplectic(int n);
/// S^T J S for a seeded unimodular S built from elementary operations with
/// multipliers in [-bound, bound]; det = 1.
AlternatingMatrix random_alternating(int n, std::uint64_t seed, int bound = 2);
/// Upper-triangle entries uniform in [-bound, bound]; any parity, possibly
/// singular.
AlternatingMatrix random_skew(int n, std::uint64_t seed, int bound = 3);

/// adj(X) A adj(X)^T.
PolyMatrix sandwich(const GenericContext& ctx, const AlternatingMatrix& a);
/// sandwich(ctx, a) divided entrywise by det(X). Throws TheoremViolation if
/// an entry is not divisible.
PolyMatrix quotient_matrix(const GenericContext& ctx, const AlternatingMatrix& a);

enum class Side { right, left };
std::string to_string(Side s);
Side parse_side(const std::string& s);

struct FactorizationCertificate {
  int n = 0;
  Side side = Side::right;
  int d = 0;
  IntMatrix A;
  PolyMatrix Y;
  PolyMatrix Z;
  std::map<std::string, bool> checks;
  /// How checks that could not be expanded directly were established.
  std::vector<std::string> notes;

  bool all_passed() const;
};

/// Progress messages for long symbolic runs; may be empty.
using ProgressFn = std::function<void(const std::string&)>;

/// adj(X) = Y (X^T A) with Y = adj(X) adj(A) adj(X)^T / (det(A) det(X)),
/// d = n - 2.
FactorizationCertificate factor_right(const GenericContext& ctx, const AlternatingMatrix& a,
                                      const ProgressFn& progress = {});
/// adj(X) = (A X^T) Z with Z = adj(X)^T adj(A) adj(X) / (det(A) det(X)),
/// d = 1.
FactorizationCertificate factor_left(const GenericContext& ctx, const AlternatingMatrix& a,
                                     const ProgressFn& progress = {});

/// Recomputes every check of `cert` against ctx. Used after loading a
/// certificate from disk.
FactorizationCertificate verify_certificate(const GenericContext& ctx, const FactorizationCertificate& cert,
                                            const ProgressFn& progress = {});

/// The i-th factor is diag(1, ..., det(X), ..., 1); their product is det(X) I.
std::vector<PolyMatrix> diagonal_factorization(const GenericContext& ctx);

struct RefinementWitness {
  int n = 0;
  /// Scalar of R, homogeneous of degree n - 2 (an integer when n = 2).
  Polynomial r;
  PolyMatrix W;
  IntMatrix A;
  IntMatrix A_prime;
  /// Degree of the W entries that was searched (n - 3, or the widened range).
  int w_degree = 0;
  bool widened = false;
  bool constant_r = false;
  std::size_t unknowns = 0;
  std::size_t solution_space_dim = 0;
  std::map<std::string, bool> checks;

  bool all_passed() const;
};

/// Why solve_common_refinement found no witness.
struct NoSolution {
  std::string reason;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
};

/// Solves adj(X) = A (r X^T + X^T W X^T) A' for a scalar r of degree n - 2
/// and W with entries homogeneous of degree n - 3, by exact elimination over
/// Q on the coefficient-matching system. Free unknowns are set to 0; if the
/// homogeneous system is inconsistent, lower degrees are admitted too.
/// With `constant_r`, r is restricted to an integer.
std::variant<RefinementWitness, NoSolution> solve_common_refinement(const GenericContext& ctx,
                                                                    const AlternatingMatrix& a,
                                                                    const AlternatingMatrix& a_prime,
                                                                    bool constant_r = false);

/// Back-multiplication and the two one-sided divisibility products.
std::map<std::string, bool> verify_refinement(const GenericContext& ctx, const RefinementWitness& w);

json to_json(const FactorizationCertificate& cert);
FactorizationCertificate certificate_from_json(const json& j);
json to_json(const RefinementWitness& w);
json to_json(const IdentityReport& report);

}  // namespace adjfac
