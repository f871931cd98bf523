#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adjfac/adjfactor.hpp"

namespace adjfac {

/// A required hypothesis does not hold at the given input.
class PreconditionViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Concrete matrix A with det(tI + A) and the order of its zero eigenvalue.
struct SpecPoint {
  RatMatrix A;
  /// Integral multiple of det(tI + A).
  Polynomial char_poly;
  unsigned zero_multiplicity = 0;
};

SpecPoint make_spec_point(const RatMatrix& a);
SpecPoint make_spec_point(const IntMatrix& a);
/// Seeded rational point of rank n-1 whose zero eigenvalue is simple.
SpecPoint random_multiplicity_one_point(int n, std::uint64_t seed);

/// x_i_j -> A(i, j). Throws std::invalid_argument if an entry involves t.
RatMatrix phi_apply(const PolyMatrix& m, const RatMatrix& a);
RatMatrix phi_apply(const PolyMatrix& m, const SpecPoint& pt);

/// x_i_j -> q (t [i = j] + A(i, j)) with q the least common denominator of
/// A. For integral A this is the substitution X -> tI + A; an entry
/// homogeneous of degree k is scaled by q^k, which preserves t-valuations
/// and ranks at t = 0.
PolyMatrix psi_apply(const PolyMatrix& m, const SpecPoint& pt);

/// Entrywise t -> 0 of a matrix over Z[t].
RatMatrix at_t_zero(const PolyMatrix& m);

struct ValuationReport {
  int n = 0;
  int rank_mod_t = 0;
  int nullity_mod_t = 0;
  /// t-adic valuation of det; nullopt for det = 0.
  std::optional<unsigned> valuation;
  bool holds = false;
};

/// nullity(M mod t) <= v_t(det M).
ValuationReport verify_dvr_bound(const PolyMatrix& m);
/// rank(M mod t) >= n - v_t(det M).
ValuationReport verify_ufd_bound(const PolyMatrix& m);

unsigned eigen_zero_multiplicity(const SpecPoint& pt);

struct RankReport {
  int n = 0;
  int d = 0;
  /// rank of phi(Y), phi(Z), phi(XY), phi(ZX).
  std::array<int, 4> ranks{};
  std::array<int, 4> expected{};
  /// nullity(A) + nullity(phi(Y)) + nullity(phi(Z)) = n.
  bool nullity_sum = false;
  bool passed = false;
};

/// Throws PreconditionViolation unless the zero eigenvalue of pt is simple.
RankReport lemma_rk_check(const FactorizationCertificate& cert, const SpecPoint& pt);

/// v_t(det(psi(Y))), to be compared with the certificate's d.
std::optional<unsigned> nonlinear_valuation(const FactorizationCertificate& cert, const SpecPoint& pt);

struct ProjectorPoint {
  Vec<Rational> v;
  RatMatrix basis;  // n x (n-1)
  RatMatrix E;
};

/// Idempotent E with kernel span(v) and image span(basis). Throws
/// std::invalid_argument if the vectors do not form a basis.
ProjectorPoint make_projector(const Vec<Rational>& v, const RatMatrix& basis);
ProjectorPoint random_projector(int n, std::uint64_t seed);

struct GrassmannSample {
  RatMatrix column_basis;
  int dimension = 0;
  int expected = 0;
  bool contained = false;
  bool passed = false;
};

/// Column space of E phi_E(Y): dimension n-1-d, contained in span(basis).
GrassmannSample grassmann_map_sample(const FactorizationCertificate& cert, const ProjectorPoint& pp);

enum class SzIdentity {
  fundamental,
  multiplicativity,
  conjugation,
  sandwich_divisibility,
  factor_product,
  compound_determinant,
  corrupted_det_adj,
};

std::string to_string(SzIdentity id);
SzIdentity parse_identity(const std::string& name);
/// Every identity except the corrupted control.
std::vector<SzIdentity> proved_identities();

struct Report {
  std::string kind = "identity";  // "identity" or "lemma"
  std::string name;
  int n = 0;
  json params = json::object();
  int trials = 0;
  json failures = json::array();
  json observations = json::array();

  bool passed() const { return failures.empty(); }
};

/// Evaluates the identity at `trials` random points over F_p; trial k draws
/// from trial_rng(seed, k).
Report sz_check(SzIdentity id, int n, std::uint64_t p, int trials, std::uint64_t seed);

json to_json(const Report& r);
json to_json(const RankReport& r);
json to_json(const ValuationReport& r);

}  // namespace adjfac
