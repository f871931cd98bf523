#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adjfac/scalar.hpp"

namespace adjfac {

/// Exponent slots available in a monomial. Slot kTSlot is the auxiliary
/// variable t; x_i_j occupies slot (i-1)*n + (j-1).
inline constexpr std::size_t kMaxVariables = 56;
inline constexpr std::size_t kTSlot = kMaxVariables - 1;
/// Largest n whose n*n matrix variables fit beside t.
inline constexpr int kMaxDimension = 7;
inline constexpr unsigned kMaxExponent = 127;

/// Names and order of the variables x_1_1 > x_1_2 > ... > x_n_n > t.
class VarTable {
 public:
  explicit VarTable(int n);

  int n() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_ * n_) + 1; }

  /// Slot of x_i_j, 1-based indices.
  std::size_t slot(int i, int j) const;
  std::string name(std::size_t slot) const;
  /// Tokens in variable order, t last.
  std::vector<std::string> names() const;
  std::optional<std::size_t> lookup(std::string_view token) const;

  std::vector<std::size_t> row_slots(int i) const;
  std::vector<std::size_t> column_slots(int j) const;
  std::vector<std::size_t> matrix_slots() const;

 private:
  int n_;
};

/// Exponent vector packed one byte per variable, most significant byte first,
/// so word-wise unsigned comparison is lexicographic on exponents.
class Monomial {
 public:
  static constexpr std::size_t kWords = kMaxVariables / 8;

  Monomial() = default;
  static Monomial variable(std::size_t slot, unsigned exponent = 1);

  unsigned exponent(std::size_t slot) const {
    return static_cast<unsigned>((words_[slot / 8] >> shift(slot)) & 0xFFU);
  }
  void set_exponent(std::size_t slot, unsigned exponent);
  std::uint32_t degree() const { return degree_; }
  bool is_one() const { return degree_ == 0; }

  bool divides(const Monomial& other) const;
  /// Exponents summed over `slots`.
  unsigned degree_in(std::span<const std::size_t> slots) const;
  /// True if some slot other than t has a positive exponent.
  bool has_matrix_variable() const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  /// Requires b.divides(a).
  friend Monomial operator/(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.degree_ == b.degree_ && a.words_ == b.words_;
  }
  /// Graded lexicographic order with x_1_1 the largest variable.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
    return a.words_ <=> b.words_;
  }

  std::size_t hash() const;

 private:
  static constexpr unsigned shift(std::size_t slot) { return static_cast<unsigned>(56 - 8 * (slot % 8)); }

  std::array<std::uint64_t, kWords> words_{};
  std::uint32_t degree_ = 0;
};

struct Term {
  Monomial monomial;
  Integer coeff;
};

struct ProductTerm;

/// Sparse polynomial over Z or F_p in canonical form: terms sorted by
/// descending monomial, no zero coefficients, F_p coefficients in [0, p).
///
/// `dimension` records which VarTable the x variables belong to (0 when the
/// polynomial has none yet); `modulus` is 0 for integer mode.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(int c) : Polynomial(Integer(c)) {}  // NOLINT(google-explicit-constructor)
  Polynomial(const Integer& c);                   // NOLINT(google-explicit-constructor)

  static Polynomial constant(const Integer& c, std::uint64_t modulus = 0);
  static Polynomial variable(int n, std::size_t slot);
  /// The generic entry x_i_j (1-based).
  static Polynomial x(int n, int i, int j);
  static Polynomial t();
  /// Builds a canonical polynomial from arbitrary (unsorted, repeated) terms.
  static Polynomial from_terms(std::vector<Term> terms, std::uint64_t modulus = 0, int dimension = 0);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one()); }
  /// Constant coefficient (0 if absent).
  Integer constant_term() const;
  const Term& leading_term() const;
  std::uint64_t modulus() const { return modulus_; }
  int dimension() const { return dimension_; }
  std::uint32_t total_degree() const { return terms_.empty() ? 0 : terms_.front().monomial.degree(); }
  bool is_homogeneous() const;

  /// Image under Z -> F_p (coefficientwise reduction).
  Polynomial reduce_mod(std::uint64_t p) const;
  Polynomial with_dimension(int n) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial operator-() const;
  Polynomial scaled(const Integer& c) const;
  Polynomial pow(unsigned e) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  friend bool operator==(const Polynomial& a, const Polynomial& b);
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

 private:
  friend Polynomial sum_of_products(std::span<const ProductTerm> summands);
  friend std::optional<Polynomial> try_exact_div(const Polynomial& p, const Polynomial& q);

  std::vector<Term> terms_;
  std::uint64_t modulus_ = 0;
  int dimension_ = 0;
};

/// One summand of a sum of products: a*b, or a alone when b is null.
struct ProductTerm {
  const Polynomial* a = nullptr;
  const Polynomial* b = nullptr;
  bool negate = false;
};

/// Sum of products by a single heap merge over all term streams; the
/// output comes out sorted, so no hashing or final sort is needed.
Polynomial sum_of_products(std::span<const ProductTerm> summands);

inline bool is_zero(const Polynomial& p) { return p.is_zero(); }

/// Exact quotient p / q, or nullopt when q does not divide p.
/// Throws std::invalid_argument when q is zero.
std::optional<Polynomial> try_exact_div(const Polynomial& p, const Polynomial& q);
/// As try_exact_div but throws NotDivisible.
Polynomial exact_div(const Polynomial& p, const Polynomial& q);
inline Polynomial exact_quotient(const Polynomial& p, const Polynomial& q) { return exact_div(p, q); }

/// Largest exponent sum over `slots` among the terms; 0 for the zero polynomial.
unsigned degree_in(const Polynomial& p, std::span<const std::size_t> slots);
/// Least power of t; nullopt stands for +infinity (p == 0). Throws if an x variable occurs.
std::optional<unsigned> t_valuation(const Polynomial& p);

/// Canonical text form, e.g. "x_1_1*x_2_2 - x_1_2*x_2_1".
std::string to_string(const Polynomial& p);
std::ostream& operator<<(std::ostream& os, const Polynomial& p);
/// Parses the canonical grammar (whitespace-insensitive) over the VarTable of size n.
Polynomial parse_polynomial(std::string_view text, int n, std::uint64_t modulus = 0);

namespace detail {
inline Rational lift(const Integer& c, const Rational&) { return Rational(c); }
inline Integer lift(const Integer& c, const Integer&) { return c; }
inline Fp lift(const Integer& c, const Fp& like) {
  if (like.modulus() != 0) return Fp::from_integer(c, like.modulus());
  if (!c.fits_sint_p()) throw std::out_of_range("evaluate: coefficient needs a bound modulus");
  return Fp(static_cast<int>(c.get_si()));
}
inline Polynomial lift(const Integer& c, const Polynomial& like) { return Polynomial::constant(c, like.modulus()); }
}  // namespace detail

/// Ring homomorphism Z[vars] -> V fixed by slot -> value. Throws
/// std::out_of_range if a variable of p is unassigned.
template <class V>
V evaluate(const Polynomial& p, const std::map<std::size_t, V>& assignment) {
  if (p.is_zero()) return V(0);
  // Powers are cached per slot up to the maximum exponent used.
  std::array<std::vector<V>, kMaxVariables> powers;
  const V like = assignment.empty() ? V(0) : assignment.begin()->second;
  V sum(0);
  bool first = true;
  for (const Term& term : p.terms()) {
    V value = detail::lift(term.coeff, like);
    for (std::size_t slot = 0; slot < kMaxVariables; ++slot) {
      const unsigned e = term.monomial.exponent(slot);
      if (e == 0) continue;
      auto it = assignment.find(slot);
      if (it == assignment.end()) throw std::out_of_range("evaluate: variable slot " + std::to_string(slot) + " unassigned");
      auto& cache = powers[slot];
      if (cache.empty()) cache.push_back(it->second);
      while (cache.size() < e) cache.push_back(cache.back() * it->second);
      value = value * cache[e - 1];
    }
    if (first) {
      sum = value;
      first = false;
    } else {
      sum = sum + value;
    }
  }
  return sum;
}

}  // namespace adjfac

template <>
struct std::hash<adjfac::Monomial> {
  std::size_t operator()(const adjfac::Monomial& m) const noexcept { return m.hash(); }
};

namespace Eigen {

template <>
struct NumTraits<adjfac::Polynomial> : GenericNumTraits<adjfac::Polynomial> {
  typedef adjfac::Polynomial Real;
  typedef adjfac::Polynomial NonInteger;
  typedef adjfac::Polynomial Nested;
  typedef adjfac::Polynomial Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 100,
    MulCost = 1000
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
