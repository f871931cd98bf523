#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <gmpxx.h>

namespace adjfac {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised when an exact division has a nonzero remainder.
class NotDivisible : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when operands live in different coefficient modes or variable tables.
class ModeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

bool is_prime(std::uint64_t p);

/// Element of F_p with a runtime modulus.
///
/// A default or integer-constructed value carries modulus 0 ("unbound") so
/// that Eigen can build Zero()/Identity() without knowing p; it adopts the
/// modulus of the first bound operand it meets.
class Fp {
 public:
  Fp() = default;
  Fp(int v) : raw_(v) {}  // NOLINT(google-explicit-constructor)
  Fp(std::int64_t v, std::uint64_t p);

  static Fp from_integer(const Integer& v, std::uint64_t p);

  std::uint64_t modulus() const { return modulus_; }
  /// Residue in [0, p); for an unbound value the raw integer reduced mod `p`.
  std::uint64_t residue(std::uint64_t p) const;
  std::uint64_t value() const { return residue(modulus_); }
  bool is_zero() const { return raw_ == 0; }

  Fp inverse() const;

  Fp& operator+=(const Fp& o);
  Fp& operator-=(const Fp& o);
  Fp& operator*=(const Fp& o);
  Fp& operator/=(const Fp& o) { return *this *= o.inverse(); }

  friend Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
  friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
  Fp operator-() const { return Fp(0) - *this; }

  friend bool operator==(const Fp& a, const Fp& b);
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const Fp& a);

 private:
  static std::uint64_t common_modulus(const Fp& a, const Fp& b);
  void bind(std::uint64_t p);

  // Bound: residue in [0, modulus_). Unbound: small signed integer.
  std::int64_t raw_ = 0;
  std::uint64_t modulus_ = 0;
};

inline bool is_zero(const Integer& v) { return sgn(v) == 0; }
inline bool is_zero(const Rational& v) { return sgn(v) == 0; }
inline bool is_zero(const Fp& v) { return v.is_zero(); }

inline Integer exact_quotient(const Integer& a, const Integer& b) {
  if (is_zero(b)) throw std::invalid_argument("exact_quotient: division by zero");
  Integer q;
  Integer r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (sgn(r) != 0) throw NotDivisible("integer quotient has a remainder");
  return q;
}
inline Rational exact_quotient(const Rational& a, const Rational& b) {
  if (is_zero(b)) throw std::invalid_argument("exact_quotient: division by zero");
  return Rational(a / b);
}
inline Fp exact_quotient(const Fp& a, const Fp& b) { return a / b; }

std::string to_string(const Integer& v);
std::string to_string(const Rational& v);
/// Accepts "p/q" or an integer literal; the result is canonicalized.
Rational parse_rational(const std::string& text);

}  // namespace adjfac

namespace Eigen {

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  typedef mpz_class Real;
  typedef mpq_class NonInteger;
  typedef mpz_class Nested;
  typedef mpz_class Literal;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 8,
    MulCost = 16
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  typedef mpq_class Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 32,
    MulCost = 32
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<adjfac::Fp> : GenericNumTraits<adjfac::Fp> {
  typedef adjfac::Fp Real;
  typedef adjfac::Fp NonInteger;
  typedef adjfac::Fp Nested;
  typedef adjfac::Fp Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
