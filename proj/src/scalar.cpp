#include "adjfac/scalar.hpp"

#include <algorithm>
#include <cctype>

namespace adjfac {

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
  std::uint64_t result = 1 % p;
  base %= p;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, p);
    base = mul_mod(base, base, p);
    exp >>= 1U;
  }
  return result;
}

std::uint64_t reduce_signed(std::int64_t v, std::uint64_t p) {
  const std::int64_t sp = static_cast<std::int64_t>(p);
  std::int64_t r = v % sp;
  if (r < 0) r += sp;
  return static_cast<std::uint64_t>(r);
}

}  // namespace

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (p % small == 0) return p == small;
  }
  // Deterministic Miller-Rabin for 64-bit inputs.
  std::uint64_t d = p - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, p);
    if (x == 1 || x == p - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, p);
      if (x == p - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Fp::Fp(std::int64_t v, std::uint64_t p) : modulus_(p) {
  if (p == 0 || p > (1ULL << 62)) throw std::invalid_argument("Fp: modulus out of range");
  raw_ = static_cast<std::int64_t>(reduce_signed(v, p));
}

Fp Fp::from_integer(const Integer& v, std::uint64_t p) {
  if (p == 0 || p > (1ULL << 62)) throw std::invalid_argument("Fp: modulus out of range");
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p));
  Fp out;
  out.modulus_ = p;
  out.raw_ = static_cast<std::int64_t>(r.get_ui());
  return out;
}

std::uint64_t Fp::residue(std::uint64_t p) const {
  if (p == 0) {
    if (raw_ < 0) throw std::logic_error("Fp: negative unbound value has no residue");
    return static_cast<std::uint64_t>(raw_);
  }
  if (modulus_ == p) return static_cast<std::uint64_t>(raw_);
  return reduce_signed(raw_, p);
}

std::uint64_t Fp::common_modulus(const Fp& a, const Fp& b) {
  if (a.modulus_ != 0 && b.modulus_ != 0 && a.modulus_ != b.modulus_)
    throw ModeMismatch("Fp: operands have different moduli");
  return a.modulus_ != 0 ? a.modulus_ : b.modulus_;
}

void Fp::bind(std::uint64_t p) {
  if (modulus_ == p || p == 0) return;
  raw_ = static_cast<std::int64_t>(reduce_signed(raw_, p));
  modulus_ = p;
}

Fp& Fp::operator+=(const Fp& o) {
  const std::uint64_t p = common_modulus(*this, o);
  if (p == 0) {
    raw_ += o.raw_;
    return *this;
  }
  bind(p);
  std::uint64_t s = static_cast<std::uint64_t>(raw_) + o.residue(p);
  if (s >= p) s -= p;
  raw_ = static_cast<std::int64_t>(s);
  return *this;
}

Fp& Fp::operator-=(const Fp& o) {
  const std::uint64_t p = common_modulus(*this, o);
  if (p == 0) {
    raw_ -= o.raw_;
    return *this;
  }
  bind(p);
  const std::uint64_t a = static_cast<std::uint64_t>(raw_);
  const std::uint64_t b = o.residue(p);
  raw_ = static_cast<std::int64_t>(a >= b ? a - b : a + p - b);
  return *this;
}

Fp& Fp::operator*=(const Fp& o) {
  const std::uint64_t p = common_modulus(*this, o);
  if (p == 0) {
    raw_ *= o.raw_;
    return *this;
  }
  bind(p);
  raw_ = static_cast<std::int64_t>(mul_mod(static_cast<std::uint64_t>(raw_), o.residue(p), p));
  return *this;
}

Fp Fp::inverse() const {
  if (modulus_ == 0) {
    if (raw_ == 1 || raw_ == -1) return *this;
    throw std::domain_error("Fp: cannot invert an unbound value");
  }
  if (raw_ == 0) throw std::domain_error("Fp: division by zero");
  Fp out;
  out.modulus_ = modulus_;
  out.raw_ = static_cast<std::int64_t>(pow_mod(static_cast<std::uint64_t>(raw_), modulus_ - 2, modulus_));
  return out;
}

bool operator==(const Fp& a, const Fp& b) {
  const std::uint64_t p = Fp::common_modulus(a, b);
  if (p == 0) return a.raw_ == b.raw_;
  return a.residue(p) == b.residue(p);
}

std::ostream& operator<<(std::ostream& os, const Fp& a) {
  return os << a.raw_;
}

std::string to_string(const Integer& v) { return v.get_str(); }

std::string to_string(const Rational& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
  std::string s;
  std::copy_if(text.begin(), text.end(), std::back_inserter(s),
               [](unsigned char c) { return std::isspace(c) == 0; });
  if (s.empty()) throw std::invalid_argument("parse_rational: empty input");
  const auto slash = s.find('/');
  auto parse_int = [](const std::string& part) {
    std::string digits = part;
    if (!digits.empty() && digits[0] == '+') digits.erase(0, 1);
    const std::size_t start = (!digits.empty() && digits[0] == '-') ? 1 : 0;
    if (digits.size() == start ||
        !std::all_of(digits.begin() + static_cast<std::ptrdiff_t>(start), digits.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; }))
      throw std::invalid_argument("parse_rational: malformed integer '" + part + "'");
    return Integer(digits, 10);
  };
  if (slash == std::string::npos) return Rational(parse_int(s));
  const Integer den = parse_int(s.substr(slash + 1));
  if (sgn(den) == 0) throw std::invalid_argument("parse_rational: zero denominator");
  Rational r(parse_int(s.substr(0, slash)), den);
  r.canonicalize();
  return r;
}

}  // namespace adjfac
