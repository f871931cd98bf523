#include "adjfac/polynomial.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <queue>
#include <sstream>

namespace adjfac {

namespace {

constexpr std::uint64_t kHighBits = 0x8080808080808080ULL;

void reduce_coeff(Integer& c, std::uint64_t modulus) {
  if (modulus != 0) mpz_fdiv_r_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(modulus));
}

int merge_dimension(int a, int b) {
  if (a != 0 && b != 0 && a != b)
    throw ModeMismatch("polynomials belong to different variable tables (n=" + std::to_string(a) + " vs n=" +
                       std::to_string(b) + ")");
  return a != 0 ? a : b;
}

std::uint64_t merge_modulus(const Polynomial& a, const Polynomial& b) {
  if (a.modulus() == b.modulus()) return a.modulus();
  if (a.modulus() == 0 && a.is_constant()) return b.modulus();
  if (b.modulus() == 0 && b.is_constant()) return a.modulus();
  throw ModeMismatch("polynomials have different coefficient modes");
}

void sort_descending(std::vector<Term>& terms) {
  auto greater = [](const Term& x, const Term& y) { return x.monomial > y.monomial; };
  if (std::is_sorted(terms.begin(), terms.end(), greater)) return;
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.monomial > y.monomial; });
}

}  // namespace

// ---------------------------------------------------------------------------
// VarTable

VarTable::VarTable(int n) : n_(n) {
  if (n < 1 || n > kMaxDimension)
    throw std::invalid_argument("VarTable: n must lie in [1, " + std::to_string(kMaxDimension) + "]");
}

std::size_t VarTable::slot(int i, int j) const {
  if (i < 1 || i > n_ || j < 1 || j > n_) throw std::out_of_range("VarTable: index out of range");
  return static_cast<std::size_t>((i - 1) * n_ + (j - 1));
}

std::string VarTable::name(std::size_t slot) const {
  if (slot == kTSlot) return "t";
  if (slot >= static_cast<std::size_t>(n_ * n_)) throw std::out_of_range("VarTable: slot out of range");
  const auto n = static_cast<std::size_t>(n_);
  return "x_" + std::to_string(slot / n + 1) + "_" + std::to_string(slot % n + 1);
}

std::vector<std::string> VarTable::names() const {
  std::vector<std::string> out;
  for (std::size_t s : matrix_slots()) out.push_back(name(s));
  out.emplace_back("t");
  return out;
}

std::optional<std::size_t> VarTable::lookup(std::string_view token) const {
  if (token == "t") return kTSlot;
  if (token.size() < 5 || token.substr(0, 2) != "x_") return std::nullopt;
  const auto sep = token.find('_', 2);
  if (sep == std::string_view::npos) return std::nullopt;
  auto parse_index = [](std::string_view digits) -> std::optional<int> {
    if (digits.empty() || digits.size() > 3 || digits[0] == '0') return std::nullopt;
    int v = 0;
    for (char c : digits) {
      if (std::isdigit(static_cast<unsigned char>(c)) == 0) return std::nullopt;
      v = v * 10 + (c - '0');
    }
    return v;
  };
  const auto i = parse_index(token.substr(2, sep - 2));
  const auto j = parse_index(token.substr(sep + 1));
  if (!i || !j || *i > n_ || *j > n_) return std::nullopt;
  return slot(*i, *j);
}

std::vector<std::size_t> VarTable::row_slots(int i) const {
  std::vector<std::size_t> out;
  for (int j = 1; j <= n_; ++j) out.push_back(slot(i, j));
  return out;
}

std::vector<std::size_t> VarTable::column_slots(int j) const {
  std::vector<std::size_t> out;
  for (int i = 1; i <= n_; ++i) out.push_back(slot(i, j));
  return out;
}

std::vector<std::size_t> VarTable::matrix_slots() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(n_ * n_));
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = s;
  return out;
}

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::variable(std::size_t slot, unsigned exponent) {
  Monomial m;
  m.set_exponent(slot, exponent);
  return m;
}

void Monomial::set_exponent(std::size_t slot, unsigned exponent) {
  if (slot >= kMaxVariables) throw std::out_of_range("Monomial: slot out of range");
  if (exponent > kMaxExponent) throw std::overflow_error("Monomial: exponent exceeds 127");
  const unsigned old = this->exponent(slot);
  auto& w = words_[slot / 8];
  w &= ~(0xFFULL << shift(slot));
  w |= static_cast<std::uint64_t>(exponent) << shift(slot);
  degree_ = degree_ - old + exponent;
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  for (std::size_t w = 0; w < kWords; ++w) {
    // Exponents stay below 128, so (b|H) - a never borrows across bytes and
    // the high bit of each byte survives exactly when b >= a.
    if ((((other.words_[w] | kHighBits) - words_[w]) & kHighBits) != kHighBits) return false;
  }
  return true;
}

unsigned Monomial::degree_in(std::span<const std::size_t> slots) const {
  unsigned d = 0;
  for (std::size_t s : slots) d += exponent(s);
  return d;
}

bool Monomial::has_matrix_variable() const {
  for (std::size_t w = 0; w + 1 < kWords; ++w)
    if (words_[w] != 0) return true;
  return (words_[kWords - 1] & ~0xFFULL) != 0;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  for (std::size_t w = 0; w < Monomial::kWords; ++w) {
    out.words_[w] = a.words_[w] + b.words_[w];
    if ((out.words_[w] & kHighBits) != 0) throw std::overflow_error("Monomial: exponent exceeds 127");
  }
  out.degree_ = a.degree_ + b.degree_;
  return out;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial out;
  for (std::size_t w = 0; w < Monomial::kWords; ++w) out.words_[w] = a.words_[w] - b.words_[w];
  out.degree_ = a.degree_ - b.degree_;
  return out;
}

std::size_t Monomial::hash() const {
  std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ degree_;
  for (std::uint64_t w : words_) {
    h ^= w;
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 31U;
  }
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(const Integer& c) {
  if (sgn(c) != 0) terms_.push_back(Term{Monomial(), c});
}

Polynomial Polynomial::constant(const Integer& c, std::uint64_t modulus) {
  if (modulus != 0 && !is_prime(modulus)) throw std::invalid_argument("Polynomial: modulus must be prime");
  Polynomial out;
  out.modulus_ = modulus;
  Integer v = c;
  reduce_coeff(v, modulus);
  if (sgn(v) != 0) out.terms_.push_back(Term{Monomial(), std::move(v)});
  return out;
}

Polynomial Polynomial::variable(int n, std::size_t slot) {
  const VarTable vt(n);
  if (slot != kTSlot && slot >= static_cast<std::size_t>(n * n)) throw std::out_of_range("Polynomial: slot out of range");
  Polynomial out;
  out.dimension_ = n;
  out.terms_.push_back(Term{Monomial::variable(slot), Integer(1)});
  return out;
}

Polynomial Polynomial::x(int n, int i, int j) { return variable(n, VarTable(n).slot(i, j)); }

Polynomial Polynomial::t() {
  Polynomial out;
  out.terms_.push_back(Term{Monomial::variable(kTSlot), Integer(1)});
  return out;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms, std::uint64_t modulus, int dimension) {
  if (modulus != 0 && !is_prime(modulus)) throw std::invalid_argument("Polynomial: modulus must be prime");
  sort_descending(terms);
  Polynomial out;
  out.modulus_ = modulus;
  out.dimension_ = dimension;
  for (auto& term : terms) {
    if (!out.terms_.empty() && out.terms_.back().monomial == term.monomial) {
      out.terms_.back().coeff += term.coeff;
    } else {
      if (!out.terms_.empty()) {
        reduce_coeff(out.terms_.back().coeff, modulus);
        if (sgn(out.terms_.back().coeff) == 0) out.terms_.pop_back();
      }
      out.terms_.push_back(std::move(term));
    }
  }
  if (!out.terms_.empty()) {
    reduce_coeff(out.terms_.back().coeff, modulus);
    if (sgn(out.terms_.back().coeff) == 0) out.terms_.pop_back();
  }
  if (dimension == 0) {
    for (const auto& term : out.terms_)
      if (term.monomial.has_matrix_variable())
        throw std::invalid_argument("Polynomial: matrix variables need a dimension");
  }
  return out;
}

Integer Polynomial::constant_term() const {
  if (!terms_.empty() && terms_.back().monomial.is_one()) return terms_.back().coeff;
  return 0;
}

const Term& Polynomial::leading_term() const {
  if (terms_.empty()) throw std::logic_error("leading_term of zero polynomial");
  return terms_.front();
}

bool Polynomial::is_homogeneous() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [&](const Term& t) { return t.monomial.degree() == terms_.front().monomial.degree(); });
}

Polynomial Polynomial::reduce_mod(std::uint64_t p) const {
  if (modulus_ == p) return *this;
  if (modulus_ != 0) throw ModeMismatch("reduce_mod: polynomial already has a different modulus");
  if (!is_prime(p)) throw std::invalid_argument("reduce_mod: modulus must be prime");
  Polynomial out;
  out.modulus_ = p;
  out.dimension_ = dimension_;
  for (const auto& term : terms_) {
    Integer c = term.coeff;
    reduce_coeff(c, p);
    if (sgn(c) != 0) out.terms_.push_back(Term{term.monomial, std::move(c)});
  }
  return out;
}

Polynomial Polynomial::with_dimension(int n) const {
  Polynomial out = *this;
  out.dimension_ = merge_dimension(dimension_, n);
  return out;
}

namespace {

Polynomial merge_sum(const Polynomial& a, const Polynomial& b, bool subtract) {
  const std::uint64_t modulus = merge_modulus(a, b);
  const int dimension = merge_dimension(a.dimension(), b.dimension());
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  auto push_b = [&](const Term& t) {
    Integer c = subtract ? Integer(-t.coeff) : t.coeff;
    reduce_coeff(c, modulus);
    if (sgn(c) != 0) out.push_back(Term{t.monomial, std::move(c)});
  };
  auto push_a = [&](const Term& t) {
    Integer c = t.coeff;
    reduce_coeff(c, modulus);
    if (sgn(c) != 0) out.push_back(Term{t.monomial, std::move(c)});
  };
  while (ia != a.terms().end() && ib != b.terms().end()) {
    const auto cmp = ia->monomial <=> ib->monomial;
    if (cmp > 0) {
      push_a(*ia++);
    } else if (cmp < 0) {
      push_b(*ib++);
    } else {
      Integer c = subtract ? Integer(ia->coeff - ib->coeff) : Integer(ia->coeff + ib->coeff);
      reduce_coeff(c, modulus);
      if (sgn(c) != 0) out.push_back(Term{ia->monomial, std::move(c)});
      ++ia;
      ++ib;
    }
  }
  for (; ia != a.terms().end(); ++ia) push_a(*ia);
  for (; ib != b.terms().end(); ++ib) push_b(*ib);
  return Polynomial::from_terms(std::move(out), modulus, dimension);
}

}  // namespace

Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge_sum(a, b, false); }
Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge_sum(a, b, true); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  const ProductTerm term{&a, &b, false};
  return sum_of_products(std::span<const ProductTerm>(&term, 1));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) { return *this = *this + o; }
Polynomial& Polynomial::operator-=(const Polynomial& o) { return *this = *this - o; }
Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial Polynomial::operator-() const { return Polynomial::constant(0, modulus_).with_dimension(dimension_) - *this; }

Polynomial Polynomial::scaled(const Integer& c) const {
  Polynomial out;
  out.modulus_ = modulus_;
  out.dimension_ = dimension_;
  for (const auto& term : terms_) {
    Integer v = term.coeff * c;
    reduce_coeff(v, modulus_);
    if (sgn(v) != 0) out.terms_.push_back(Term{term.monomial, std::move(v)});
  }
  return out;
}

Polynomial Polynomial::pow(unsigned e) const {
  // Repeated multiplication by the base keeps the merge heap at |base|
  // nodes; squaring would grow it to the size of the partial power.
  Polynomial result = Polynomial::constant(1, modulus_).with_dimension(dimension_);
  for (unsigned k = 0; k < e; ++k) result = *this * result;
  return result;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.modulus_ != b.modulus_) {
    if (a.modulus_ == 0 && a.is_constant()) return a.reduce_mod(b.modulus_) == b;
    if (b.modulus_ == 0 && b.is_constant()) return a == b.reduce_mod(a.modulus_);
    return false;
  }
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].monomial != b.terms_[i].monomial || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Sum of products

namespace {

using Key128 = unsigned __int128;

std::array<unsigned, kMaxVariables> max_exponents(const std::vector<Term>& terms) {
  std::array<unsigned, kMaxVariables> out{};
  for (const auto& term : terms)
    for (std::size_t v = 0; v < kMaxVariables; ++v) out[v] = std::max(out[v], term.monomial.exponent(v));
  return out;
}

/// Order-preserving encoding of bounded monomials into 128 bits: total
/// degree in the top field, then one field per variable with x_1_1 most
/// significant. Fields are sized so that products never carry.
class KeyPacking {
 public:
  static std::optional<KeyPacking> make(const std::array<unsigned, kMaxVariables>& bound, unsigned degree_bound) {
    KeyPacking out;
    unsigned bits = 0;
    for (std::size_t v = kMaxVariables; v-- > 0;) {
      if (bound[v] == 0) continue;
      const auto width = static_cast<unsigned>(std::bit_width(bound[v]));
      out.fields_.push_back(Field{v, bits, (Key128{1} << width) - 1});
      bits += width;
    }
    out.degree_shift_ = bits;
    bits += static_cast<unsigned>(std::bit_width(degree_bound));
    if (bits > 128) return std::nullopt;
    return out;
  }

  Key128 pack(const Monomial& m) const {
    Key128 key = static_cast<Key128>(m.degree()) << degree_shift_;
    for (const auto& f : fields_) key |= static_cast<Key128>(m.exponent(f.slot)) << f.shift;
    return key;
  }

  Monomial unpack(Key128 key) const {
    Monomial m;
    for (const auto& f : fields_) {
      const auto e = static_cast<unsigned>((key >> f.shift) & f.mask);
      if (e != 0) m.set_exponent(f.slot, e);
    }
    return m;
  }

 private:
  struct Field {
    std::size_t slot;
    unsigned shift;
    Key128 mask;
  };
  std::vector<Field> fields_;
  unsigned degree_shift_ = 0;
};

struct Stream {
  const std::vector<Term>* shorter;
  const std::vector<Term>* longer;
  bool negate;
};

/// Monomials of every stream operand pre-encoded as 128-bit keys.
class PackedKeys {
 public:
  using Key = Key128;
  PackedKeys(const KeyPacking& packing, const std::vector<Stream>& streams) : packing_(packing) {
    for (const auto& st : streams) {
      shorter_.push_back(encode(*st.shorter));
      longer_.push_back(encode(*st.longer));
    }
  }
  Key product(std::uint32_t k, std::uint32_t i, std::uint32_t j) const { return shorter_[k][i] + longer_[k][j]; }
  Monomial monomial(const Key& key) const { return packing_.unpack(key); }

 private:
  std::vector<Key> encode(const std::vector<Term>& terms) {
    std::vector<Key> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.push_back(packing_.pack(t.monomial));
    return out;
  }
  const KeyPacking& packing_;
  std::vector<std::vector<Key>> shorter_;
  std::vector<std::vector<Key>> longer_;
};

class PlainKeys {
 public:
  using Key = Monomial;
  explicit PlainKeys(const std::vector<Stream>& streams) : streams_(streams) {}
  Key product(std::uint32_t k, std::uint32_t i, std::uint32_t j) const {
    return (*streams_[k].shorter)[i].monomial * (*streams_[k].longer)[j].monomial;
  }
  Monomial monomial(const Key& key) const { return key; }

 private:
  const std::vector<Stream>& streams_;
};

/// Heap merge of the streams shorter[i] * longer[0..]; stream i+1 of a
/// summand enters the heap when stream i emits its first product, so the
/// heap never holds more than one node per stream.
template <class Keys>
void merge_streams(const std::vector<Stream>& streams, const Keys& keys, std::uint64_t modulus,
                   std::vector<Term>& out) {
  struct Node {
    typename Keys::Key key;
    std::uint32_t stream;
    std::uint32_t i;
    std::uint32_t j;
  };
  auto less = [](const Node& x, const Node& y) { return x.key < y.key; };
  std::vector<Node> heap;
  heap.reserve(streams.size() * 4);
  auto push = [&](std::uint32_t k, std::uint32_t i, std::uint32_t j) {
    heap.push_back(Node{keys.product(k, i, j), k, i, j});
    std::push_heap(heap.begin(), heap.end(), less);
  };
  for (std::uint32_t k = 0; k < streams.size(); ++k) push(k, 0, 0);

  Integer coeff;
  typename Keys::Key current{};
  bool have = false;
  auto flush = [&]() {
    if (!have) return;
    reduce_coeff(coeff, modulus);
    if (sgn(coeff) != 0) out.push_back(Term{keys.monomial(current), coeff});
  };
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), less);
    const Node node = heap.back();
    heap.pop_back();
    if (!have || node.key != current) {
      flush();
      current = node.key;
      coeff = 0;
      have = true;
    }
    const Stream& st = streams[node.stream];
    const Integer& x = (*st.shorter)[node.i].coeff;
    const Integer& y = (*st.longer)[node.j].coeff;
    if (st.negate) {
      mpz_submul(coeff.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    } else {
      mpz_addmul(coeff.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    }
    if (node.j == 0 && node.i + 1 < st.shorter->size()) push(node.stream, node.i + 1, 0);
    if (node.j + 1 < st.longer->size()) push(node.stream, node.i, node.j + 1);
  }
  flush();
}

}  // namespace

Polynomial sum_of_products(std::span<const ProductTerm> summands) {
  static const Polynomial kOne(1);
  Polynomial result;
  if (summands.empty()) return result;

  // Coefficient mode: integer constants are compatible with any modulus.
  std::uint64_t modulus = 0;
  bool integer_nonconstant = false;
  int dimension = 0;
  auto adopt = [&](const Polynomial& p) {
    dimension = merge_dimension(dimension, p.dimension());
    if (p.modulus() != 0) {
      if ((modulus == 0 && integer_nonconstant) || (modulus != 0 && modulus != p.modulus()))
        throw ModeMismatch("sum_of_products: mixed coefficient modes");
      modulus = p.modulus();
    } else if (!p.is_constant()) {
      if (modulus != 0) throw ModeMismatch("sum_of_products: mixed coefficient modes");
      integer_nonconstant = true;
    }
  };

  std::vector<Stream> streams;
  streams.reserve(summands.size());
  for (const auto& s : summands) {
    if (s.a == nullptr) throw std::invalid_argument("sum_of_products: missing operand");
    const Polynomial& a = *s.a;
    const Polynomial& b = s.b ? *s.b : kOne;
    adopt(a);
    adopt(b);
    if (a.is_zero() || b.is_zero()) continue;
    if (a.size() <= b.size()) {
      streams.push_back(Stream{&a.terms(), &b.terms(), s.negate});
    } else {
      streams.push_back(Stream{&b.terms(), &a.terms(), s.negate});
    }
  }
  result.modulus_ = modulus;
  result.dimension_ = dimension;
  if (streams.empty()) return result;

  std::array<unsigned, kMaxVariables> bound{};
  unsigned degree_bound = 0;
  for (const auto& st : streams) {
    const auto ms = max_exponents(*st.shorter);
    const auto ml = max_exponents(*st.longer);
    for (std::size_t v = 0; v < kMaxVariables; ++v) bound[v] = std::max(bound[v], ms[v] + ml[v]);
    degree_bound = std::max(degree_bound, st.shorter->front().monomial.degree() + st.longer->front().monomial.degree());
  }
  if (const auto packing = KeyPacking::make(bound, degree_bound)) {
    merge_streams<PackedKeys>(streams, PackedKeys(*packing, streams), modulus, result.terms_);
  } else {
    merge_streams<PlainKeys>(streams, PlainKeys(streams), modulus, result.terms_);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Division

std::optional<Polynomial> try_exact_div(const Polynomial& p, const Polynomial& q) {
  if (q.is_zero()) throw std::invalid_argument("exact_div: division by the zero polynomial");
  const std::uint64_t modulus = merge_modulus(p, q);
  const int dimension = merge_dimension(p.dimension(), q.dimension());
  Polynomial quotient;
  quotient.modulus_ = modulus;
  quotient.dimension_ = dimension;
  if (p.is_zero()) return quotient;

  // q reduced to the working mode (an integer constant may meet an F_p dividend).
  const Polynomial divisor = modulus != q.modulus() ? q.reduce_mod(modulus) : q;
  const Polynomial dividend = modulus != p.modulus() ? p.reduce_mod(modulus) : p;
  if (divisor.is_zero()) throw std::invalid_argument("exact_div: divisor vanishes mod p");
  const Term& lead = divisor.terms_.front();
  Integer lead_inverse;
  if (modulus != 0) {
    const Integer mod(static_cast<unsigned long>(modulus));
    mpz_invert(lead_inverse.get_mpz_t(), lead.coeff.get_mpz_t(), mod.get_mpz_t());
  }

  // Heap division: node (i, j) stands for quotient[i] * divisor[j], j >= 1.
  struct Node {
    Monomial monomial;
    std::uint32_t i;
    std::uint32_t j;
  };
  auto less = [](const Node& a, const Node& b) { return a.monomial < b.monomial; };
  std::priority_queue<Node, std::vector<Node>, decltype(less)> heap(less);
  auto& out = quotient.terms_;
  const auto& dterms = divisor.terms_;
  const auto& pterms = dividend.terms_;

  std::size_t k = 0;
  Integer c;
  while (k < pterms.size() || !heap.empty()) {
    Monomial current;
    if (heap.empty() || (k < pterms.size() && pterms[k].monomial > heap.top().monomial)) {
      current = pterms[k].monomial;
    } else {
      current = heap.top().monomial;
    }
    c = 0;
    if (k < pterms.size() && pterms[k].monomial == current) {
      c = pterms[k].coeff;
      ++k;
    }
    while (!heap.empty() && heap.top().monomial == current) {
      const Node node = heap.top();
      heap.pop();
      mpz_submul(c.get_mpz_t(), out[node.i].coeff.get_mpz_t(), dterms[node.j].coeff.get_mpz_t());
      if (node.j + 1 < dterms.size())
        heap.push(Node{out[node.i].monomial * dterms[node.j + 1].monomial, node.i, node.j + 1});
    }
    reduce_coeff(c, modulus);
    if (sgn(c) == 0) continue;
    if (!lead.monomial.divides(current)) return std::nullopt;
    Integer qc;
    if (modulus != 0) {
      qc = c * lead_inverse;
      reduce_coeff(qc, modulus);
    } else {
      if (mpz_divisible_p(c.get_mpz_t(), lead.coeff.get_mpz_t()) == 0) return std::nullopt;
      mpz_divexact(qc.get_mpz_t(), c.get_mpz_t(), lead.coeff.get_mpz_t());
    }
    out.push_back(Term{current / lead.monomial, std::move(qc)});
    if (dterms.size() > 1) {
      const auto idx = static_cast<std::uint32_t>(out.size() - 1);
      heap.push(Node{out.back().monomial * dterms[1].monomial, idx, 1});
    }
  }
  return quotient;
}

Polynomial exact_div(const Polynomial& p, const Polynomial& q) {
  auto r = try_exact_div(p, q);
  if (!r) throw NotDivisible("exact_div: " + to_string(q) + " does not divide the dividend");
  return std::move(*r);
}

unsigned degree_in(const Polynomial& p, std::span<const std::size_t> slots) {
  unsigned d = 0;
  for (const auto& term : p.terms()) d = std::max(d, term.monomial.degree_in(slots));
  return d;
}

std::optional<unsigned> t_valuation(const Polynomial& p) {
  if (p.is_zero()) return std::nullopt;
  unsigned v = kMaxExponent + 1;
  for (const auto& term : p.terms()) {
    if (term.monomial.has_matrix_variable())
      throw std::invalid_argument("t_valuation: polynomial involves a matrix variable");
    v = std::min(v, term.monomial.exponent(kTSlot));
  }
  return v;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

void write_monomial(std::ostream& os, const Monomial& m, int dimension) {
  bool first = true;
  auto emit = [&](const std::string& name, unsigned e) {
    if (!first) os << '*';
    first = false;
    os << name;
    if (e != 1) os << '^' << e;
  };
  const std::size_t matrix_slots = dimension == 0 ? 0 : static_cast<std::size_t>(dimension * dimension);
  if (dimension != 0) {
    const VarTable vt(dimension);
    for (std::size_t s = 0; s < matrix_slots; ++s) {
      if (const unsigned e = m.exponent(s); e != 0) emit(vt.name(s), e);
    }
  } else if (m.has_matrix_variable()) {
    throw std::logic_error("to_string: matrix variables without a dimension");
  }
  if (const unsigned e = m.exponent(kTSlot); e != 0) emit("t", e);
}

}  // namespace

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& term : p.terms()) {
    const bool negative = sgn(term.coeff) < 0;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    const Integer magnitude = abs(term.coeff);
    if (term.monomial.is_one()) {
      os << magnitude.get_str();
      continue;
    }
    if (magnitude != 1) os << magnitude.get_str() << '*';
    write_monomial(os, term.monomial, p.dimension());
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << to_string(p); }

namespace {

class Parser {
 public:
  Parser(std::string_view text, int n, std::uint64_t modulus) : text_(text), table_(n), modulus_(modulus) {}

  Polynomial parse() {
    std::vector<Term> terms;
    skip_ws();
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = get() == '-';
      skip_ws();
    }
    terms.push_back(term(negative));
    for (;;) {
      skip_ws();
      if (at_end()) break;
      const char op = get();
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      skip_ws();
      terms.push_back(term(op == '-'));
    }
    if (modulus_ != 0 && !is_prime(modulus_)) throw std::invalid_argument("parse_polynomial: modulus must be prime");
    bool has_x = std::any_of(terms.begin(), terms.end(), [](const Term& t) { return t.monomial.has_matrix_variable(); });
    return Polynomial::from_terms(std::move(terms), modulus_, has_x ? table_.n() : 0);
  }

 private:
  Term term(bool negative) {
    Term out{Monomial(), Integer(1)};
    for (;;) {
      factor(out);
      skip_ws();
      if (peek() != '*') break;
      get();
      skip_ws();
    }
    if (negative) out.coeff = -out.coeff;
    return out;
  }

  void factor(Term& into) {
    if (std::isdigit(static_cast<unsigned char>(peek())) != 0) {
      into.coeff *= Integer(digits(), 10);
      return;
    }
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) != 0 || peek() == '_')) ++pos_;
    if (start == pos_) fail("expected a coefficient or variable");
    const auto token = text_.substr(start, pos_ - start);
    const auto slot = table_.lookup(token);
    if (!slot) fail("unknown variable '" + std::string(token) + "'");
    unsigned e = 1;
    skip_ws();
    if (peek() == '^') {
      get();
      skip_ws();
      const std::string d = digits();
      if (d.size() > 3) fail("exponent too large");
      e = static_cast<unsigned>(std::stoul(d));
    }
    into.monomial = into.monomial * Monomial::variable(*slot, e);
  }

  std::string digits() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())) != 0) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek())) != 0) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  char get() { return at_end() ? '\0' : text_[pos_++]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("parse_polynomial: " + what + " at offset " + std::to_string(pos_));
  }

  std::string_view text_;
  VarTable table_;
  std::uint64_t modulus_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, int n, std::uint64_t modulus) {
  return Parser(text, n, modulus).parse();
}

}  // namespace adjfac
