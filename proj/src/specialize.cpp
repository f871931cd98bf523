#include "adjfac/specialize.hpp"

#include "adjfac/random.hpp"

namespace adjfac {

namespace {

Integer common_denominator(const RatMatrix& a) {
  Integer q = 1;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), a(i, j).get_den_mpz_t());
  return q;
}

template <class V>
std::map<std::size_t, V> assignment_for(int n, const Mat<V>& values) {
  const VarTable vars(n);
  std::map<std::size_t, V> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[vars.slot(i + 1, j + 1)] = values(i, j);
  return out;
}

int n_of(const PolyMatrix& m, const RatMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("specialization point must be square");
  (void)m;
  return static_cast<int>(a.rows());
}

ValuationReport valuation_report(const PolyMatrix& m) {
  detail::require_square(m.rows(), m.cols(), "valuation bound");
  ValuationReport out;
  out.n = static_cast<int>(m.rows());
  out.rank_mod_t = rank_exact(at_t_zero(m));
  out.nullity_mod_t = out.n - out.rank_mod_t;
  out.valuation = t_valuation(det_laplace(m));
  return out;
}

RatMatrix rational_vector_matrix(const Vec<Rational>& v, const RatMatrix& basis) {
  RatMatrix p(v.rows(), basis.cols() + 1);
  p.col(0) = v;
  p.rightCols(basis.cols()) = basis;
  return p;
}

}  // namespace

SpecPoint make_spec_point(const RatMatrix& a) {
  detail::require_square(a.rows(), a.cols(), "make_spec_point");
  SpecPoint pt;
  pt.A = a;
  pt.char_poly = char_poly_shifted(a);
  pt.zero_multiplicity = *t_valuation(pt.char_poly);
  return pt;
}

SpecPoint make_spec_point(const IntMatrix& a) { return make_spec_point(to_rational(a)); }

SpecPoint random_multiplicity_one_point(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_multiplicity_one_point: n must be positive");
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng = trial_rng(seed, attempt);
    IntMatrix b = random_int_matrix(n, n, rng);
    // Force rank <= n-1: the last column becomes a combination of the others.
    b.col(n - 1).setConstant(Integer(0));
    for (int j = 0; j + 1 < n; ++j) {
      const int c = uniform_int(rng, -2, 2);
      for (int i = 0; i < n; ++i) b(i, n - 1) += c * b(i, j);
    }
    const int q = uniform_int(rng, 1, 3);
    RatMatrix a = to_rational(b);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) /= q;
    SpecPoint pt = make_spec_point(a);
    if (pt.zero_multiplicity == 1) return pt;
  }
}

RatMatrix phi_apply(const PolyMatrix& m, const RatMatrix& a) {
  const int n = n_of(m, a);
  const auto point = assignment_for<Rational>(n, a);
  return map_entries<Rational>(m, [&](const Polynomial& p) {
    for (const Term& t : p.terms())
      if (t.monomial.exponent(kTSlot) != 0) throw std::invalid_argument("phi_apply: entry involves t");
    return evaluate(p, point);
  });
}

RatMatrix phi_apply(const PolyMatrix& m, const SpecPoint& pt) { return phi_apply(m, pt.A); }

PolyMatrix psi_apply(const PolyMatrix& m, const SpecPoint& pt) {
  const int n = n_of(m, pt.A);
  const Integer q = common_denominator(pt.A);
  PolyMatrix values(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Rational scaled_entry = pt.A(i, j) * q;
      Polynomial v = Polynomial::constant(scaled_entry.get_num());
      if (i == j) v += Polynomial::t().scaled(q);
      values(i, j) = std::move(v);
    }
  }
  const auto point = assignment_for<Polynomial>(n, values);
  return map_entries<Polynomial>(m, [&](const Polynomial& p) {
    for (const Term& t : p.terms())
      if (t.monomial.exponent(kTSlot) != 0) throw std::invalid_argument("psi_apply: entry already involves t");
    return evaluate(p, point);
  });
}

RatMatrix at_t_zero(const PolyMatrix& m) {
  return map_entries<Rational>(m, [](const Polynomial& p) {
    for (const Term& t : p.terms())
      if (t.monomial.has_matrix_variable()) throw std::invalid_argument("at_t_zero: entry involves an x variable");
    return Rational(p.constant_term());
  });
}

ValuationReport verify_dvr_bound(const PolyMatrix& m) {
  ValuationReport out = valuation_report(m);
  out.holds = !out.valuation || static_cast<int>(*out.valuation) >= out.nullity_mod_t;
  return out;
}

ValuationReport verify_ufd_bound(const PolyMatrix& m) {
  ValuationReport out = valuation_report(m);
  out.holds = !out.valuation || out.rank_mod_t >= out.n - static_cast<int>(*out.valuation);
  return out;
}

unsigned eigen_zero_multiplicity(const SpecPoint& pt) { return pt.zero_multiplicity; }

RankReport lemma_rk_check(const FactorizationCertificate& cert, const SpecPoint& pt) {
  if (pt.A.rows() != cert.n) throw DimensionMismatch("lemma_rk_check: point and certificate sizes differ");
  if (pt.zero_multiplicity != 1)
    throw PreconditionViolation(
        "the rank law needs A to have the eigenvalue 0 with multiplicity exactly 1; this point has multiplicity " +
        std::to_string(pt.zero_multiplicity) + " (rank n-1 alone is not enough)");
  RankReport out;
  out.n = cert.n;
  out.d = cert.d;
  const RatMatrix y = phi_apply(cert.Y, pt);
  const RatMatrix z = phi_apply(cert.Z, pt);
  out.ranks = {rank_exact(y), rank_exact(z), rank_exact(mat_mul(pt.A, y)), rank_exact(mat_mul(z, pt.A))};
  out.expected = {cert.n - cert.d, cert.d + 1, cert.n - 1 - cert.d, cert.d};
  const int nullity_a = cert.n - rank_exact(pt.A);
  out.nullity_sum = nullity_a + (cert.n - out.ranks[0]) + (cert.n - out.ranks[1]) == cert.n;
  out.passed = out.ranks == out.expected && out.nullity_sum;
  return out;
}

std::optional<unsigned> nonlinear_valuation(const FactorizationCertificate& cert, const SpecPoint& pt) {
  return t_valuation(det_laplace(psi_apply(cert.Y, pt)));
}

ProjectorPoint make_projector(const Vec<Rational>& v, const RatMatrix& basis) {
  const Eigen::Index n = v.rows();
  if (n < 1 || basis.rows() != n || basis.cols() != n - 1)
    throw DimensionMismatch("make_projector: need an n-vector and n-1 basis vectors");
  const RatMatrix p = rational_vector_matrix(v, basis);
  const auto p_inv = inverse(p);
  if (!p_inv) throw std::invalid_argument("make_projector: v and the basis do not span Q^n");
  RatMatrix diag = RatMatrix::Identity(n, n);
  diag(0, 0) = 0;
  ProjectorPoint out;
  out.v = v;
  out.basis = basis;
  out.E = mat_mul(p, diag, *p_inv);
  return out;
}

ProjectorPoint random_projector(int n, std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng = trial_rng(seed, attempt);
    const IntMatrix p = random_int_matrix(n, n, rng);
    if (sgn(det_bareiss(p)) == 0) continue;
    const RatMatrix pr = to_rational(p);
    return make_projector(pr.col(0), pr.rightCols(n - 1));
  }
}

GrassmannSample grassmann_map_sample(const FactorizationCertificate& cert, const ProjectorPoint& pp) {
  if (pp.E.rows() != cert.n) throw DimensionMismatch("grassmann_map_sample: projector and certificate sizes differ");
  GrassmannSample out;
  const RatMatrix image = mat_mul(pp.E, phi_apply(cert.Y, pp.E));
  out.column_basis = column_space_basis(image);
  out.dimension = static_cast<int>(out.column_basis.cols());
  out.expected = cert.n - 1 - cert.d;
  out.contained = out.dimension == 0 || solve(pp.basis, out.column_basis).has_value();
  out.passed = out.contained && out.dimension == out.expected;
  return out;
}

json to_json(const Report& r) {
  json out = json::object();
  out[r.kind] = r.name;
  out["n"] = r.n;
  out["params"] = r.params;
  out["trials"] = r.trials;
  out["failures"] = r.failures;
  out["observations"] = r.observations;
  return out;
}

json to_json(const RankReport& r) {
  return json{{"n", r.n},
              {"d", r.d},
              {"ranks", {{"Y", r.ranks[0]}, {"Z", r.ranks[1]}, {"XY", r.ranks[2]}, {"ZX", r.ranks[3]}}},
              {"expected", {{"Y", r.expected[0]}, {"Z", r.expected[1]}, {"XY", r.expected[2]}, {"ZX", r.expected[3]}}},
              {"nullity_sum", r.nullity_sum},
              {"passed", r.passed}};
}

json to_json(const ValuationReport& r) {
  return json{{"n", r.n},
              {"rank_mod_t", r.rank_mod_t},
              {"nullity_mod_t", r.nullity_mod_t},
              {"valuation", r.valuation ? json(*r.valuation) : json("infinity")},
              {"holds", r.holds}};
}

}  // namespace adjfac
