#include "doctest.h"
#include "oracles.hpp"

#include "adjfac/adjfactor.hpp"
#include "adjfac/specialize.hpp"

using namespace adjfac;

namespace {

const GenericContext& ctx(int n) {
  static std::map<int, GenericContext> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_generic(n)).first;
  return it->second;
}

IntMatrix ints(std::initializer_list<std::initializer_list<int>> rows) {
  IntMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (int v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

PolyMatrix scalar_poly(int n, const Polynomial& c) { return scalar_matrix<Polynomial>(n, c); }

/// The feasibility table read off the classification: exponents outside
/// (0, n-1) are meaningless, odd n never factors, even n only for d = 1, n-2.
Feasibility table_guard(int n, int d) {
  if (d <= 0 || d >= n - 1) return Feasibility::infeasible_exponent;
  if (n % 2 == 1) return Feasibility::infeasible_odd;
  return (d == 1 || d == n - 2) ? Feasibility::feasible : Feasibility::infeasible_exponent;
}

void check_certificate(const FactorizationCertificate& cert, const GenericContext& c, const AlternatingMatrix& a) {
  const int n = c.n;
  CHECK(cert.all_passed());
  CHECK(equal(mat_mul(cert.Y, cert.Z), c.adjX));
  const PolyMatrix ap = to_poly(a.entries());
  const PolyMatrix xt = c.X.transpose();
  if (cert.side == Side::right) {
    CHECK(cert.d == n - 2);
    CHECK(equal(cert.Z, mat_mul(xt, ap)));
  } else {
    CHECK(cert.d == 1);
    CHECK(equal(cert.Y, mat_mul(ap, xt)));
  }
  CHECK(theorem_main_guard(n, cert.d) == Feasibility::feasible);
}

}  // namespace

TEST_CASE("make_generic") {
  const GenericContext& c2 = ctx(2);
  CHECK(to_string(c2.detX) == "x_1_1*x_2_2 - x_1_2*x_2_1");
  CHECK(equal(c2.adjX, oracle::cofactor_adjugate(c2.X)));
  const GenericContext c1 = make_generic(1);
  CHECK(to_string(c1.detX) == "x_1_1");
  CHECK(c1.adjX(0, 0) == Polynomial(1));
  CHECK(det_laplace(ctx(3).adjX) == oracle::power(ctx(3).detX, 2));
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) CHECK(ctx(3).X(i - 1, j - 1) == Polynomial::x(3, i, j));
  CHECK_THROWS_AS(make_generic(0), std::out_of_range);
  CHECK_THROWS_AS(make_generic(7), std::out_of_range);
  CHECK(symbolic_limit(false) == 6);
  CHECK(symbolic_limit(true) == 7);
}

TEST_CASE("verify_fundamental") {
  for (int n = 1; n <= 4; ++n) {
    const IdentityReport r = verify_fundamental(ctx(n));
    CHECK(r.all_passed());
    CHECK(r.checks.size() == 3);
  }
}

TEST_CASE("verify_suite and the corrupted control") {
  for (int n = 2; n <= 4; ++n) {
    CHECK(verify_suite(ctx(n), 7).all_passed());
    const IdentityReport bad = verify_suite(ctx(n), 7, true);
    CHECK_FALSE(bad.all_passed());
    int failures = 0;
    for (const auto& c : bad.checks) failures += c.passed ? 0 : 1;
    CHECK(failures == 1);
  }
}

TEST_CASE("verify_compound") {
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= n; ++m) {
      const CompoundCheck c = verify_compound(ctx(n), m);
      CHECK(c.determinant);
      CHECK(c.complementary);
      CHECK(c.exponent == binomial(n - 1, m - 1));
      CHECK(c.method == "expansion");
    }
}

TEST_CASE("theorem_main_guard") {
  CHECK(theorem_main_guard(3, 1) == Feasibility::infeasible_odd);
  CHECK(theorem_main_guard(4, 2) == Feasibility::feasible);
  CHECK(theorem_main_guard(6, 3) == Feasibility::infeasible_exponent);
  CHECK(theorem_main_guard(4, 1) == Feasibility::feasible);
  CHECK(theorem_main_guard(4, 3) == Feasibility::infeasible_exponent);
  CHECK(theorem_main_guard(5, 0) == Feasibility::infeasible_exponent);
  CHECK_THROWS(theorem_main_guard(1, 0));
  for (int n = 2; n <= 8; ++n)
    for (int d = -1; d <= n + 1; ++d) CHECK(theorem_main_guard(n, d) == table_guard(n, d));
  CHECK(to_string(Feasibility::infeasible_odd) == "infeasible_odd");
}

TEST_CASE("alternating matrices") {
  const AlternatingMatrix j2 = standard_symplectic(2);
  CHECK(equal(j2.entries(), ints({{0, 1}, {-1, 0}})));
  for (int n : {2, 4, 6}) {
    const IntMatrix j = standard_symplectic(n).entries();
    CHECK(standard_symplectic(n).det() == 1);
    CHECK(equal(IntMatrix(j.transpose()), IntMatrix(-j)));
    CHECK(equal(mat_mul(j, j), IntMatrix(-IntMatrix::Identity(n, n))));
  }
  CHECK_THROWS(standard_symplectic(3));
  const AlternatingMatrix a = random_alternating(4, 99);
  CHECK(equal(a.entries(), random_alternating(4, 99).entries()));
  CHECK(equal(IntMatrix(a.entries().transpose()), IntMatrix(-a.entries())));
  for (int i = 0; i < 4; ++i) CHECK(sgn(a.entries()(i, i)) == 0);
  CHECK(oracle::leibniz_det(a.entries()) == 1);
  CHECK(a.det() == 1);
  CHECK_THROWS_AS(AlternatingMatrix(ints({{1, 1}, {-1, 0}})), std::invalid_argument);
  CHECK_THROWS_AS(AlternatingMatrix(ints({{0, 1}, {1, 0}})), std::invalid_argument);
  CHECK_FALSE(AlternatingMatrix(ints({{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}})).invertible());
}

TEST_CASE("sandwich and quotient") {
  const GenericContext& c2 = ctx(2);
  const AlternatingMatrix j2 = standard_symplectic(2);
  // M J M^T = det(M) J for any 2 x 2 M, and det(adj(X)) = det(X).
  PolyMatrix expected(2, 2);
  expected << Polynomial(0), c2.detX, -c2.detX, Polynomial(0);
  CHECK(equal(sandwich(c2, j2), expected));
  const PolyMatrix a = c2.adjX;
  CHECK(equal(sandwich(c2, j2), mat_mul(a, to_poly(j2.entries()), PolyMatrix(a.transpose()))));
  CHECK(equal(quotient_matrix(c2, j2), to_poly(j2.entries())));

  const GenericContext& c3 = ctx(3);
  const AlternatingMatrix singular(ints({{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}));
  const PolyMatrix s = sandwich(c3, singular);
  const PolyMatrix q = quotient_matrix(c3, singular);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(oracle::naive_product(q(i, j), c3.detX) == s(i, j));

  const AlternatingMatrix zero(IntMatrix::Zero(3, 3));
  CHECK(is_zero_matrix(sandwich(c3, zero)));
  CHECK(is_zero_matrix(quotient_matrix(c3, zero)));

  // Divisibility holds for singular alternating A and for odd n.
  for (int n = 2; n <= 4; ++n)
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const AlternatingMatrix a = random_skew(n, seed);
      const PolyMatrix qa = quotient_matrix(ctx(n), a);
      CHECK(equal(scaled(qa, ctx(n).detX), sandwich(ctx(n), a)));
    }
}

TEST_CASE("quotient matrix specializes to det(B) B^-1 J B^-T") {
  const AlternatingMatrix j = standard_symplectic(4);
  const PolyMatrix q = quotient_matrix(ctx(4), j);
  for (int k = 0; k < 4; ++k) {
    RatMatrix b = RatMatrix::Identity(4, 4);
    b(k, (k + 1) % 4) = Rational(3 + k);
    b(k, k) = Rational(2);
    const RatMatrix b_inv = *inverse(b);
    const Rational det = oracle::leibniz_det(b);
    const RatMatrix rhs = scaled(RatMatrix(mat_mul(b_inv, to_rational(j.entries()), RatMatrix(b_inv.transpose()))), det);
    CHECK(equal(phi_apply(q, b), rhs));
  }
}

TEST_CASE("factor_right and factor_left, n = 2") {
  const AlternatingMatrix j = standard_symplectic(2);
  const FactorizationCertificate right = factor_right(ctx(2), j);
  CHECK(equal(right.Y, to_poly(IntMatrix(-j.entries()))));
  CHECK(right.d == 0);
  CHECK(equal(mat_mul(right.Y, right.Z), ctx(2).adjX));
  const FactorizationCertificate left = factor_left(ctx(2), j);
  CHECK(equal(mat_mul(left.Y, left.Z), ctx(2).adjX));
  CHECK(equal(left.Z, to_poly(IntMatrix(-j.entries()))));
}

TEST_CASE("factor_right and factor_left, n = 4") {
  const GenericContext& c = ctx(4);
  const AlternatingMatrix j = standard_symplectic(4);
  const FactorizationCertificate right = factor_right(c, j);
  check_certificate(right, c, j);
  CHECK(det_laplace(right.Y) == oracle::power(c.detX, 2));
  CHECK(det_laplace(right.Z) == c.detX);
  const FactorizationCertificate left = factor_left(c, j);
  check_certificate(left, c, j);
  CHECK(det_laplace(left.Y) == c.detX);
  CHECK(det_laplace(left.Z) == oracle::power(c.detX, 2));

  for (std::uint64_t seed : {1u, 2u}) {
    const AlternatingMatrix a = random_alternating(4, seed);
    const FactorizationCertificate r = factor_right(c, a);
    check_certificate(r, c, a);
    CHECK(det_laplace(r.Y) * Polynomial(a.det()) == oracle::power(c.detX, 2));
    const FactorizationCertificate l = factor_left(c, a);
    check_certificate(l, c, a);
  }
  CHECK_THROWS(factor_right(c, AlternatingMatrix(IntMatrix::Zero(4, 4))));
  CHECK_THROWS(factor_right(ctx(3), AlternatingMatrix(IntMatrix::Zero(3, 3))));
}

TEST_CASE("transpose duality of the two sides") {
  const GenericContext& c = ctx(4);
  const AlternatingMatrix a = random_alternating(4, 5);
  const AlternatingMatrix at(IntMatrix(a.entries().transpose()));
  const FactorizationCertificate left = factor_left(c, a);
  const FactorizationCertificate right_of_transpose = factor_right(transposed(c), at);
  CHECK(equal(right_of_transpose.Y, PolyMatrix(left.Z.transpose())));
  CHECK(equal(right_of_transpose.Z, PolyMatrix(left.Y.transpose())));
}

TEST_CASE("certificate JSON round trip and re-verification") {
  const GenericContext& c = ctx(4);
  const FactorizationCertificate cert = factor_right(c, standard_symplectic(4));
  const json j = to_json(cert);
  CHECK(j["side"] == "right");
  CHECK(j["d"] == 2);
  const FactorizationCertificate back = certificate_from_json(j);
  CHECK(to_json(back).dump() == j.dump());
  CHECK(verify_certificate(c, back).all_passed());
  FactorizationCertificate tampered = back;
  tampered.Y(0, 0) += Polynomial(1);
  CHECK_FALSE(verify_certificate(c, tampered).all_passed());
  FactorizationCertificate wrong_d = back;
  wrong_d.d = 1;
  CHECK_FALSE(verify_certificate(c, wrong_d).all_passed());
}

TEST_CASE("diagonal_factorization") {
  for (int n = 1; n <= 4; ++n) {
    const auto factors = diagonal_factorization(ctx(n));
    REQUIRE(factors.size() == static_cast<std::size_t>(n));
    PolyMatrix prod = scalar_poly(n, Polynomial(1));
    for (const PolyMatrix& f : factors) {
      CHECK(det_laplace(f) == ctx(n).detX);
      prod = mat_mul(prod, f);
    }
    CHECK(equal(prod, scalar_poly(n, ctx(n).detX)));
  }
}

TEST_CASE("common refinement") {
  const AlternatingMatrix j2 = standard_symplectic(2);
  const auto w2 = solve_common_refinement(ctx(2), j2, j2);
  REQUIRE(std::holds_alternative<RefinementWitness>(w2));
  const RefinementWitness& r2 = std::get<RefinementWitness>(w2);
  CHECK(r2.r == Polynomial(-1));
  CHECK(is_zero_matrix(r2.W));
  CHECK(r2.all_passed());

  const AlternatingMatrix mj(IntMatrix(-j2.entries()));
  const auto w2m = solve_common_refinement(ctx(2), mj, mj);
  REQUIRE(std::holds_alternative<RefinementWitness>(w2m));
  CHECK(std::get<RefinementWitness>(w2m).r == Polynomial(-1));

  const GenericContext& c4 = ctx(4);
  const AlternatingMatrix j4 = standard_symplectic(4);
  const auto w4 = solve_common_refinement(c4, j4, j4);
  REQUIRE(std::holds_alternative<RefinementWitness>(w4));
  const RefinementWitness& r4 = std::get<RefinementWitness>(w4);
  const PolyMatrix xt = c4.X.transpose();
  const PolyMatrix inner = scaled(xt, r4.r) + mat_mul(xt, r4.W, xt);
  CHECK(equal(mat_mul(to_poly(j4.entries()), inner, to_poly(j4.entries())), c4.adjX));
  CHECK(r4.r.total_degree() == 2);
  CHECK(r4.r.is_homogeneous());
  CHECK(r4.solution_space_dim == 0);
  for (const auto& [name, ok] : verify_refinement(c4, r4)) CHECK_MESSAGE(ok, name);
  const json wj = to_json(r4);
  CHECK(wj["r"] == to_string(r4.r));

  // With r an integer the n = 4 system has no solution.
  const auto constant = solve_common_refinement(c4, j4, j4, true);
  CHECK(std::holds_alternative<NoSolution>(constant));
}

TEST_CASE("mod-p transfer") {
  const GenericContext& c = ctx(4);
  const AlternatingMatrix a = random_alternating(4, 3);
  const FactorizationCertificate right = factor_right(c, a);
  const FactorizationCertificate left = factor_left(c, a);
  const PolyMatrix q = quotient_matrix(c, a);
  for (std::uint64_t p : {2ULL, 3ULL, 31ULL, 2147483647ULL}) {
    CAPTURE(p);
    const PolyMatrix x = reduce_mod(c.X, p);
    const PolyMatrix adj = reduce_mod(c.adjX, p);
    const Polynomial det = c.detX.reduce_mod(p);
    CHECK(equal(adjugate(x), adj));
    CHECK(det_laplace(x) == det);
    CHECK(equal(mat_mul(x, adj), scalar_poly(4, det)));
    CHECK(equal(mat_mul(reduce_mod(right.Y, p), reduce_mod(right.Z, p)), adj));
    CHECK(equal(mat_mul(reduce_mod(left.Y, p), reduce_mod(left.Z, p)), adj));
    const PolyMatrix ap = reduce_mod(to_poly(a.entries()), p);
    CHECK(equal(mat_mul(adj, ap, PolyMatrix(adj.transpose())), scaled(reduce_mod(q, p), det)));
  }
}
