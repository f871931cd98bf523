#include "adjfac/adjfactor.hpp"

#include "adjfac/random.hpp"

namespace adjfac {

namespace {

PolyMatrix poly_identity_scaled(int n, const Polynomial& c) {
  PolyMatrix out = PolyMatrix::Constant(n, n, Polynomial(0));
  for (int i = 0; i < n; ++i) out(i, i) = c;
  return out;
}

// Above this n the nonlinear factor's determinant is not expanded.
constexpr int kDirectDeterminantLimit = 4;
constexpr int kSamplePoints = 8;

bool is_alternating(const IntMatrix& a) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (sgn(a(i, i)) != 0) return false;
    for (Eigen::Index j = i + 1; j < a.cols(); ++j)
      if (a(i, j) != -a(j, i)) return false;
  }
  return true;
}

void report(const ProgressFn& progress, const std::string& msg) {
  if (progress) progress(msg);
}

PolyMatrix sandwich_with(const PolyMatrix& left, const IntMatrix& middle, const PolyMatrix& right) {
  return mat_mul(mat_mul(left, to_poly(middle)), right);
}

PolyMatrix divide_entries(const PolyMatrix& m, const Polynomial& divisor) {
  PolyMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      auto q = try_exact_div(m(i, j), divisor);
      if (!q)
        throw TheoremViolation("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                               ") is not divisible by " + to_string(divisor));
      out(i, j) = std::move(*q);
    }
  }
  return out;
}

// p = base^e, rejecting on total degree before expanding the power.
bool equals_power(const Polynomial& p, const Polynomial& base, unsigned e) {
  if (!p.is_zero() && !base.is_zero() && p.total_degree() != base.total_degree() * e) return false;
  return p == base.pow(e);
}

std::map<std::size_t, Integer> point_of(const IntMatrix& b) {
  const int n = static_cast<int>(b.rows());
  const VarTable vars(n);
  std::map<std::size_t, Integer> point;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) point[vars.slot(i + 1, j + 1)] = b(i, j);
  return point;
}

Integer power(const Integer& base, std::uint64_t e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
  return out;
}

IntMatrix evaluate_int(const PolyMatrix& m, const std::map<std::size_t, Integer>& point) {
  return map_entries<Integer>(m, [&](const Polynomial& p) { return evaluate(p, point); });
}

// Checks det(F) * det(A) = det(X)^(n-2) for the nonlinear factor F, either by
// expansion or, for large n, by cancellation from the product and the linear
// factor's determinant, corroborated at integer points.
bool nonlinear_det_check(const GenericContext& ctx, const PolyMatrix& f, const Integer& det_a, bool product_ok,
                         bool linear_det_ok, std::vector<std::string>& notes, const ProgressFn& progress) {
  const int n = ctx.n;
  if (n <= kDirectDeterminantLimit) {
    report(progress, "expanding det of the nonlinear factor");
    return equals_power(det_laplace(f).scaled(det_a), ctx.detX, static_cast<unsigned>(n - 2));
  }
  notes.push_back(
      "nonlinear factor determinant derived from the exact product and linear-factor checks with "
      "det(adj X) = det(X)^(n-1), then cancelling det(X); corroborated exactly at " +
      std::to_string(kSamplePoints) + " integer points");
  bool sampled = true;
  for (int s = 0; s < kSamplePoints && sampled; ++s) {
    report(progress, "sampling integer point " + std::to_string(s + 1));
    Rng rng = trial_rng(0xadf, static_cast<std::uint64_t>(s));
    const IntMatrix b = random_int_matrix(n, n, rng);
    const Integer lhs = det_bareiss(evaluate_int(f, point_of(b))) * det_a;
    sampled = lhs == power(det_bareiss(b), static_cast<std::uint64_t>(n - 2));
  }
  return product_ok && linear_det_ok && sampled;
}

struct CheckResult {
  std::map<std::string, bool> checks;
  std::vector<std::string> notes;
};

CheckResult run_checks(const GenericContext& ctx, Side side, const IntMatrix& a, const PolyMatrix& y,
                       const PolyMatrix& z, std::optional<bool> divisibility, const ProgressFn& progress) {
  CheckResult out;
  const int n = ctx.n;
  const bool alternating = is_alternating(a) && a.rows() == n;
  out.checks["alternating_invertible"] = alternating && sgn(det_bareiss(a)) != 0;
  if (!alternating) return out;
  const Integer det_a = det_bareiss(a);
  const PolyMatrix a_poly = to_poly(a);
  const PolyMatrix xt = transpose(ctx.X);

  report(progress, "checking Y*Z = adj(X)");
  const bool product = equal(mat_mul(y, z), ctx.adjX);
  out.checks["product"] = product;

  const PolyMatrix& linear = side == Side::right ? z : y;
  const PolyMatrix& nonlinear = side == Side::right ? y : z;
  const PolyMatrix expected_linear = side == Side::right ? mat_mul(xt, a_poly) : mat_mul(a_poly, xt);
  out.checks["linear_factor"] = equal(linear, expected_linear);

  report(progress, "checking det of the linear factor");
  const bool linear_det = det_laplace(linear) == ctx.detX.scaled(det_a);
  out.checks[side == Side::right ? "det_Z" : "det_Y"] = linear_det;

  if (divisibility) {
    out.checks["divisibility"] = *divisibility;
  } else {
    report(progress, "recomputing the quotient");
    const IntMatrix adj_a = adjugate(a);
    const PolyMatrix s = side == Side::right ? sandwich_with(ctx.adjX, adj_a, transpose(ctx.adjX))
                                             : sandwich_with(transpose(ctx.adjX), adj_a, ctx.adjX);
    out.checks["divisibility"] = equal(scaled(nonlinear, ctx.detX.scaled(det_a)), s);
  }

  out.checks[side == Side::right ? "det_Y" : "det_Z"] =
      nonlinear_det_check(ctx, nonlinear, det_a, product, linear_det, out.notes, progress);
  return out;
}

FactorizationCertificate build_certificate(const GenericContext& ctx, Side side, const AlternatingMatrix& a,
                                           const ProgressFn& progress) {
  if (ctx.n % 2 != 0) throw std::invalid_argument("factor: n must be even (if n is odd, there is no factorization)");
  if (a.n() != ctx.n) throw DimensionMismatch("factor: A has the wrong size");
  if (!a.invertible()) throw std::invalid_argument("factor: A must be invertible");

  FactorizationCertificate cert;
  cert.n = ctx.n;
  cert.side = side;
  cert.d = side == Side::right ? ctx.n - 2 : 1;
  cert.A = a.entries();

  const IntMatrix adj_a = adjugate(a.entries());
  const Polynomial divisor = ctx.detX.scaled(a.det());
  const PolyMatrix a_poly = to_poly(a.entries());
  const PolyMatrix xt = transpose(ctx.X);
  report(progress, "forming the sandwich product");
  if (side == Side::right) {
    cert.Y = divide_entries(sandwich_with(ctx.adjX, adj_a, transpose(ctx.adjX)), divisor);
    cert.Z = mat_mul(xt, a_poly);
  } else {
    cert.Y = mat_mul(a_poly, xt);
    cert.Z = divide_entries(sandwich_with(transpose(ctx.adjX), adj_a, ctx.adjX), divisor);
  }
  auto result = run_checks(ctx, side, cert.A, cert.Y, cert.Z, true, progress);
  cert.checks = std::move(result.checks);
  cert.notes = std::move(result.notes);
  return cert;
}

// Expanding det(C_m(X)) is only attempted when it stays small.
bool compound_det_expandable(int n, int m) {
  const std::uint64_t size = binomial(n, m);
  return size <= 6 && static_cast<std::uint64_t>(m) * size <= 20;
}

bool all_true(const std::map<std::string, bool>& checks) {
  for (const auto& [name, ok] : checks)
    if (!ok) return false;
  return !checks.empty();
}

}  // namespace

int symbolic_limit(bool allow_large) { return allow_large ? kMaxDimension : kDefaultSymbolicLimit; }

GenericContext make_context(const PolyMatrix& x) {
  detail::require_square(x.rows(), x.cols(), "make_context");
  GenericContext ctx;
  ctx.n = static_cast<int>(x.rows());
  ctx.X = x;
  ctx.detX = det_laplace(x);
  ctx.adjX = adjugate(x);
  if (!equal(mat_mul(ctx.X, ctx.adjX), poly_identity_scaled(ctx.n, ctx.detX)))
    throw TheoremViolation("X adj(X) differs from det(X) I");
  return ctx;
}

GenericContext make_generic(int n, bool allow_large) {
  const int limit = symbolic_limit(allow_large);
  if (n < 1 || n > limit)
    throw std::out_of_range("make_generic: n must lie in [1, " + std::to_string(limit) + "]");
  PolyMatrix x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = Polynomial::x(n, i + 1, j + 1);
  return make_context(x);
}

GenericContext transposed(const GenericContext& ctx) {
  GenericContext out;
  out.n = ctx.n;
  out.X = transpose(ctx.X);
  out.detX = ctx.detX;
  out.adjX = transpose(ctx.adjX);
  return out;
}

bool IdentityReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

IdentityReport verify_fundamental(const GenericContext& ctx) {
  IdentityReport out;
  out.n = ctx.n;
  const PolyMatrix scalar = poly_identity_scaled(ctx.n, ctx.detX);
  out.checks.push_back({"X*adj(X) = det(X)*I", equal(mat_mul(ctx.X, ctx.adjX), scalar), ""});
  out.checks.push_back({"adj(X)*X = det(X)*I", equal(mat_mul(ctx.adjX, ctx.X), scalar), ""});
  out.checks.push_back({"det(adj(X)) = det(X)^(n-1)",
                        equals_power(det_laplace(ctx.adjX), ctx.detX, static_cast<unsigned>(ctx.n - 1)), ""});
  return out;
}

CompoundCheck verify_compound(const GenericContext& ctx, int m) {
  const int n = ctx.n;
  if (m < 1 || m > n) throw std::out_of_range("verify_compound: m must lie in [1, n]");
  CompoundCheck out;
  out.m = m;
  out.exponent = binomial(n - 1, m - 1);
  const PolyMatrix c = compound(ctx.X, m);
  const PolyMatrix d = complementary_compound(ctx.X, m);
  out.complementary = equal(mat_mul(c, transpose(d)), poly_identity_scaled(static_cast<int>(c.rows()), ctx.detX));
  if (compound_det_expandable(n, m)) {
    out.method = "expansion";
    out.determinant = equals_power(det_laplace(c), ctx.detX, static_cast<unsigned>(out.exponent));
    return out;
  }
  out.method = "divisor";
  IntMatrix probe = IntMatrix::Identity(n, n);
  probe(0, 0) = 2;
  bool ok = out.complementary &&
            det_bareiss(evaluate_int(c, point_of(probe))) == power(Integer(2), out.exponent);
  for (int s = 0; s < kSamplePoints && ok; ++s) {
    Rng rng = trial_rng(0xc0b, static_cast<std::uint64_t>(s));
    const IntMatrix b = random_int_matrix(n, n, rng);
    ok = det_bareiss(compound(b, m)) == power(det_bareiss(b), out.exponent) &&
         equal(evaluate_int(c, point_of(b)), compound(b, m));
  }
  out.determinant = ok;
  return out;
}

IdentityReport verify_suite(const GenericContext& ctx, std::uint64_t seed, bool corrupted) {
  const int n = ctx.n;
  IdentityReport out;
  out.n = n;
  const PolyMatrix scalar = poly_identity_scaled(n, ctx.detX);
  out.checks.push_back({"X*adj(X) = det(X)*I", equal(mat_mul(ctx.X, ctx.adjX), scalar), ""});
  out.checks.push_back({"adj(X)*X = det(X)*I", equal(mat_mul(ctx.adjX, ctx.X), scalar), ""});
  const Polynomial det_adj = det_laplace(ctx.adjX);
  out.checks.push_back({"det(adj(X)) = det(X)^(n-1)", equals_power(det_adj, ctx.detX, static_cast<unsigned>(n - 1)), ""});

  Rng rng = trial_rng(seed, 0);
  const IntMatrix b = random_int_matrix(n, n, rng);
  const PolyMatrix bp = to_poly(b);
  const PolyMatrix adj_b = to_poly(IntMatrix(adjugate(b)));
  out.checks.push_back({"adj(X*B) = adj(B)*adj(X)", equal(adjugate(PolyMatrix(mat_mul(ctx.X, bp))), mat_mul(adj_b, ctx.adjX)), ""});
  out.checks.push_back({"adj(B*X) = adj(X)*adj(B)", equal(adjugate(PolyMatrix(mat_mul(bp, ctx.X))), mat_mul(ctx.adjX, adj_b)), ""});

  const auto [u, u_inv] = random_unimodular_pair<Integer>(n, rng, 3 * n);
  const PolyMatrix up = to_poly(u);
  const PolyMatrix up_inv = to_poly(u_inv);
  out.checks.push_back({"adj(U*X*U^-1) = U*adj(X)*U^-1",
                        equal(adjugate(PolyMatrix(mat_mul(up, ctx.X, up_inv))), mat_mul(up, ctx.adjX, up_inv)), ""});

  const auto diag = diagonal_factorization(ctx);
  PolyMatrix product = poly_identity_scaled(n, Polynomial(1));
  bool each_det = true;
  for (const auto& f : diag) {
    product = mat_mul(product, f);
    each_det = each_det && det_laplace(f) == ctx.detX;
  }
  out.checks.push_back({"product of diagonal factors = det(X)*I", equal(product, scalar), ""});
  out.checks.push_back({"each diagonal factor has det = det(X)", each_det, ""});

  const AlternatingMatrix a = random_skew(n, seed);
  bool divisible = true;
  try {
    quotient_matrix(ctx, a);
  } catch (const TheoremViolation&) {
    divisible = false;
  }
  out.checks.push_back({"adj(X)*A*adj(X)^T divisible by det(X)", divisible, ""});

  for (int m = 1; m <= n; ++m) {
    const CompoundCheck cc = verify_compound(ctx, m);
    const std::string sm = std::to_string(m);
    out.checks.push_back({"det(C_" + sm + "(X)) = det(X)^" + std::to_string(cc.exponent), cc.determinant,
                          cc.method == "expansion" ? "" : cc.method});
    out.checks.push_back({"C_" + sm + "(X)*D_" + sm + "^T = det(X)*I", cc.complementary, ""});
  }

  if (corrupted)
    out.checks.push_back({"det(adj(X)) = det(X)^n [corrupted]", equals_power(det_adj, ctx.detX, static_cast<unsigned>(n)), ""});
  return out;
}

Feasibility theorem_main_guard(int n, int d) {
  if (n < 2) throw std::invalid_argument("theorem_main_guard: n must be at least 2");
  if (d <= 0 || d >= n - 1) return Feasibility::infeasible_exponent;
  if (n % 2 != 0) return Feasibility::infeasible_odd;
  if (d != 1 && d != n - 2) return Feasibility::infeasible_exponent;
  return Feasibility::feasible;
}

std::string to_string(Feasibility f) {
  switch (f) {
    case Feasibility::feasible:
      return "feasible";
    case Feasibility::infeasible_odd:
      return "infeasible_odd";
    case Feasibility::infeasible_exponent:
      return "infeasible_exponent";
  }
  return "unknown";
}

AlternatingMatrix::AlternatingMatrix(IntMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || !is_alternating(entries_))
    throw std::invalid_argument("AlternatingMatrix: need a square matrix with A^T = -A and zero diagonal");
  det_ = det_bareiss(entries_);
}

AlternatingMatrix standard_symplectic(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("standard_symplectic: n must be even and positive");
  IntMatrix j = IntMatrix::Constant(n, n, Integer(0));
  for (int b = 0; b < n; b += 2) {
    j(b, b + 1) = 1;
    j(b + 1, b) = -1;
  }
  return AlternatingMatrix(j);
}

AlternatingMatrix random_alternating(int n, std::uint64_t seed, int bound) {
  const AlternatingMatrix j = standard_symplectic(n);
  Rng rng = trial_rng(seed, 0);
  const auto [s, s_inv] = random_unimodular_pair<Integer>(n, rng, 2 * n, bound);
  return AlternatingMatrix(mat_mul(IntMatrix(s.transpose()), j.entries(), s));
}

AlternatingMatrix random_skew(int n, std::uint64_t seed, int bound) {
  if (n < 1) throw std::invalid_argument("random_skew: n must be positive");
  Rng rng = trial_rng(seed, 0);
  IntMatrix a = IntMatrix::Constant(n, n, Integer(0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = uniform_int(rng, -bound, bound);
      a(j, i) = -a(i, j);
    }
  }
  return AlternatingMatrix(a);
}

PolyMatrix sandwich(const GenericContext& ctx, const AlternatingMatrix& a) {
  if (a.n() != ctx.n) throw DimensionMismatch("sandwich: A has the wrong size");
  return sandwich_with(ctx.adjX, a.entries(), transpose(ctx.adjX));
}

PolyMatrix quotient_matrix(const GenericContext& ctx, const AlternatingMatrix& a) {
  return divide_entries(sandwich(ctx, a), ctx.detX);
}

std::string to_string(Side s) { return s == Side::right ? "right" : "left"; }

Side parse_side(const std::string& s) {
  if (s == "right") return Side::right;
  if (s == "left") return Side::left;
  throw std::invalid_argument("side must be 'right' or 'left'");
}

bool FactorizationCertificate::all_passed() const { return all_true(checks); }

FactorizationCertificate factor_right(const GenericContext& ctx, const AlternatingMatrix& a,
                                      const ProgressFn& progress) {
  return build_certificate(ctx, Side::right, a, progress);
}

FactorizationCertificate factor_left(const GenericContext& ctx, const AlternatingMatrix& a,
                                     const ProgressFn& progress) {
  return build_certificate(ctx, Side::left, a, progress);
}

FactorizationCertificate verify_certificate(const GenericContext& ctx, const FactorizationCertificate& cert,
                                            const ProgressFn& progress) {
  if (cert.n != ctx.n || cert.A.rows() != ctx.n || cert.A.cols() != ctx.n || cert.Y.rows() != ctx.n ||
      cert.Y.cols() != ctx.n || cert.Z.rows() != ctx.n || cert.Z.cols() != ctx.n)
    throw DimensionMismatch("certificate dimensions do not match n");
  FactorizationCertificate out = cert;
  auto result = run_checks(ctx, cert.side, cert.A, cert.Y, cert.Z, std::nullopt, progress);
  result.checks["exponent"] = cert.d == (cert.side == Side::right ? ctx.n - 2 : 1);
  out.checks = std::move(result.checks);
  out.notes = std::move(result.notes);
  return out;
}

std::vector<PolyMatrix> diagonal_factorization(const GenericContext& ctx) {
  std::vector<PolyMatrix> out;
  for (int i = 0; i < ctx.n; ++i) {
    PolyMatrix d = poly_identity_scaled(ctx.n, Polynomial(1));
    d(i, i) = ctx.detX;
    out.push_back(std::move(d));
  }
  return out;
}

bool RefinementWitness::all_passed() const { return all_true(checks); }

json to_json(const FactorizationCertificate& cert) {
  json checks = json::object();
  for (const auto& [name, ok] : cert.checks) checks[name] = ok;
  json out{{"n", cert.n}, {"side", to_string(cert.side)}, {"d", cert.d},   {"A", to_json(cert.A)},
           {"Y", to_json(cert.Y)}, {"Z", to_json(cert.Z)},    {"checks", checks}};
  if (!cert.notes.empty()) out["notes"] = cert.notes;
  return out;
}

FactorizationCertificate certificate_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("certificate json: expected an object");
  for (const char* key : {"n", "side", "d", "A", "Y", "Z"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("certificate json: missing '") + key + "'");
  if (!j["n"].is_number_integer() || !j["d"].is_number_integer() || !j["side"].is_string())
    throw std::invalid_argument("certificate json: n and d must be integers, side a string");
  FactorizationCertificate cert;
  cert.n = j["n"].get<int>();
  if (cert.n < 1 || cert.n > kMaxDimension) throw std::invalid_argument("certificate json: n out of range");
  cert.side = parse_side(j["side"].get<std::string>());
  cert.d = j["d"].get<int>();
  cert.A = int_matrix_from_json(j["A"]);
  cert.Y = poly_matrix_from_json(j["Y"], cert.n);
  cert.Z = poly_matrix_from_json(j["Z"], cert.n);
  if (j.contains("checks") && j["checks"].is_object())
    for (const auto& [name, ok] : j["checks"].items()) cert.checks[name] = ok.is_boolean() && ok.get<bool>();
  return cert;
}

json to_json(const RefinementWitness& w) {
  json checks = json::object();
  for (const auto& [name, ok] : w.checks) checks[name] = ok;
  return json{{"n", w.n},
              {"r", to_string(w.r)},
              {"W", to_json(w.W)},
              {"W_degree", w.w_degree},
              {"widened", w.widened},
              {"constant_r", w.constant_r},
              {"A", to_json(w.A)},
              {"Aprime", to_json(w.A_prime)},
              {"unknowns", w.unknowns},
              {"solution_space_dim", w.solution_space_dim},
              {"checks", checks}};
}

json to_json(const IdentityReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    json entry{{"identity", c.name}, {"passed", c.passed}};
    if (!c.method.empty()) entry["method"] = c.method;
    checks.push_back(std::move(entry));
  }
  return json{{"n", report.n}, {"checks", checks}, {"passed", report.all_passed()}};
}

}  // namespace adjfac
