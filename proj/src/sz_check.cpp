#include "adjfac/random.hpp"
#include "adjfac/specialize.hpp"

namespace adjfac {

namespace {

Fp fp_power(Fp base, unsigned e) {
  Fp out(1);
  for (unsigned k = 0; k < e; ++k) out = out * base;
  return out;
}

FpMatrix fp_scalar(Eigen::Index n, const Fp& c) { return scalar_matrix<Fp>(n, c); }

FpMatrix random_alternating_fp(int n, std::uint64_t p, Rng& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
  FpMatrix a = FpMatrix::Constant(n, n, Fp(0, p));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = Fp(static_cast<std::int64_t>(dist(rng)), p);
      a(j, i) = -a(i, j);
    }
  }
  return a;
}

/// Random B of rank exactly n-1 or less: the last row is a combination of
/// the others.
FpMatrix random_singular_fp(int n, std::uint64_t p, Rng& rng) {
  FpMatrix b = random_fp_matrix(n, n, p, rng);
  FpMatrix c = random_fp_matrix(1, n - 1, p, rng);
  for (int j = 0; j < n; ++j) {
    Fp s(0, p);
    for (int i = 0; i + 1 < n; ++i) s = s + c(0, i) * b(i, j);
    b(n - 1, j) = s;
  }
  return b;
}

/// Nonsingular B, drawing again while det(B) = 0.
FpMatrix random_nonsingular_fp(int n, std::uint64_t p, Rng& rng, Report& report, int trial) {
  for (;;) {
    FpMatrix b = random_fp_matrix(n, n, p, rng);
    if (!is_zero(det_field(b))) return b;
    report.observations.push_back("trial " + std::to_string(trial) + ": singular draw redrawn");
  }
}

class TrialContext {
 public:
  TrialContext(Report& report, int trial) : report_(report), trial_(trial) {}

  void expect(const char* check, bool ok) {
    if (!ok) report_.failures.push_back(json{{"trial", trial_}, {"check", check}});
  }

 private:
  Report& report_;
  int trial_;
};

void run_fundamental(int n, std::uint64_t p, Rng& rng, TrialContext& t) {
  const FpMatrix b = random_fp_matrix(n, n, p, rng);
  const FpMatrix adj = adjugate(b);
  const Fp det = det_field(b);
  const FpMatrix scalar = fp_scalar(n, det);
  t.expect("B*adj(B) = det(B)*I", equal(mat_mul(b, adj), scalar));
  t.expect("adj(B)*B = det(B)*I", equal(mat_mul(adj, b), scalar));
  t.expect("det(adj(B)) = det(B)^(n-1)", det_field(adj) == fp_power(det, static_cast<unsigned>(n - 1)));
}

void run_multiplicativity(int n, std::uint64_t p, Rng& rng, TrialContext& t) {
  const FpMatrix a = random_fp_matrix(n, n, p, rng);
  const FpMatrix b = random_fp_matrix(n, n, p, rng);
  t.expect("adj(AB) = adj(B)adj(A)", equal(adjugate(FpMatrix(mat_mul(a, b))), mat_mul(adjugate(b), adjugate(a))));
}

void run_conjugation(int n, std::uint64_t p, Rng& rng, TrialContext& t) {
  const FpMatrix b = random_fp_matrix(n, n, p, rng);
  const auto [u_int, u_inv_int] = random_unimodular_pair<Integer>(n, rng, 3 * n);
  const FpMatrix u = to_fp(u_int, p);
  const FpMatrix u_inv = to_fp(u_inv_int, p);
  t.expect("U*U^-1 = I", equal(mat_mul(u, u_inv), fp_scalar(n, Fp(1, p))));
  t.expect("adj(U B U^-1) = U adj(B) U^-1",
           equal(adjugate(FpMatrix(mat_mul(u, b, u_inv))), mat_mul(u, adjugate(b), u_inv)));
}

void run_sandwich(int n, std::uint64_t p, Rng& rng, TrialContext& t, Report& report, int trial) {
  const FpMatrix a = random_alternating_fp(n, p, rng);
  // At a nonsingular point the quotient det(B) B^-1 A B^-T times det(B)
  // reproduces the sandwich.
  const FpMatrix b = random_nonsingular_fp(n, p, rng, report, trial);
  const FpMatrix adj = adjugate(b);
  const Fp det = det_field(b);
  const FpMatrix b_inv = *inverse(b);
  const FpMatrix q = scaled(FpMatrix(mat_mul(b_inv, a, FpMatrix(b_inv.transpose()))), det);
  t.expect("adj(B) A adj(B)^T = det(B) Q(B)", equal(mat_mul(adj, a, FpMatrix(adj.transpose())), scaled(q, det)));
  // On the hypersurface det = 0 the sandwich must vanish.
  const FpMatrix s = random_singular_fp(n, p, rng);
  const FpMatrix adj_s = adjugate(s);
  t.expect("adj(S) A adj(S)^T = 0 at singular S", is_zero_matrix(mat_mul(adj_s, a, FpMatrix(adj_s.transpose()))));
}

void run_factor_product(int n, std::uint64_t p, Rng& rng, TrialContext& t, Report& report, int trial) {
  if (n % 2 != 0) throw std::invalid_argument("factor_product needs even n");
  const IntMatrix a_int = random_alternating(n, rng()).entries();
  const FpMatrix a = to_fp(a_int, p);
  const FpMatrix adj_a = adjugate(a);
  const Fp det_a = det_field(a);
  const FpMatrix b = random_nonsingular_fp(n, p, rng, report, trial);
  const FpMatrix adj = adjugate(b);
  const Fp det = det_field(b);
  const Fp inv = Fp(1, p) / (det_a * det);
  const FpMatrix bt = b.transpose();
  const FpMatrix adj_t = adj.transpose();
  const Fp det_pow = fp_power(det, static_cast<unsigned>(n - 2));

  const FpMatrix y_right = scaled(FpMatrix(mat_mul(adj, adj_a, adj_t)), inv);
  const FpMatrix z_right = mat_mul(bt, a);
  t.expect("right: Y Z = adj(B)", equal(mat_mul(y_right, z_right), adj));
  t.expect("right: det(Y) det(A) = det(B)^(n-2)", det_field(y_right) * det_a == det_pow);
  t.expect("right: det(Z) = det(A) det(B)", det_field(z_right) == det_a * det);

  const FpMatrix y_left = mat_mul(a, bt);
  const FpMatrix z_left = scaled(FpMatrix(mat_mul(adj_t, adj_a, adj)), inv);
  t.expect("left: Y Z = adj(B)", equal(mat_mul(y_left, z_left), adj));
  t.expect("left: det(Z) det(A) = det(B)^(n-2)", det_field(z_left) * det_a == det_pow);
}

void run_compound(int n, std::uint64_t p, Rng& rng, TrialContext& t, int trial) {
  const int m = 1 + trial % n;
  const FpMatrix b = random_fp_matrix(n, n, p, rng);
  const Fp det = det_field(b);
  const FpMatrix c = compound(b, m);
  const auto exponent = static_cast<unsigned>(binomial(n - 1, m - 1));
  t.expect("det(C_m(B)) = det(B)^C(n-1,m-1)", det_field(c) == fp_power(det, exponent));
  const FpMatrix d = complementary_compound(b, m);
  t.expect("C_m(B) D^T = det(B) I", equal(mat_mul(c, FpMatrix(d.transpose())), fp_scalar(c.rows(), det)));
}

void run_corrupted(int n, std::uint64_t p, Rng& rng, TrialContext& t) {
  const FpMatrix b = random_fp_matrix(n, n, p, rng);
  const Fp det = det_field(b);
  t.expect("det(adj(B)) = det(B)^n", det_field(adjugate(b)) == fp_power(det, static_cast<unsigned>(n)));
}

}  // namespace

std::string to_string(SzIdentity id) {
  switch (id) {
    case SzIdentity::fundamental:
      return "fundamental";
    case SzIdentity::multiplicativity:
      return "multiplicativity";
    case SzIdentity::conjugation:
      return "conjugation";
    case SzIdentity::sandwich_divisibility:
      return "sandwich-divisibility";
    case SzIdentity::factor_product:
      return "factor-product";
    case SzIdentity::compound_determinant:
      return "compound-determinant";
    case SzIdentity::corrupted_det_adj:
      return "corrupted-det-adj";
  }
  return "unknown";
}

SzIdentity parse_identity(const std::string& name) {
  for (SzIdentity id : {SzIdentity::fundamental, SzIdentity::multiplicativity, SzIdentity::conjugation,
                        SzIdentity::sandwich_divisibility, SzIdentity::factor_product,
                        SzIdentity::compound_determinant, SzIdentity::corrupted_det_adj})
    if (to_string(id) == name) return id;
  throw std::invalid_argument("unknown identity '" + name + "'");
}

std::vector<SzIdentity> proved_identities() {
  return {SzIdentity::fundamental,           SzIdentity::multiplicativity, SzIdentity::conjugation,
          SzIdentity::sandwich_divisibility, SzIdentity::factor_product,   SzIdentity::compound_determinant};
}

Report sz_check(SzIdentity id, int n, std::uint64_t p, int trials, std::uint64_t seed) {
  if (n < 1 || n > 24) throw std::out_of_range("sz_check: n must lie in [1, 24]");
  if (!is_prime(p) || p > (1ULL << 62)) throw std::invalid_argument("sz_check: p must be a prime below 2^62");
  if (trials < 0) throw std::invalid_argument("sz_check: trials must be non-negative");
  if (id == SzIdentity::factor_product && n % 2 != 0)
    throw std::invalid_argument("sz_check: factor-product needs even n");
  Report report;
  report.name = to_string(id);
  report.n = n;
  report.params = json{{"p", p}, {"seed", seed}};
  report.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = trial_rng(seed, static_cast<std::uint64_t>(trial));
    TrialContext t(report, trial);
    switch (id) {
      case SzIdentity::fundamental:
        run_fundamental(n, p, rng, t);
        break;
      case SzIdentity::multiplicativity:
        run_multiplicativity(n, p, rng, t);
        break;
      case SzIdentity::conjugation:
        run_conjugation(n, p, rng, t);
        break;
      case SzIdentity::sandwich_divisibility:
        run_sandwich(n, p, rng, t, report, trial);
        break;
      case SzIdentity::factor_product:
        run_factor_product(n, p, rng, t, report, trial);
        break;
      case SzIdentity::compound_determinant:
        run_compound(n, p, rng, t, trial);
        break;
      case SzIdentity::corrupted_det_adj:
        run_corrupted(n, p, rng, t);
        break;
    }
  }
  return report;
}

}  // namespace adjfac
