// adjfac: generate, factor and verify adjugates of generic matrices.
//
// Exit status: 0 when every check passed, 1 when a mathematical check
// failed, 2 on bad input or usage.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "adjfac/specialize.hpp"

namespace {

using namespace adjfac;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
// Symbolic verification expands det(adj(X)); beyond this it is out of reach.
constexpr int kSymbolicVerifyLimit = 5;
constexpr int kProgressFrom = 6;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  int n = 0;
  int m = 0;
  std::uint64_t seed = 1;
  std::uint64_t prime = 0;
  int trials = 50;
  std::string a_source = "symplectic";
  std::string a_prime_source = "symplectic";
  std::string side = "right";
  std::string format = "json";
  std::string cert_file;
  std::string point_file;
  bool allow_large = false;
  bool inject_bug = false;
  bool constant_r = false;
  bool progress = false;
};

bool env_allows_large() {
  const char* v = std::getenv("ADJFAC_ALLOW_LARGE");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

bool allow_large(const Options& o) { return o.allow_large || env_allows_large(); }

void require_symbolic_n(const Options& o) {
  const int limit = symbolic_limit(allow_large(o));
  if (o.n < 1 || o.n > limit) {
    std::string msg = "n must lie in [1, " + std::to_string(limit) + "] for symbolic work";
    if (!allow_large(o)) msg += " (use --allow-large or ADJFAC_ALLOW_LARGE=1 to raise the cap to " +
                                std::to_string(symbolic_limit(true)) + ")";
    throw UsageError(msg);
  }
}

ProgressFn progress_for(const Options& o, int n) {
  if (!o.progress && n < kProgressFrom) return {};
  return [](const std::string& msg) { std::cerr << "[adjfac] " << msg << std::endl; };
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

AlternatingMatrix alternating_from(const std::string& source, int n, std::uint64_t seed) {
  if (source == "symplectic" || source == "J") return standard_symplectic(n);
  if (source == "-J") return AlternatingMatrix(IntMatrix(-standard_symplectic(n).entries()));
  if (source == "random") return random_alternating(n, seed);
  const json j = read_json_file(source);
  try {
    AlternatingMatrix a(int_matrix_from_json(j));
    if (a.n() != n) throw UsageError("'" + source + "' is " + std::to_string(a.n()) + "x" + std::to_string(a.n()) +
                                     ", expected n = " + std::to_string(n));
    return a;
  } catch (const std::invalid_argument& e) {
    throw UsageError("'" + source + "': " + e.what());
  }
}

void require_even(int n) {
  if (n % 2 != 0)
    throw UsageError("n = " + std::to_string(n) + " is odd: if n is odd, there is no factorization");
}

std::string matrix_text(const PolyMatrix& m) {
  std::ostringstream out;
  out << '[';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << (i == 0 ? "[" : ", [");
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j == 0 ? "" : ", ") << to_string(m(i, j));
    out << ']';
  }
  out << ']';
  return out.str();
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_gen(const Options& o) {
  require_symbolic_n(o);
  const GenericContext ctx = make_generic(o.n, allow_large(o));
  if (o.format == "text") {
    std::cout << "X = " << matrix_text(ctx.X) << '\n'
              << "det = " << to_string(ctx.detX) << '\n'
              << "adj = " << matrix_text(ctx.adjX) << '\n';
  } else {
    emit(json{{"n", o.n}, {"X", to_json(ctx.X)}, {"det", to_string(ctx.detX)}, {"adj", to_json(ctx.adjX)}});
  }
  return kExitOk;
}

int cmd_verify(const Options& o) {
  if (o.prime != 0) {
    if (!is_prime(o.prime)) throw UsageError("--prime " + std::to_string(o.prime) + " is not prime");
    if (o.n < 1 || o.n > 24) throw UsageError("n must lie in [1, 24] for mod-p verification");
    if (o.trials < 1) throw UsageError("--trials must be positive");
    json reports = json::array();
    json skipped = json::array();
    bool passed = true;
    for (SzIdentity id : proved_identities()) {
      if (id == SzIdentity::factor_product && o.n % 2 != 0) {
        skipped.push_back(to_string(id) + " (needs even n)");
        continue;
      }
      const Report r = sz_check(id, o.n, o.prime, o.trials, o.seed);
      passed = passed && r.passed();
      reports.push_back(to_json(r));
    }
    if (o.inject_bug) {
      const Report r = sz_check(SzIdentity::corrupted_det_adj, o.n, o.prime, o.trials, o.seed);
      passed = passed && r.passed();
      reports.push_back(to_json(r));
    }
    json out{{"n", o.n}, {"mode", "mod-p"}, {"reports", reports}, {"passed", passed}};
    if (!skipped.empty()) out["skipped"] = skipped;
    if (o.format == "text") {
      for (const auto& r : reports)
        std::cout << (r["failures"].empty() ? "PASS " : "FAIL ") << r["identity"].get<std::string>() << '\n';
    } else {
      emit(out);
    }
    return passed ? kExitOk : kExitFailed;
  }
  if (o.n < 1 || o.n > kSymbolicVerifyLimit)
    throw UsageError("symbolic verification needs 1 <= n <= " + std::to_string(kSymbolicVerifyLimit) +
                     "; pass --prime for larger n");
  const GenericContext ctx = make_generic(o.n);
  const IdentityReport report = verify_suite(ctx, o.seed, o.inject_bug);
  if (o.format == "text") {
    for (const auto& c : report.checks) std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
  } else {
    json out = to_json(report);
    out["mode"] = "symbolic";
    emit(out);
  }
  return report.all_passed() ? kExitOk : kExitFailed;
}

int cmd_factor(const Options& o) {
  require_even(o.n);
  require_symbolic_n(o);
  const Side side = parse_side(o.side);
  const AlternatingMatrix a = alternating_from(o.a_source, o.n, o.seed);
  if (!a.invertible()) throw UsageError("A must be invertible");
  const auto progress = progress_for(o, o.n);
  if (progress) progress("building the generic context");
  const GenericContext ctx = make_generic(o.n, allow_large(o));
  const FactorizationCertificate cert =
      side == Side::right ? factor_right(ctx, a, progress) : factor_left(ctx, a, progress);
  if (o.format == "text") {
    std::cout << "n = " << cert.n << ", side = " << to_string(cert.side) << ", d = " << cert.d << '\n';
    for (const auto& [name, ok] : cert.checks) std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
  } else {
    emit(to_json(cert));
  }
  return cert.all_passed() ? kExitOk : kExitFailed;
}

int cmd_refine(const Options& o) {
  require_even(o.n);
  require_symbolic_n(o);
  const AlternatingMatrix a = alternating_from(o.a_source, o.n, o.seed);
  const AlternatingMatrix a_prime = alternating_from(o.a_prime_source, o.n, o.seed + 1);
  if (!a.invertible() || !a_prime.invertible()) throw UsageError("A and A' must be invertible");
  const GenericContext ctx = make_generic(o.n, allow_large(o));
  const auto result = solve_common_refinement(ctx, a, a_prime, o.constant_r);
  if (const auto* w = std::get_if<RefinementWitness>(&result)) {
    if (o.format == "text") {
      std::cout << "r = " << to_string(w->r) << "\nW = " << matrix_text(w->W) << '\n'
                << "solution_space_dim = " << w->solution_space_dim << '\n';
    } else {
      emit(to_json(*w));
    }
    return w->all_passed() ? kExitOk : kExitFailed;
  }
  const auto& none = std::get<NoSolution>(result);
  emit(json{{"n", o.n}, {"result", "no-solution"}, {"reason", none.reason}, {"unknowns", none.unknowns}});
  return kExitFailed;
}

int cmd_rank_check(const Options& o) {
  FactorizationCertificate cert;
  try {
    cert = certificate_from_json(read_json_file(o.cert_file));
  } catch (const std::invalid_argument& e) {
    throw UsageError("certificate '" + o.cert_file + "': " + e.what());
  }
  RatMatrix point;
  try {
    point = rat_matrix_from_json(read_json_file(o.point_file));
  } catch (const std::invalid_argument& e) {
    throw UsageError("point '" + o.point_file + "': " + e.what());
  }
  if (point.rows() != cert.n || point.cols() != cert.n)
    throw UsageError("point must be " + std::to_string(cert.n) + "x" + std::to_string(cert.n));
  const SpecPoint pt = make_spec_point(point);
  if (pt.zero_multiplicity != 1)
    throw UsageError("the rank law assumes A has the eigenvalue 0 with multiplicity exactly 1; this point has "
                     "multiplicity " + std::to_string(pt.zero_multiplicity) + " (rank n-1 is not enough)");

  Options sized = o;
  sized.n = cert.n;
  require_symbolic_n(sized);
  const GenericContext ctx = make_generic(cert.n, allow_large(o));
  const FactorizationCertificate checked = verify_certificate(ctx, cert, progress_for(o, cert.n));

  Report report;
  report.kind = "lemma";
  report.name = "rank law";
  report.n = cert.n;
  report.params = json{{"d", cert.d}, {"side", to_string(cert.side)}, {"point", to_json(point)}};
  report.trials = 1;
  json cert_checks = json::object();
  for (const auto& [name, ok] : checked.checks) {
    cert_checks[name] = ok;
    if (!ok) report.failures.push_back(json{{"check", "certificate: " + name}});
  }
  json out;
  if (checked.all_passed()) {
    const RankReport ranks = lemma_rk_check(checked, pt);
    const auto v = nonlinear_valuation(checked, pt);
    if (!ranks.passed) report.failures.push_back(json{{"check", "ranks"}});
    if (!v || static_cast<int>(*v) != cert.d) report.failures.push_back(json{{"check", "valuation of det(psi(Y))"}});
    report.observations.push_back(to_json(ranks));
    report.observations.push_back(json{{"valuation_det_psi_Y", v ? json(*v) : json("infinity")}});
  }
  out = to_json(report);
  out["certificate_checks"] = cert_checks;
  if (o.format == "text") {
    std::cout << (report.passed() ? "PASS" : "FAIL") << " rank law, n = " << cert.n << ", d = " << cert.d << '\n';
  } else {
    emit(out);
  }
  return report.passed() ? kExitOk : kExitFailed;
}

int cmd_compound(const Options& o) {
  require_symbolic_n(o);
  if (o.m < 1 || o.m > o.n) throw UsageError("--m must lie in [1, n]");
  const GenericContext ctx = make_generic(o.n, allow_large(o));
  const CompoundCheck check = verify_compound(ctx, o.m);
  const bool passed = check.determinant && check.complementary;
  if (o.format == "text") {
    std::cout << (check.determinant ? "PASS " : "FAIL ") << "det(C_" << o.m << "(X)) = det(X)^" << check.exponent
              << " [" << check.method << "]\n"
              << (check.complementary ? "PASS " : "FAIL ") << "C_" << o.m << "(X) D^T = det(X) I\n";
  } else {
    emit(json{{"n", o.n},
              {"m", o.m},
              {"compound", to_json(compound(ctx.X, o.m))},
              {"exponent", check.exponent},
              {"checks", {{"determinant", check.determinant}, {"complementary", check.complementary}}},
              {"method", check.method}});
  }
  return passed ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact factorizations of the adjugate of a generic matrix"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    cmd->add_flag("--allow-large", o.allow_large, "Raise the symbolic size cap (also ADJFAC_ALLOW_LARGE=1)");
    cmd->add_flag("--progress", o.progress, "Report progress on stderr");
  };

  auto* gen = app.add_subcommand("gen", "Print X, det(X) and adj(X)");
  gen->add_option("--n", o.n, "Matrix size")->required();
  add_common(gen);

  auto* verify = app.add_subcommand("verify", "Run the identity suite, symbolically or mod p");
  verify->add_option("--n", o.n, "Matrix size")->required();
  verify->add_option("--prime", o.prime, "Verify by random evaluation over F_p");
  verify->add_option("--trials", o.trials, "Random trials per identity (with --prime)");
  verify->add_option("--seed", o.seed, "Random seed");
  verify->add_flag("--inject-bug", o.inject_bug, "Add the false identity det(adj(X)) = det(X)^n");
  add_common(verify);

  auto* factor = app.add_subcommand("factor", "Build and check a factorization certificate");
  factor->add_option("--n", o.n, "Matrix size (even)")->required();
  factor->add_option("--A", o.a_source, "symplectic | random | path to a matrix JSON file");
  factor->add_option("--side", o.side, "right (d = n-2) or left (d = 1)")->check(CLI::IsMember({"right", "left"}));
  factor->add_option("--seed", o.seed, "Seed for --A random");
  add_common(factor);

  auto* refine = app.add_subcommand("refine", "Solve adj(X) = A (r X^T + X^T W X^T) A'");
  refine->add_option("--n", o.n, "Matrix size (even)")->required();
  refine->add_option("--A", o.a_source, "symplectic | J | -J | random | path to a matrix JSON file");
  refine->add_option("--Aprime", o.a_prime_source, "As --A");
  refine->add_option("--seed", o.seed, "Seed for random sources");
  refine->add_flag("--constant-r", o.constant_r, "Restrict r to an integer");
  add_common(refine);

  auto* rank = app.add_subcommand("rank-check", "Check the rank law of a certificate at a point");
  rank->add_option("--cert", o.cert_file, "Certificate JSON file")->required();
  rank->add_option("--point", o.point_file, "Point matrix JSON file")->required();
  add_common(rank);

  auto* comp = app.add_subcommand("compound", "Print C_m(X) and check its determinant");
  comp->add_option("--n", o.n, "Matrix size")->required();
  comp->add_option("--m", o.m, "Order of the compound")->required();
  add_common(comp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(o);
    if (verify->parsed()) return cmd_verify(o);
    if (factor->parsed()) return cmd_factor(o);
    if (refine->parsed()) return cmd_refine(o);
    if (rank->parsed()) return cmd_rank_check(o);
    if (comp->parsed()) return cmd_compound(o);
  } catch (const TheoremViolation& e) {
    std::cerr << "adjfac: check failed: " << e.what() << '\n';
    return kExitFailed;
  } catch (const std::exception& e) {
    std::cerr << "adjfac: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
