// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// Pass --long to include the n = 6 factorization.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include "adjfac/adjfactor.hpp"
#include "adjfac/random.hpp"
#include "adjfac/specialize.hpp"

using namespace adjfac;

namespace {

/// Collects failed sub-checks of one criterion.
struct Tally {
  int checks = 0;
  std::vector<std::string> failed;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failed.size() < 5) failed.push_back(what);
    if (!ok && failed.size() == 5) failed.push_back("...");
  }
};

bool run_criterion(int id, const std::string& title, double budget_s, const std::function<void(Tally&)>& body) {
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(t);
  } catch (const std::exception& e) {
    t.failed.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= budget_s;
  const bool ok = t.failed.empty() && in_time;
  std::printf("%s  %2d  %-52s %4d checks  %7.2fs (budget %gs)\n", ok ? "PASS" : "FAIL", id, title.c_str(), t.checks, secs,
              budget_s);
  for (const auto& f : t.failed) std::printf("        - %s\n", f.c_str());
  if (!in_time) std::printf("        - over time budget\n");
  std::fflush(stdout);
  return ok;
}

Polynomial power(const Polynomial& p, unsigned e) {
  Polynomial out(1);
  for (unsigned k = 0; k < e; ++k) out = out * p;
  return out;
}

IntMatrix diag0111() {
  IntMatrix a = IntMatrix::Identity(4, 4);
  a(0, 0) = 0;
  return a;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(ADJFAC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

void check_certificate(Tally& t, const GenericContext& ctx, const AlternatingMatrix& a, const std::string& label) {
  const int n = ctx.n;
  const Polynomial det_a(a.det());
  for (Side side : {Side::right, Side::left}) {
    const std::string tag = label + " " + to_string(side);
    const FactorizationCertificate cert = side == Side::right ? factor_right(ctx, a) : factor_left(ctx, a);
    t.expect(cert.all_passed(), tag + ": certificate checks");
    t.expect(equal(mat_mul(cert.Y, cert.Z), ctx.adjX), tag + ": Y Z = adj(X)");
    const PolyMatrix& nonlinear = side == Side::right ? cert.Y : cert.Z;
    const PolyMatrix& linear = side == Side::right ? cert.Z : cert.Y;
    if (n <= 4) {
      t.expect(det_laplace(nonlinear) * det_a == power(ctx.detX, static_cast<unsigned>(n - 2)),
               tag + ": det(nonlinear) det(A) = det(X)^(n-2)");
      t.expect(det_laplace(linear) == det_a * ctx.detX, tag + ": det(linear) = det(A) det(X)");
    } else {
      t.expect(cert.checks.at("det_Y") && cert.checks.at("det_Z"), tag + ": determinant checks");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  bool long_run = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--long") == 0) long_run = true;

  std::map<int, GenericContext> ctx;
  for (int n = 1; n <= 5; ++n) ctx.emplace(n, make_generic(n));
  bool all = true;

  all &= run_criterion(1, "fundamental identities, n = 1..5", 5, [&](Tally& t) {
    for (int n = 1; n <= 5; ++n)
      for (const auto& c : verify_fundamental(ctx.at(n)).checks) t.expect(c.passed, "n=" + std::to_string(n) + " " + c.name);
  });

  all &= run_criterion(2, "multiplicativity and conjugation", 5, [&](Tally& t) {
    for (int n = 2; n <= 4; ++n) {
      for (std::uint64_t k = 0; k < 100; ++k) {
        Rng rng = trial_rng(200 + static_cast<std::uint64_t>(n), k);
        const IntMatrix a = random_int_matrix(n, n, rng);
        const IntMatrix b = random_int_matrix(n, n, rng);
        t.expect(equal(adjugate(IntMatrix(mat_mul(a, b))), mat_mul(adjugate(b), adjugate(a))),
                 "adj(AB), n=" + std::to_string(n) + " pair " + std::to_string(k));
      }
      for (std::uint64_t k = 0; k < 50; ++k) {
        Rng rng = trial_rng(300 + static_cast<std::uint64_t>(n), k);
        const IntMatrix a = random_int_matrix(n, n, rng);
        const auto [u, u_inv] = random_unimodular_pair<Integer>(n, rng, 3 * n);
        t.expect(det_bareiss(u) == 1, "det(U) = 1");
        t.expect(equal(adjugate(IntMatrix(mat_mul(u, a, u_inv))), mat_mul(u, adjugate(a), u_inv)),
                 "conjugation, n=" + std::to_string(n) + " draw " + std::to_string(k));
      }
    }
  });

  all &= run_criterion(3, "sandwich divisibility, n = 2..5", 60, [&](Tally& t) {
    for (int n = 2; n <= 5; ++n) {
      std::vector<AlternatingMatrix> as;
      as.emplace_back(IntMatrix::Zero(n, n));
      IntMatrix rank2 = IntMatrix::Zero(n, n);
      rank2(0, 1) = 1;
      rank2(1, 0) = -1;
      as.emplace_back(rank2);
      for (std::uint64_t s = 0; as.size() < 10; ++s) as.push_back(random_skew(n, 400 + s));
      for (std::size_t k = 0; k < as.size(); ++k) {
        const PolyMatrix s = sandwich(ctx.at(n), as[k]);
        bool divisible = true;
        for (Eigen::Index i = 0; i < n; ++i)
          for (Eigen::Index j = 0; j < n; ++j) divisible = divisible && try_exact_div(s(i, j), ctx.at(n).detX).has_value();
        t.expect(divisible, "n=" + std::to_string(n) + " A#" + std::to_string(k));
      }
    }
  });

  all &= run_criterion(4, "factorization certificates, n = 2, 4", 60, [&](Tally& t) {
    const FactorizationCertificate two = factor_right(ctx.at(2), standard_symplectic(2));
    t.expect(equal(two.Y, to_poly(IntMatrix(-standard_symplectic(2).entries()))), "n=2: Y = -J");
    for (int n : {2, 4}) {
      check_certificate(t, ctx.at(n), standard_symplectic(n), "n=" + std::to_string(n) + " J");
      for (std::uint64_t seed = 1; seed <= 3; ++seed)
        check_certificate(t, ctx.at(n), random_alternating(n, seed),
                          "n=" + std::to_string(n) + " seed " + std::to_string(seed));
    }
  });

  const FactorizationCertificate right4 = factor_right(ctx.at(4), standard_symplectic(4));
  const FactorizationCertificate left4 = factor_left(ctx.at(4), standard_symplectic(4));
  std::vector<SpecPoint> points{make_spec_point(diag0111())};
  for (std::uint64_t seed = 0; seed < 20; ++seed) points.push_back(random_multiplicity_one_point(4, 500 + seed));

  all &= run_criterion(5, "rank law at multiplicity-one points, n = 4", 30, [&](Tally& t) {
    for (const auto* cert : {&right4, &left4})
      for (std::size_t k = 0; k < points.size(); ++k) {
        const RankReport r = lemma_rk_check(*cert, points[k]);
        t.expect(r.passed, "d=" + std::to_string(cert->d) + " point " + std::to_string(k));
      }
    IntMatrix jordan = IntMatrix::Zero(4, 4);
    for (int i = 0; i < 3; ++i) jordan(i, i + 1) = 1;
    bool rejected = false;
    try {
      lemma_rk_check(right4, make_spec_point(jordan));
    } catch (const PreconditionViolation&) {
      rejected = true;
    }
    t.expect(rejected, "Jordan block rejected");
  });

  all &= run_criterion(6, "valuation of det(psi(Y)) and valuation bounds", 30, [&](Tally& t) {
    for (const auto* cert : {&right4, &left4})
      for (std::size_t k = 0; k < points.size(); ++k)
        t.expect(nonlinear_valuation(*cert, points[k]) == static_cast<unsigned>(cert->d),
                 "d=" + std::to_string(cert->d) + " point " + std::to_string(k));
    const Polynomial tt = Polynomial::t();
    for (std::uint64_t s = 0; s < 100; ++s) {
      Rng rng = trial_rng(600, s);
      PolyMatrix m(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = Polynomial(uniform_int(rng, -5, 5)) + tt.scaled(uniform_int(rng, -5, 5));
      t.expect(verify_dvr_bound(m).holds, "nullity bound, matrix " + std::to_string(s));
      t.expect(verify_ufd_bound(m).holds, "rank bound, matrix " + std::to_string(s));
    }
  });

  all &= run_criterion(7, "projector samples of the Grassmann map, n = 4", 30, [&](Tally& t) {
    for (const auto* cert : {&right4, &left4})
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ProjectorPoint pp = random_projector(4, 700 + seed);
        t.expect(equal(mat_mul(pp.E, pp.E), pp.E), "E^2 = E");
        const GrassmannSample g = grassmann_map_sample(*cert, pp);
        t.expect(g.dimension == 3 - cert->d, "dimension, d=" + std::to_string(cert->d));
        t.expect(g.contained, "containment, d=" + std::to_string(cert->d));
      }
  });

  all &= run_criterion(8, "common refinement, n = 2 and n = 4", 60, [&](Tally& t) {
    const AlternatingMatrix j2 = standard_symplectic(2);
    const auto two = solve_common_refinement(ctx.at(2), j2, j2);
    t.expect(std::holds_alternative<RefinementWitness>(two), "n=2 solved");
    if (const auto* w = std::get_if<RefinementWitness>(&two)) {
      t.expect(w->r == Polynomial(-1), "n=2: r = -1");
      t.expect(is_zero_matrix(w->W), "n=2: W = 0");
    }
    const AlternatingMatrix j4 = standard_symplectic(4);
    const auto four = solve_common_refinement(ctx.at(4), j4, j4);
    t.expect(std::holds_alternative<RefinementWitness>(four), "n=4 solved");
    if (const auto* w = std::get_if<RefinementWitness>(&four)) {
      const PolyMatrix xt = ctx.at(4).X.transpose();
      const PolyMatrix jp = to_poly(j4.entries());
      const PolyMatrix inner = scaled(xt, w->r) + mat_mul(xt, w->W, xt);
      t.expect(equal(mat_mul(jp, inner, jp), ctx.at(4).adjX), "n=4: back-multiplication");
    }
  });

  all &= run_criterion(9, "compound identities, 1 <= m <= n <= 5", 120, [&](Tally& t) {
    for (int n = 1; n <= 5; ++n)
      for (int m = 1; m <= n; ++m) {
        const CompoundCheck c = verify_compound(ctx.at(n), m);
        const std::string tag = "n=" + std::to_string(n) + " m=" + std::to_string(m);
        t.expect(c.determinant, tag + " determinant");
        t.expect(c.complementary, tag + " complementary");
      }
  });

  all &= run_criterion(10, "feasibility table and CLI exit codes", 60, [&](Tally& t) {
    for (int n = 2; n <= 8; ++n)
      for (int d = 0; d <= n; ++d) {
        Feasibility expected = Feasibility::infeasible_exponent;
        if (d > 0 && d < n - 1) {
          if (n % 2 == 1) {
            expected = Feasibility::infeasible_odd;
          } else if (d == 1 || d == n - 2) {
            expected = Feasibility::feasible;
          }
        }
        t.expect(theorem_main_guard(n, d) == expected, "guard(" + std::to_string(n) + ", " + std::to_string(d) + ")");
      }
    const auto dir = std::filesystem::temp_directory_path() / "adjfac-acceptance";
    std::filesystem::create_directories(dir);
    const std::string point = (dir / "point.json").string();
    const std::string jordan = (dir / "jordan.json").string();
    const std::string cert = (dir / "cert.json").string();
    std::ofstream(point) << R"({"rows":4,"cols":4,"entries":[[0,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]})";
    std::ofstream(jordan) << R"({"rows":4,"cols":4,"entries":[[0,1,0,0],[0,0,1,0],[0,0,0,1],[0,0,0,0]]})";
    std::ofstream(cert) << to_json(right4).dump();
    const std::pair<const char*, int> table[] = {
        {"gen --n 2", 0},
        {"gen --n 7", 2},
        {"verify --n 3", 0},
        {"verify --n 3 --inject-bug", 1},
        {"factor --n 3", 2},
        {"factor --n 4 --A symplectic --side right", 0},
        {"factor --n 4 --A symplectic --side left", 0},
        {"refine --n 2 --A J --Aprime J", 0},
        {"refine --n 2 --A /nonexistent/file.json --Aprime J", 2},
    };
    for (const auto& [args, code] : table) t.expect(cli(args) == code, std::string("adjfac ") + args);
    t.expect(cli("rank-check --cert " + cert + " --point " + point) == 0, "rank-check good point");
    t.expect(cli("rank-check --cert " + cert + " --point " + jordan) == 2, "rank-check Jordan block");
    FactorizationCertificate bad = right4;
    bad.Y(0, 0) += Polynomial(1);
    std::ofstream(cert) << to_json(bad).dump();
    t.expect(cli("rank-check --cert " + cert + " --point " + point) == 1, "rank-check tampered certificate");
    std::filesystem::remove_all(dir);
  });

  all &= run_criterion(11, "random evaluation over F_p, n = 8, 10", 60, [&](Tally& t) {
    const std::uint64_t p = 2147483647ULL;
    for (int n : {8, 10})
      for (SzIdentity id : proved_identities()) {
        const Report r = sz_check(id, n, p, 50, 1100 + static_cast<std::uint64_t>(n));
        t.expect(r.passed(), to_string(id) + " n=" + std::to_string(n));
      }
    t.expect(!sz_check(SzIdentity::corrupted_det_adj, 8, p, 50, 1199).passed(), "injected bug detected");
  });

  if (long_run) {
    all &= run_criterion(4, "factorization certificates, n = 6 (long)", 600, [&](Tally& t) {
      const GenericContext c6 = make_generic(6);
      check_certificate(t, c6, standard_symplectic(6), "n=6 J");
    });
  }

  std::printf("%s\n", all ? "ALL PASS" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}
