#include <map>

#include "adjfac/adjfactor.hpp"

namespace adjfac {

namespace {

// Coefficient of one monomial in one matrix entry (row-major index).
using EqKey = std::pair<int, Monomial>;
using SparseVec = std::map<EqKey, Rational>;
using Combination = std::map<std::size_t, Rational>;

void collect(const PolyMatrix& m, SparseVec& out) {
  const int n = static_cast<int>(m.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const Term& t : m(i, j).terms()) out[{i * n + j, t.monomial}] = Rational(t.coeff);
}

void axpy(SparseVec& v, const Rational& c, const SparseVec& w) {
  for (const auto& [key, value] : w) {
    auto [it, inserted] = v.try_emplace(key, 0);
    it->second -= c * value;
    if (sgn(it->second) == 0) v.erase(it);
  }
}

void axpy(Combination& v, const Rational& c, const Combination& w) {
  for (const auto& [key, value] : w) {
    auto [it, inserted] = v.try_emplace(key, 0);
    it->second -= c * value;
    if (sgn(it->second) == 0) v.erase(it);
  }
}

struct Pivot {
  EqKey key;
  SparseVec vec;     // pivot coefficient 1, no earlier pivot keys
  Combination combo;  // vec as a combination of the original columns
};

/// Incremental column-space basis: columns are reduced against earlier
/// pivots in insertion order, so the first independent columns win.
class ColumnEliminator {
 public:
  bool add_column(std::size_t index, SparseVec v) {
    Combination combo{{index, Rational(1)}};
    reduce(v, combo);
    if (v.empty()) return false;
    const EqKey key = v.begin()->first;
    const Rational inv = 1 / v.begin()->second;
    for (auto& [k, value] : v) value *= inv;
    for (auto& [k, value] : combo) value *= inv;
    pivots_.push_back(Pivot{key, std::move(v), std::move(combo)});
    return true;
  }

  /// Coefficients c with sum c_i column_i = target, if any.
  std::optional<Combination> express(SparseVec target) const {
    Combination combo;
    reduce(target, combo);
    if (!target.empty()) return std::nullopt;
    for (auto& [k, value] : combo) value = -value;
    return combo;
  }

  std::size_t rank() const { return pivots_.size(); }

 private:
  void reduce(SparseVec& v, Combination& combo) const {
    for (const Pivot& p : pivots_) {
      auto it = v.find(p.key);
      if (it == v.end()) continue;
      const Rational c = it->second;
      axpy(v, c, p.vec);
      axpy(combo, c, p.combo);
    }
  }

  std::vector<Pivot> pivots_;
};

void monomials_of_degree(int vars, int degree, std::vector<Monomial>& out) {
  Monomial m;
  auto rec = [&](auto&& self, int first, int left) -> void {
    if (left == 0) {
      out.push_back(m);
      return;
    }
    for (int v = first; v < vars; ++v) {
      const auto slot = static_cast<std::size_t>(v);
      m.set_exponent(slot, m.exponent(slot) + 1);
      self(self, v, left - 1);
      m.set_exponent(slot, m.exponent(slot) - 1);
    }
  };
  if (degree >= 0) rec(rec, 0, degree);
}

struct Unknown {
  int k = -1;  // W entry row, or -1 for a coefficient of r
  int l = -1;
  Monomial monomial;
};

}  // namespace

std::variant<RefinementWitness, NoSolution> solve_common_refinement(const GenericContext& ctx,
                                                                    const AlternatingMatrix& a,
                                                                    const AlternatingMatrix& a_prime,
                                                                    bool constant_r) {
  const int n = ctx.n;
  if (n % 2 != 0) throw std::invalid_argument("refine: n must be even");
  if (a.n() != n || a_prime.n() != n) throw DimensionMismatch("refine: alternating matrices have the wrong size");
  if (!a.invertible() || !a_prime.invertible()) throw std::invalid_argument("refine: A and A' must be invertible");

  const PolyMatrix ap = to_poly(a.entries());
  const PolyMatrix ap_prime = to_poly(a_prime.entries());
  const PolyMatrix xt = transpose(ctx.X);
  // u_k = A X^T e_k, v_l^T = e_l^T X^T A', so A X^T E_kl X^T A' = u_k v_l^T.
  const PolyMatrix u = mat_mul(ap, xt);
  const PolyMatrix v = mat_mul(xt, ap_prime);
  const PolyMatrix r_column = mat_mul(ap, xt, ap_prime);

  SparseVec target;
  collect(ctx.adjX, target);

  NoSolution failure;
  for (const bool widen : {false, true}) {
    const int top = n - 3;
    if (widen && top <= 0) break;  // nothing new to try
    std::vector<Monomial> r_monomials;
    std::vector<Monomial> w_monomials;
    const int r_top = constant_r ? 0 : top + 1;
    for (int deg = widen ? 0 : r_top; deg <= r_top; ++deg) monomials_of_degree(n * n, deg, r_monomials);
    for (int deg = widen ? 0 : top; deg <= top; ++deg) monomials_of_degree(n * n, deg, w_monomials);

    std::vector<Unknown> unknowns;
    for (const Monomial& m : r_monomials) unknowns.push_back(Unknown{-1, -1, m});
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (const Monomial& m : w_monomials) unknowns.push_back(Unknown{k, l, m});

    ColumnEliminator elim;
    std::size_t equations = target.size();
    for (std::size_t idx = 0; idx < unknowns.size(); ++idx) {
      const Unknown& w = unknowns[idx];
      const Polynomial mono = Polynomial::from_terms({Term{w.monomial, Integer(1)}}, 0, n);
      PolyMatrix col_matrix(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          col_matrix(i, j) = w.k < 0 ? mono * r_column(i, j) : mono * u(i, w.k) * v(w.l, j);
      SparseVec col;
      collect(col_matrix, col);
      equations += col.size();
      elim.add_column(idx, std::move(col));
    }

    auto solution = elim.express(target);
    failure.unknowns = unknowns.size();
    failure.equations = equations;
    if (!solution) {
      failure.reason = widen ? "no solution with W of degree at most n-3"
                             : "no solution with W homogeneous of degree n-3";
      if (constant_r) failure.reason += " and constant r";
      continue;
    }
    for (const auto& [idx, c] : *solution) {
      if (c.get_den() != 1) {
        failure.reason = "elimination produced a non-integral solution";
        return failure;
      }
    }

    RefinementWitness w;
    w.n = n;
    w.A = a.entries();
    w.A_prime = a_prime.entries();
    w.w_degree = top;
    w.widened = widen;
    w.constant_r = constant_r;
    w.unknowns = unknowns.size();
    w.solution_space_dim = unknowns.size() - elim.rank();
    std::vector<Term> r_terms;
    std::vector<std::vector<std::vector<Term>>> entries(n, std::vector<std::vector<Term>>(n));
    for (const auto& [idx, c] : *solution) {
      const Unknown& unk = unknowns[idx];
      if (unk.k < 0) {
        r_terms.push_back(Term{unk.monomial, c.get_num()});
      } else {
        entries[unk.k][unk.l].push_back(Term{unk.monomial, c.get_num()});
      }
    }
    w.r = Polynomial::from_terms(std::move(r_terms), 0, n);
    w.W = PolyMatrix(n, n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) w.W(k, l) = Polynomial::from_terms(std::move(entries[k][l]), 0, n);
    w.checks = verify_refinement(ctx, w);
    return w;
  }
  return failure;
}

std::map<std::string, bool> verify_refinement(const GenericContext& ctx, const RefinementWitness& w) {
  const int n = ctx.n;
  std::map<std::string, bool> checks;
  const PolyMatrix ap = to_poly(w.A);
  const PolyMatrix ap_prime = to_poly(w.A_prime);
  const PolyMatrix xt = transpose(ctx.X);
  PolyMatrix r_identity = PolyMatrix::Constant(n, n, Polynomial(0));
  for (int i = 0; i < n; ++i) r_identity(i, i) = w.r;

  const PolyMatrix xt_w = mat_mul(xt, w.W);
  const PolyMatrix inner = scaled(xt, w.r) + mat_mul(xt_w, xt);
  checks["reconstruction"] = equal(mat_mul(ap, inner, ap_prime), ctx.adjX);
  // adj(X) = (A X^T) [(r I + W X^T) A']
  const PolyMatrix left_cofactor = mat_mul(PolyMatrix(r_identity + mat_mul(w.W, xt)), ap_prime);
  checks["left_divisible"] = equal(mat_mul(mat_mul(ap, xt), left_cofactor), ctx.adjX);
  // adj(X) = [A (r I + X^T W)] (X^T A')
  const PolyMatrix right_cofactor = mat_mul(ap, PolyMatrix(r_identity + xt_w));
  checks["right_divisible"] = equal(mat_mul(right_cofactor, mat_mul(xt, ap_prime)), ctx.adjX);
  bool homogeneous = true;
  if (!w.widened) {
    for (Eigen::Index i = 0; i < w.W.rows(); ++i)
      for (Eigen::Index j = 0; j < w.W.cols(); ++j) {
        const Polynomial& p = w.W(i, j);
        if (!p.is_zero() && (!p.is_homogeneous() || static_cast<int>(p.total_degree()) != w.w_degree))
          homogeneous = false;
      }
  }
  const int r_degree = w.constant_r ? 0 : w.w_degree + 1;
  if (!w.widened && !w.r.is_zero() && (!w.r.is_homogeneous() || static_cast<int>(w.r.total_degree()) != r_degree))
    homogeneous = false;
  checks["degrees"] = homogeneous;
  return checks;
}

}  // namespace adjfac
