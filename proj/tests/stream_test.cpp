#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ordo/stream.hpp"

using namespace ordo;

namespace {

Poly xv(Var v) { return Poly::variable(v); }

Poly pw(const Poly& p, int n) {
  Poly r = Poly::constant(1);
  for (int i = 0; i < n; ++i) r = poly_mul(r, p);
  return r;
}

void all_monomials(const std::vector<Var>& vars, std::uint64_t maxdeg,
                   std::vector<Monomial>& out) {
  out.push_back(Monomial());
  std::vector<Monomial> frontier = out;
  for (std::uint64_t d = 0; d < maxdeg; ++d) {
    std::vector<Monomial> next;
    for (const auto& m : frontier)
      for (Var v : vars) {
        Monomial m2 = m;
        m2.set_exponent(v, m.exponent_of(v) + 1);
        next.push_back(m2);
      }
    std::sort(next.begin(), next.end(),
              [](const Monomial& a, const Monomial& b) { return a < b; });
    next.erase(std::unique(next.begin(), next.end()), next.end());
    out.insert(out.end(), next.begin(), next.end());
    frontier = next;
  }
}

bool ops_agree(const OpPtr& A, const OpPtr& B, const std::vector<Var>& vars,
               std::uint64_t maxdeg) {
  std::vector<Monomial> ms;
  all_monomials(vars, maxdeg, ms);
  for (const auto& m : ms) {
    Poly f = Poly::term(m, 1);
    if (!(ordo::apply(A, f) == ordo::apply(B, f))) return false;
  }
  return true;
}

Poly random_poly(std::mt19937& rng, int max_var = 4, int max_exp = 3) {
  std::uniform_int_distribution<int> nterms(0, 3), pick(0, 2), ed(1, max_exp),
      cd(-3, 3);
  Poly p;
  for (int k = nterms(rng); k > 0; --k) {
    Monomial m;
    for (int v = 1; v <= max_var; ++v)
      if (pick(rng) == 0) m.set_exponent(static_cast<Var>(v), ed(rng));
    p.add_term(m, Rat(cd(rng)));
  }
  return p;
}

}  // namespace

TEST_CASE("application of the catalogue operators") {
  OpPtr d2 = make_uniform_family(2);
  CHECK(ordo::apply(d2, pw(xv(1), 2) + pw(xv(3), 4)) ==
        Poly::constant(2) + pw(xv(3), 2).scale(12));
  CHECK(ordo::apply(make_d_omega(), pw(xv(3), 3)) == Poly::constant(6));
  CHECK(ordo::apply(make_d_omega(), Poly::constant(1)).is_zero());

  // Sh f(x) = f(x+1)
  OpPtr sh = make_shift(1);
  CHECK(ordo::apply(sh, pw(xv(1), 2)) ==
        pw(xv(1), 2) + xv(1).scale(2) + Poly::constant(1));
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> ed(0, 10), cd(-5, 5);
  for (int t = 0; t < 50; ++t) {
    Poly f, shifted;
    Poly xp1 = xv(1) + Poly::constant(1);
    for (int e = 0; e <= 10; ++e) {
      int c = cd(rng);
      if (c == 0) continue;
      f = f + pw(xv(1), e).scale(c);
      shifted = shifted + pw(xp1, e).scale(c);
    }
    CHECK(ordo::apply(sh, f) == shifted);
  }
}

TEST_CASE("support bounds") {
  CHECK(support_bound(make_d_omega(), {1, 2, 3, 4, 5}, 9) == 6);
  CHECK(support_bound(make_shift(1), {1}, 7) == 8);
  CHECK(support_bound(make_d_infinity(), {1, 2, 4}, 9) == 3);
  // truncation soundness for D_omega on random inputs
  std::mt19937 rng(6);
  for (int t = 0; t < 50; ++t) {
    Poly f = random_poly(rng);
    std::uint64_t n = support_bound(make_d_omega(), f.variables(), f.degree());
    Poly manual;
    for (std::uint64_t i = 1; i < n + 5; ++i) {
      FamilySpec s;
      s.pattern = SingleVarPat{{1, 0}, {1, 0}};
      manual = manual + apply_finite(s.term(i), f);
    }
    CHECK(ordo::apply(make_d_omega(), f) == manual);
  }
}

TEST_CASE("theta closed forms") {
  // theta(x3, D_omega) = -3 d3^2
  OpPtr t = theta_var(3, make_d_omega());
  CHECK(t == simplify(t));
  CHECK(ops_agree(t, OpExpr::finite(WeylOp::derivative(3, 2).scale(-3)),
                  {1, 2, 3, 4}, 4));

  // theta(y, D_{w+2}) = -2 D_{w+1}
  OpPtr got = theta_var(y_var(), make_d_omega_plus(2));
  OpPtr want = OpExpr::scale(-2, make_d_omega_plus(1));
  CHECK(ops_agree(got, want, {1, 2, 3, y_var()}, 5));

  // theta(x, Sh) = -Sh structurally
  auto lambda = proportional(theta_var(1, make_shift(1)), make_shift(1));
  REQUIRE(lambda.has_value());
  CHECK(*lambda == -1);
}

TEST_CASE("iterated theta on D_{w+n} reaches scaled D_w") {
  for (std::uint64_t n = 1; n <= 3; ++n) {
    OpPtr d = make_d_omega_plus(n);
    for (std::uint64_t k = 0; k < n; ++k) d = theta_var(y_var(), d);
    Rat expect = 1;
    for (std::uint64_t k = 1; k <= n; ++k) expect *= Rat(k);
    if (n % 2 == 1) expect = -expect;
    CHECK(ops_agree(d, OpExpr::scale(expect, make_d_omega()),
                    {1, 2, 3, 4, 5, 6, y_var()}, 6));
  }
}

TEST_CASE("iterated theta on D_infinity") {
  for (std::uint64_t n = 1; n <= 4; ++n) {
    OpPtr d = make_d_infinity();
    for (Var v = 1; v <= n; ++v) d = theta_var(v, d);
    if (n % 2 == 1) d = simplify(OpExpr::scale(-1, d));
    // expected: id + prefix family starting at x_{n+1}
    FamilySpec tail;
    tail.pattern = PrefixPat{static_cast<Var>(n + 1)};
    OpPtr want = OpExpr::sum({OpExpr::identity(), OpExpr::family(tail)});
    CHECK(ops_agree(d, want, {1, 2, 3, 4, 5, 6, 7}, 5));
  }
}

TEST_CASE("theta coherence on sampled operators") {
  std::mt19937 rng(7);
  std::vector<OpPtr> ops{make_uniform_family(2), make_d_omega(),
                         make_d_infinity(), make_shift(1),
                         make_d_omega_plus(2)};
  for (int t = 0; t < 40; ++t) {
    Poly r = random_poly(rng, 3, 2), f = random_poly(rng, 3, 3);
    for (const auto& D : ops) {
      OpPtr th = theta(r, D);
      CHECK(ordo::apply(th, f) ==
            poly_mul(r, ordo::apply(D, f)) - ordo::apply(D, poly_mul(r, f)));
    }
  }
}

TEST_CASE("tensorder freshness") {
  std::mt19937 rng(8);
  OpPtr dw = make_d_omega();
  OpPtr td = OpExpr::tensor_der(dw, y_var(), 2);
  for (int t = 0; t < 30; ++t) {
    Poly f = random_poly(rng);
    Poly g = poly_mul(f, pw(Poly::variable(y_var()), 3));
    CHECK(ordo::apply(td, g) == ordo::apply(dw, partial_derive(g, y_var(), 2)));
  }
}

TEST_CASE("linearity of structured sums") {
  std::mt19937 rng(9);
  OpPtr a = make_uniform_family(2), b = make_d_omega();
  OpPtr s = OpExpr::sum({a, b});
  OpPtr sc = OpExpr::scale(Rat(3, 2), a);
  for (int t = 0; t < 30; ++t) {
    Poly f = random_poly(rng);
    CHECK(ordo::apply(s, f) == ordo::apply(a, f) + ordo::apply(b, f));
    CHECK(ordo::apply(sc, f) == ordo::apply(a, f).scale(Rat(3, 2)));
  }
}

TEST_CASE("zero testing") {
  // triple theta chains on the order-2 family vanish
  OpPtr d2 = make_uniform_family(2);
  for (Var i = 1; i <= 3; ++i)
    for (Var j = 1; j <= 3; ++j)
      for (Var l = 1; l <= 3; ++l) {
        OpPtr chain = theta_var(l, theta_var(j, theta_var(i, d2)));
        ZeroVerdict v = zero_test(chain, 4);
        CHECK(v.kind == ZeroVerdict::Zero);
      }
  // some double theta is nonzero
  CHECK(zero_test(theta_var(2, theta_var(2, d2)), 4).kind ==
        ZeroVerdict::NonZero);
  // D_infinity is visibly nonzero with witness x1
  ZeroVerdict v = zero_test(make_d_infinity(), 4);
  CHECK(v.kind == ZeroVerdict::NonZero);
  CHECK(ordo::apply(make_d_infinity(), v.witness) == Poly::constant(1));
  // a cancelling pair of families is zero but not structurally certified
  OpPtr tricky =
      OpExpr::sum({make_shift(1), OpExpr::scale(-1, make_shift(1))});
  CHECK(zero_test(tricky, 3).kind == ZeroVerdict::Unknown);
}

TEST_CASE("limit family D_{w+w}") {
  OpPtr d = make_d_omega_omega();
  // branch 2 acts through y[2]
  Poly f = poly_mul(pw(Poly::variable(y_var(2)), 2), pw(xv(3), 3));
  // branch 2 is D_w ∘ d(y2)^2: d(y2)^2 then D_w; other branches kill f
  Poly expect = ordo::apply(make_d_omega(), partial_derive(f, y_var(2), 2));
  CHECK(ordo::apply(d, f) == expect);
  CHECK(ordo::apply(d, Poly::constant(1)).is_zero());
  // theta through a trigger variable picks out one branch
  OpPtr th = theta_var(y_var(2), d);
  OpPtr want = OpExpr::scale(-2, OpExpr::tensor_der(make_d_omega(), y_var(2), 1));
  CHECK(ops_agree(th, want, {1, 2, 3, y_var(2)}, 5));
  // theta through a shared x-variable maps every branch
  OpPtr thx = theta_var(2, d);
  Poly g = poly_mul(Poly::variable(y_var(1)), pw(xv(2), 3));
  Poly manual = poly_mul(xv(2), ordo::apply(d, g)) - ordo::apply(d, poly_mul(xv(2), g));
  CHECK(ordo::apply(thx, g) == manual);
}

TEST_CASE("proportionality detection") {
  CHECK(*proportional(OpExpr::scale(3, make_d_omega()), make_d_omega()) == 3);
  CHECK(!proportional(make_d_omega(), make_uniform_family(2)).has_value());
  CHECK(!proportional(make_shift(1), make_shift(2)).has_value());
  OpPtr a = OpExpr::finite(WeylOp::derivative(1, 2).scale(4));
  OpPtr b = OpExpr::finite(WeylOp::derivative(1, 2).scale(-2));
  CHECK(*proportional(a, b) == -2);
}

TEST_CASE("variable support and disjointness") {
  VarSet dw = varset(make_d_omega());
  VarSet fy = varset(OpExpr::finite(WeylOp::derivative(y_var())));
  CHECK(provably_disjoint(dw, fy));
  CHECK_FALSE(provably_disjoint(dw, varset(make_uniform_family(2))));
  CHECK_FALSE(provably_disjoint(dw, varset(make_d_infinity())));
  VarSet lim = varset(make_d_omega_omega());
  CHECK(lim.opaque);
  CHECK_FALSE(provably_disjoint(lim, fy));
}

TEST_CASE("printing") {
  CHECK(to_string(make_d_infinity()) == "prefixfamily(i>=1)");
  CHECK(to_string(make_d_omega()) == "family(i>=1, d(x[i])^(i))");
  CHECK(to_string(make_shift(1)) == "family(i>=0, ((1)/fact(i))*d(x1)^(i))");
  CHECK(to_string(make_d_omega_omega()) == "limitfamily(D[w*2])");
}
