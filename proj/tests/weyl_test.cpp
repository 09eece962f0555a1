#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ordo/weyl.hpp"

using namespace ordo;

namespace {

Poly xv(Var v) { return Poly::variable(v); }

Poly pw(const Poly& p, int n) {
  Poly r = Poly::constant(1);
  for (int i = 0; i < n; ++i) r = poly_mul(r, p);
  return r;
}

Poly random_poly(std::mt19937& rng, int max_var = 3, int max_exp = 3) {
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

WeylOp random_op(std::mt19937& rng, int max_terms = 4, int max_deg = 3) {
  std::uniform_int_distribution<int> nterms(1, max_terms), pick(0, 2),
      ed(1, max_deg), cd(-3, 3);
  WeylOp A;
  for (int k = nterms(rng); k > 0; --k) {
    Monomial a, b;
    for (int v = 1; v <= 3; ++v) {
      if (pick(rng) == 0) a.set_exponent(static_cast<Var>(v), ed(rng));
      if (pick(rng) == 0) b.set_exponent(static_cast<Var>(v), ed(rng));
    }
    A.add_term(a, b, Rat(cd(rng)));
  }
  return A;
}

// Check A and B act identically on all monomials in the sampled variables up
// to a degree bound; this is the evaluation oracle used against compose and
// normal_form.
bool same_action(const WeylOp& A, const WeylOp& B, int max_var = 3,
                 int max_deg = 4) {
  std::vector<Monomial> probes{Monomial()};
  for (int v = 1; v <= max_var; ++v) {
    std::vector<Monomial> next;
    for (const auto& m : probes)
      for (int e = 0; e <= max_deg; ++e) {
        Monomial m2 = m;
        m2.set_exponent(static_cast<Var>(v), e);
        if (m2.degree() <= static_cast<std::uint64_t>(max_deg)) next.push_back(m2);
      }
    probes = next;
  }
  for (const auto& m : probes) {
    Poly f = Poly::term(m, 1);
    if (!(apply_finite(A, f) == apply_finite(B, f))) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("normal ordering") {
  // d1 ∘ x1 = x1 d1 + 1
  WeylOp lhs = normal_form({DeriveFactor{1, 1}, MulFactor{xv(1)}});
  WeylOp want = WeylOp::term(Monomial::var(1), Monomial::var(1), 1) +
                WeylOp::identity();
  CHECK(lhs == want);
  CHECK(same_action(lhs, want));

  // x1 ∘ d1 stays normal
  CHECK(normal_form({MulFactor{xv(1)}, DeriveFactor{1, 1}}) ==
        WeylOp::term(Monomial::var(1), Monomial::var(1), 1));

  // d1^2 ∘ x1 = x1 d1^2 + 2 d1
  WeylOp lhs2 = normal_form({DeriveFactor{1, 2}, MulFactor{xv(1)}});
  WeylOp want2 = WeylOp::term(Monomial::var(1), Monomial::var(1, 2), 1) +
                 WeylOp::derivative(1).scale(2);
  CHECK(lhs2 == want2);
  CHECK(same_action(lhs2, want2));
}

TEST_CASE("composition matches function composition") {
  CHECK(compose(WeylOp::derivative(1), WeylOp::derivative(2)) ==
        WeylOp::term(Monomial(), Monomial::var(1).times(Monomial::var(2)), 1));
  CHECK(compose(WeylOp::derivative(1), WeylOp::mult(xv(1))) ==
        WeylOp::term(Monomial::var(1), Monomial::var(1), 1) + WeylOp::identity());
  // Euler operator squared: (x1 d1)^2 = x1^2 d1^2 + x1 d1
  WeylOp euler = WeylOp::term(Monomial::var(1), Monomial::var(1), 1);
  CHECK(compose(euler, euler) ==
        WeylOp::term(Monomial::var(1, 2), Monomial::var(1, 2), 1) + euler);

  std::mt19937 rng(31);
  for (int i = 0; i < 150; ++i) {
    WeylOp A = random_op(rng), B = random_op(rng);
    WeylOp AB = compose(A, B);
    Poly f = random_poly(rng);
    CHECK(apply_finite(AB, f) == apply_finite(A, apply_finite(B, f)));
  }
}

TEST_CASE("composition is associative") {
  std::mt19937 rng(32);
  for (int i = 0; i < 100; ++i) {
    WeylOp A = random_op(rng), B = random_op(rng), C = random_op(rng);
    CHECK(compose(compose(A, B), C) == compose(A, compose(B, C)));
  }
}

TEST_CASE("theta commutator") {
  // theta_{x1}(d1^3) = -3 d1^2
  CHECK(theta_poly(xv(1), WeylOp::derivative(1, 3)) ==
        WeylOp::derivative(1, 2).scale(-3));
  CHECK(theta_poly(xv(2), WeylOp::derivative(1)).is_zero());
  // theta_{x1^2}(d1) = -2 x1
  CHECK(theta_poly(pw(xv(1), 2), WeylOp::derivative(1)) ==
        WeylOp::mult(xv(1)).scale(-2));

  std::mt19937 rng(33);
  for (int i = 0; i < 150; ++i) {
    Poly p = random_poly(rng), q = random_poly(rng), f = random_poly(rng);
    WeylOp A = random_op(rng);
    // derivation identity over the multiplication action
    CHECK(theta_poly(poly_mul(p, q), A) ==
          compose(WeylOp::mult(p), theta_poly(q, A)) +
              compose(theta_poly(p, A), WeylOp::mult(q)));
    // commutator coherence with application
    CHECK(apply_finite(theta_poly(p, A), f) ==
          poly_mul(p, apply_finite(A, f)) - apply_finite(A, poly_mul(p, f)));
  }
}

TEST_CASE("application") {
  CHECK(apply_finite(WeylOp::derivative(1, 2), poly_mul(pw(xv(1), 2), xv(3))) ==
        xv(3).scale(2));
  std::mt19937 rng(1);
  CHECK(apply_finite(random_op(rng), Poly()).is_zero());
  WeylOp euler = WeylOp::term(Monomial::var(1), Monomial::var(1), 1);
  CHECK(apply_finite(euler, pw(xv(1), 5)) == pw(xv(1), 5).scale(5));
}

TEST_CASE("finite order") {
  CHECK(finite_order(WeylOp::derivative(1, 2) + WeylOp::derivative(2)) == 2);
  CHECK(finite_order(WeylOp::mult(pw(xv(1), 3))) == 0);
  CHECK(finite_order(WeylOp::term(Monomial::var(2),
                                  Monomial::var(1).times(Monomial::var(3)), 1)) == 2);
  CHECK_THROWS_AS(finite_order(WeylOp()), ZeroOperator);
}

TEST_CASE("order characterization through iterated theta") {
  std::mt19937 rng(34);
  int tested = 0;
  while (tested < 60) {
    WeylOp A = random_op(rng, 3, 2);
    if (A.is_zero()) continue;
    std::uint64_t n = finite_order(A);
    if (n > 4) continue;
    ++tested;
    auto vars = A.variables();
    if (vars.empty()) vars.push_back(1);
    // every (n+1)-chain over occurring variables vanishes
    std::vector<WeylOp> level{A};
    for (std::uint64_t depth = 0; depth <= n; ++depth) {
      std::vector<WeylOp> next;
      for (const auto& op : level)
        for (Var v : vars) {
          WeylOp t = theta_poly(Poly::variable(v), op);
          if (!t.is_zero()) next.push_back(t);
        }
      if (depth == n) {
        CHECK(next.empty());
      } else {
        // some chain must survive to witness order > depth
        CHECK(!next.empty());
      }
      level = next;
      if (level.empty()) break;
    }
  }
}

TEST_CASE("composition order bound") {
  std::mt19937 rng(35);
  for (int i = 0; i < 100; ++i) {
    WeylOp A = random_op(rng), B = random_op(rng);
    WeylOp AB = compose(A, B);
    if (A.is_zero() || B.is_zero() || AB.is_zero()) continue;
    CHECK(finite_order(AB) <= finite_order(A) + finite_order(B));
  }
  // equality for derivative-only operators
  CHECK(finite_order(compose(WeylOp::derivative(1, 2), WeylOp::derivative(1, 3))) == 5);
}

TEST_CASE("printing") {
  CHECK(WeylOp().to_string() == "0");
  CHECK(WeylOp::identity().to_string() == "1");
  CHECK(WeylOp::derivative(1, 2).to_string() == "d(x1)^2");
  CHECK((WeylOp::term(Monomial::var(1), Monomial::var(1), 1) + WeylOp::identity())
            .to_string() == "x1*d(x1) + 1");
  CHECK(WeylOp::derivative(2).scale(-3).to_string() == "-3*d(x2)");
}
