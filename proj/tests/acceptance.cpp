// End-to-end acceptance checks. Each numbered criterion prints exactly one
// PASS/FAIL line; the process exits nonzero when any of them fails.
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "ordo/construct.hpp"
#include "ordo/errors.hpp"
#include "ordo/localize.hpp"
#include "ordo/order.hpp"
#include "ordo/parse.hpp"
#include "ordo/torsion.hpp"
#include "ordo/weyl.hpp"

using namespace ordo;

namespace {

int failures = 0;
std::string note;

void check(bool ok, const std::string& what) {
  if (!ok && note.empty()) note = what;
}

void criterion(int n, const std::string& name, const std::function<void()>& f) {
  note.clear();
  try {
    f();
  } catch (const std::exception& e) {
    check(false, std::string("exception: ") + e.what());
  }
  if (note.empty()) {
    std::cout << "PASS criterion " << n << ": " << name << "\n";
  } else {
    std::cout << "FAIL criterion " << n << ": " << name << " — " << note
              << "\n";
    ++failures;
  }
}

std::vector<Monomial> monomials_up_to(const std::vector<Var>& vars,
                                      std::uint64_t dmax) {
  std::vector<Monomial> out{Monomial()};
  std::size_t lo = 0;
  for (std::uint64_t d = 0; d < dmax; ++d) {
    std::size_t hi = out.size();
    for (std::size_t i = lo; i < hi; ++i)
      for (Var v : vars) {
        Monomial m = out[i].times(Monomial::var(v));
        bool seen = false;
        for (std::size_t j = lo; j < out.size() && !seen; ++j)
          seen = out[j] == m;
        if (!seen) out.push_back(m);
      }
    lo = hi;
  }
  return out;
}

bool same_on(const OpPtr& A, const OpPtr& B, const std::vector<Var>& vars,
             std::uint64_t dmax) {
  for (const auto& m : monomials_up_to(vars, dmax))
    if (ordo::apply(A, Poly::term(m, 1)) != ordo::apply(B, Poly::term(m, 1)))
      return false;
  return true;
}

WeylOp random_weyl(std::mt19937& rng, Var vmax, std::uint64_t terms) {
  std::uniform_int_distribution<int> exp(0, 2), der(0, 3), coef(-4, 4);
  std::uniform_int_distribution<Var> var(1, vmax);
  WeylOp op;
  for (std::uint64_t t = 0; t < terms; ++t) {
    Monomial a, b;
    a.set_exponent(var(rng), exp(rng));
    b.set_exponent(var(rng), der(rng));
    int c = coef(rng);
    if (c) op.add_term(a, b, c);
  }
  return op;
}

Ordinal random_ordinal(std::mt19937& rng) {
  std::uniform_int_distribution<int> nterms(0, 3), small(0, 3), coeff(1, 5);
  Ordinal r;
  for (int k = nterms(rng); k > 0; --k) {
    Ordinal e =
        add(Ordinal::omega_pow(Ordinal::finite(1),
                               static_cast<std::uint64_t>(small(rng))),
            Ordinal::finite(static_cast<std::uint64_t>(small(rng))));
    r = add(r, Ordinal::omega_pow(e, static_cast<std::uint64_t>(coeff(rng))));
  }
  return r;
}

void c1_laplace() {
  OpPtr d2 = make_uniform_family(2);
  DiffClass cls = classify(d2);
  check(cls.kind == DiffClass::StronglyDiff && cls.n == 2,
        "classify(D_2) is not strongly differential of order 2");
  for (Var i = 1; i <= 5; ++i)
    for (Var j = 1; j <= 5; ++j)
      for (Var l = 1; l <= 5; ++l) {
        OpPtr t = simplify(theta_var(
            l, simplify(theta_var(j, simplify(theta_var(i, d2))))));
        check(zero_test(t, 6).kind == ZeroVerdict::Zero,
              "triple commutator not certified zero");
      }
  OpPtr twice = simplify(theta_var(1, simplify(theta_var(1, d2))));
  check(zero_test(twice, 6).kind == ZeroVerdict::NonZero,
        "double commutator unexpectedly vanishes");
}

void c2_d_omega() {
  OpPtr dw = make_d_omega();
  OrdinalOrderVerdict v = ordinal_order(dw);
  check(v.kind == OrdinalOrderVerdict::Exact && v.alpha == Ordinal::omega(),
        "ordinal order of D_w is not exactly w");
  for (Var i = 1; i <= 8; ++i) {
    OpPtr t = simplify(theta_var(i, dw));
    WeylOp expect = WeylOp::derivative(i, i - 1)
                        .scale(-Rat(static_cast<std::uint64_t>(i)));
    const auto* fin = std::get_if<FiniteNode>(&t->node());
    check(fin && fin->op == expect,
          "theta(x_" + std::to_string(i) + ", D_w) != -i d^(i-1)");
  }
}

void c3_d_omega_plus() {
  std::vector<Var> vars{1, 2, 3, 4, 5, 6, y_var()};
  Rat sign = 1, fact = 1;
  for (std::uint64_t n = 1; n <= 3; ++n) {
    sign = -sign;
    fact *= n;
    OpPtr d = make_d_omega_plus(n);
    OpPtr lower = n == 1 ? make_d_omega() : make_d_omega_plus(n - 1);
    OpPtr lhs = simplify(theta_var(y_var(), d));
    OpPtr rhs = OpExpr::scale(-Rat(n), lower);
    check(same_on(lhs, rhs, vars, 6),
          "theta(y, D_{w+" + std::to_string(n) + "}) != -n D_{w+n-1}");
    OpPtr iter = d;
    for (std::uint64_t k = 0; k < n; ++k)
      iter = simplify(theta_var(y_var(), iter));
    check(same_on(iter, OpExpr::scale(sign * fact, make_d_omega()), vars, 6),
          "theta_y^n(D_{w+n}) != (-1)^n n! D_w");
  }
}

void c4_d_omega_omega() {
  OpPtr d = make_d_omega_omega();
  Ordinal w2 = mul(Ordinal::omega(), Ordinal::finite(2));
  OrdinalOrderVerdict v = ordinal_order(d);
  check(v.kind == OrdinalOrderVerdict::Exact && v.alpha == w2,
        "ordinal order of D_{w+w} is not exactly w*2");
  for (std::uint64_t j = 1; j <= 4; ++j) {
    OrdinalOrderVerdict c = ordinal_order(simplify(theta_var(y_var(j), d)));
    Ordinal expect = add(Ordinal::omega(), Ordinal::finite(j - 1));
    check(c.kind == OrdinalOrderVerdict::Exact && c.alpha == expect,
          "commutator through y_" + std::to_string(j) +
              " does not have order w+j-1");
  }
}

void c5_d_infinity() {
  OpPtr d = make_d_infinity();
  check(classify(d).kind == DiffClass::DiffWithoutOrdinalOrder,
        "D_inf not classified as differential without ordinal order");
  for (Var i = 1; i <= 10; ++i) {
    OrderVerdict r = r_order(d, Poly::variable(i));
    check(r.kind == OrderVerdict::Exact && r.n == 1,
          "r_order(D_inf, x_" + std::to_string(i) + ") != 1");
  }
  std::vector<Var> vars{1, 2, 3, 4, 5, 6, 7, 8};
  Rat sign = 1;
  OpPtr iter = d;
  for (std::uint64_t n = 1; n <= 4; ++n) {
    sign = -sign;
    iter = simplify(theta_var(n, iter));
    FamilySpec tail;
    tail.pattern = PrefixPat{static_cast<Var>(n + 1)};
    OpPtr expect = OpExpr::sum({OpExpr::identity(), OpExpr::family(tail)});
    check(same_on(OpExpr::scale(sign, iter), expect, vars, 5),
          "(-1)^n theta chain of D_inf != id + shifted prefix sum at n = " +
              std::to_string(n));
  }
}

void c6_shift() {
  OpPtr sh = make_shift(1);
  std::mt19937 rng(606);
  std::uniform_int_distribution<int> coef(-6, 6);
  Poly xplus1 = Poly::variable(1) + Poly::constant(1);
  for (int trial = 0; trial < 50; ++trial) {
    Poly f, expect;
    Poly pw = Poly::constant(1);
    for (std::uint64_t dd = 0; dd <= 10; ++dd) {
      int c = coef(rng);
      f.add_term(Monomial::var(1, dd), c);
      expect = expect + pw.scale(c);
      pw = poly_mul(pw, xplus1);
    }
    check(ordo::apply(sh, f) == expect, "Sh(f) != f(x+1)");
  }
  auto lam = proportional(simplify(theta_var(1, sh)), sh);
  check(lam && *lam == -1, "theta_x(Sh) is not structurally -Sh");
  check(classify(sh).kind == DiffClass::NotDifferential,
        "Sh not classified as non-differential");
}

void c7_composition_bounds() {
  std::mt19937 rng(707);
  for (int trial = 0; trial < 500; ++trial) {
    WeylOp A = random_weyl(rng, 3, 3), B = random_weyl(rng, 3, 3);
    WeylOp AB = compose(A, B);
    if (A.is_zero() || B.is_zero()) continue;
    if (!AB.is_zero())
      check(finite_order(AB) <= finite_order(A) + finite_order(B),
            "finite composition order bound violated");
    Poly x1 = Poly::variable(1);
    OrderVerdict ra = r_order(OpExpr::finite(A), x1, 14);
    OrderVerdict rb = r_order(OpExpr::finite(B), x1, 14);
    OrderVerdict rc = r_order(OpExpr::finite(AB), x1, 14);
    bool exact = ra.kind == OrderVerdict::Exact &&
                 rb.kind == OrderVerdict::Exact &&
                 rc.kind == OrderVerdict::Exact;
    check(exact && rc.n <= ra.n + rb.n, "r-order additivity bound violated");
  }
  for (std::uint64_t n = 1; n <= 4; ++n) {
    Ordinal bound = compose_order_bound(Ordinal::omega(), Ordinal::finite(n));
    OpPtr comp_op = OpExpr::comp(
        make_d_omega(), OpExpr::finite(WeylOp::derivative(y_var(), n)));
    OrdinalOrderVerdict v = ordinal_order(comp_op);
    check(v.kind == OrdinalOrderVerdict::UpperBound && v.alpha == bound,
          "transfinite composition bound not the min-product formula");
    OrdinalOrderVerdict exact = ordinal_order(make_d_omega_plus(n));
    check(exact.kind == OrdinalOrderVerdict::Exact && exact.alpha <= bound,
          "exact order of D_{w+n} exceeds the composition bound");
  }
}

void c8_realization() {
  for (const char* text : {"0", "1", "2", "w", "w + 3", "w*2", "w^2",
                           "w^2 + w + 1", "w^3"}) {
    Ordinal alpha = *parse_ordinal(text);
    BuiltOperator b = build_D(alpha);
    OrdinalOrderVerdict v = ordinal_order(b.op);
    check(v.kind == OrdinalOrderVerdict::Exact && v.alpha == alpha,
          std::string("build_D(") + text + ") order not exact");
    ProbeReport rep = verify_order_probes(b.op, alpha, 6);
    check(rep.consistent,
          std::string("probe verification failed for ") + text);
  }
}

void c9_torsion() {
  check(classify_module(make_preset("hrbek-i")).kind == TorsionClass::Strong,
        "the ideal I is not strongly torsion");
  check(classify_module(make_preset("hrbek-ti")).kind == TorsionClass::Strong,
        "T/I is not strongly torsion");
  TorsionClass t = classify_module(make_preset("hrbek"));
  check(t.kind == TorsionClass::Quite &&
            t.length == add(Ordinal::omega(), Ordinal::finite(1)),
        "T is not quite torsion of length w+1");
  RankVerdict r = quite_rank(Monomial(), make_preset("hrbek"));
  check(r.kind == RankVerdict::Rank && r.alpha == Ordinal::omega(),
        "quite_rank(1) != w");
  TorsionClass sq = classify_module(make_preset("squares"));
  check(sq.kind == TorsionClass::TorsionOnly && sq.witness_seq.size() >= 3,
        "squares preset lacks a torsion-only witness sequence");
  TorsionSetup sqs = make_preset("squares");
  Monomial prod;
  for (Var v : sq.witness_seq) {
    prod = prod.times(Monomial::var(v));
    check(!is_zero_element(prod, sqs), "witness sequence terminates");
  }
  TorsionSetup h = make_preset("hrbek");
  for (const auto& m : monomials_up_to({1, 2, 3, 4, 5}, 5)) {
    if (is_zero_element(m, h)) continue;
    LevelVerdict lv = strong_level(m, h);
    if (m.is_unit())
      check(lv.kind == LevelVerdict::NotStrong,
            "the unit has finite strong level");
    else
      check(lv.kind == LevelVerdict::Level,
            "ideal element without finite strong level: " + m.to_string());
  }
}

void c10_localization() {
  Poly x = Poly::variable(1);
  LocalOperator dx = extend(OpExpr::finite(WeylOp::derivative(1)), x);
  check(apply_local(dx, {Poly::constant(1), 1}) ==
            normalize_local(Poly::constant(-1), 2, x),
        "(d/dx)_S(x^-1) != -x^-2");
  LocalOperator dxx = extend(OpExpr::finite(WeylOp::derivative(1, 2)), x);
  check(apply_local(dxx, {Poly::constant(1), 1}) ==
            normalize_local(Poly::constant(2), 3, x),
        "(d2/dx2)_S(x^-1) != 2x^-3");
  std::mt19937 rng(1010);
  std::uniform_int_distribution<int> exp(0, 3), coef(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    OpPtr D = OpExpr::finite(random_weyl(rng, 3, 3));
    Poly u;
    for (int t = 0; t < 3; ++t) {
      Monomial m;
      m.set_exponent(1 + static_cast<Var>(trial % 3), exp(rng));
      m.set_exponent(1, exp(rng));
      u.add_term(m, coef(rng));
    }
    check(apply_local(extend(D, x), embed(u)) == embed(ordo::apply(D, u)),
          "localization square does not commute");
  }
  bool refused = false;
  try {
    extend(make_shift(1), x, 10);
  } catch (const InfiniteLocalOrder&) {
    refused = true;
  }
  check(refused, "extend(Sh, x) did not refuse");
  Poly x1 = x + Poly::constant(1);
  std::vector<Poly> ladder;
  for (std::uint64_t d = 0; d <= 10; ++d)
    ladder.push_back(d == 0 ? Poly::constant(1)
                            : Poly::term(Monomial::var(1, d), 1));
  for (int trial = 0; trial < 20; ++trial) {
    WeylOp w = random_weyl(rng, 1, 3);
    OpPtr D = OpExpr::finite(w);
    GlueResult g = glue(extend(D, x), extend(D, x1), ladder);
    const auto* fin = g.op ? std::get_if<FiniteNode>(&g.op->node()) : nullptr;
    check(fin && fin->op == w, "glue round trip lost the operator");
  }
  check(hom_vanishing(x) == HomVanishing::ZeroModule &&
            hom_vanishing(x1) == HomVanishing::ZeroModule,
        "hom_vanishing not zero on nonunits");
}

void c11_ordinals() {
  std::mt19937 rng(1111);
  for (int trial = 0; trial < 1000; ++trial) {
    Ordinal a = random_ordinal(rng), b = random_ordinal(rng),
            c = random_ordinal(rng);
    check(add(add(a, b), c) == add(a, add(b, c)), "addition associativity");
    check(mul(mul(a, b), c) == mul(a, mul(b, c)),
          "multiplication associativity");
    check(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)),
          "left distributivity");
    if (compare(b, c) == std::strong_ordering::less)
      check(compare(add(a, b), add(a, c)) == std::strong_ordering::less,
            "right-argument monotonicity");
    auto round = parse_ordinal(a.to_string());
    check(round && *round == a, "print-parse round trip");
    if (a.is_limit()) {
      Ordinal prev;
      for (std::uint64_t n = 1; n <= 12; ++n) {
        Ordinal fn = fundamental_sequence(a, n);
        check(compare(fn, a) == std::strong_ordering::less,
              "fundamental sequence below its limit");
        if (n > 1)
          check(compare(prev, fn) != std::strong_ordering::greater,
                "fundamental sequence monotone");
        prev = fn;
      }
      if (compare(b, a) == std::strong_ordering::less) {
        bool passed = false;
        for (std::uint64_t n = 1; n <= 10000 && !passed; ++n)
          passed = compare(fundamental_sequence(a, n), b) !=
                   std::strong_ordering::less;
        check(passed, "fundamental sequence cofinal");
      }
    }
  }
}

}  // namespace

int main() {
  criterion(1, "infinitary Laplace operator has exact order 2", c1_laplace);
  criterion(2, "D_w has ordinal order w with the commutator formula",
            c2_d_omega);
  criterion(3, "D_{w+n} commutator identities", c3_d_omega_plus);
  criterion(4, "D_{w+w} has ordinal order w*2", c4_d_omega_omega);
  criterion(5, "D_inf is differential without ordinal order", c5_d_infinity);
  criterion(6, "shift operator translates and is not differential", c6_shift);
  criterion(7, "composition order bounds, finite and transfinite",
            c7_composition_bounds);
  criterion(8, "every test ordinal is realized as an exact order",
            c8_realization);
  criterion(9, "torsion preset classifications", c9_torsion);
  criterion(10, "localization, gluing, and hom vanishing", c10_localization);
  criterion(11, "ordinal arithmetic invariants", c11_ordinals);
  return failures == 0 ? 0 : 1;
}
