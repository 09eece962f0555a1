#include "ordo/localize.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "ordo/errors.hpp"
#include "ordo/order.hpp"
#include "ordo/weyl.hpp"

namespace ordo {

LocalizedPoly normalize_local(Poly num, std::uint64_t k, const Poly& f) {
  if (num.is_zero()) return {num, 0};
  while (k > 0) {
    auto q = divide_exact(num, f);
    if (!q) break;
    num = *q;
    --k;
  }
  return {std::move(num), k};
}

LocalizedPoly local_add(const LocalizedPoly& a, const LocalizedPoly& b,
                        const Poly& f) {
  std::uint64_t k = std::max(a.k, b.k);
  Poly num = a.num;
  for (std::uint64_t i = a.k; i < k; ++i) num = poly_mul(num, f);
  Poly other = b.num;
  for (std::uint64_t i = b.k; i < k; ++i) other = poly_mul(other, f);
  return normalize_local(num + other, k, f);
}

std::string to_string(const LocalizedPoly& v, const Poly& f) {
  if (v.k == 0) return v.num.to_string();
  std::string d = "(" + f.to_string() + ")";
  if (v.k > 1) d += "^" + std::to_string(v.k);
  return "(" + v.num.to_string() + ") / " + d;
}

LocalOperator extend(const OpPtr& D, const Poly& f, std::uint64_t cap) {
  if (f.is_zero())
    throw std::invalid_argument("cannot localize at zero");
  OrderVerdict v = r_order(D, f, cap);
  if (v.kind == OrderVerdict::InfiniteCertified)
    throw InfiniteLocalOrder(
        "operator has certified infinite order with respect to " +
        f.to_string() + "; it does not extend to the localization");
  if (v.kind != OrderVerdict::Exact)
    throw OrderUnknown("order with respect to " + f.to_string() +
                       " not determined within cap " + std::to_string(cap));
  LocalOperator out;
  out.f_ = f;
  out.chain_.push_back(D);
  for (std::uint64_t j = 0; j < v.n; ++j)
    out.chain_.push_back(simplify(theta(f, out.chain_.back())));
  return out;
}

LocalizedPoly apply_local(const LocalOperator& D, const LocalizedPoly& v) {
  const Poly& f = D.f_;
  LocalizedPoly in = normalize_local(v.num, v.k, f);
  std::uint64_t n = D.f_order(), k = in.k;
  // R[j][t] = (theta_f^j D)_S (num / f^t); the recursion lowers t against
  // f-order n - j, with commuting base row j = n
  std::vector<std::vector<LocalizedPoly>> R(
      n + 1, std::vector<LocalizedPoly>(k + 1));
  for (std::uint64_t j = 0; j <= n; ++j)
    R[j][0] = embed(ordo::apply(D.chain_[j], in.num));
  for (std::uint64_t t = 1; t <= k; ++t) {
    R[n][t] = normalize_local(ordo::apply(D.chain_[n], in.num), t, f);
    for (std::uint64_t j = n; j-- > 0;) {
      LocalizedPoly s = local_add(R[j + 1][t], R[j][t - 1], f);
      R[j][t] = normalize_local(std::move(s.num), s.k + 1, f);
    }
  }
  return R[0][k];
}

namespace {

// the single variable of a univariate polynomial; nullopt for constants
std::optional<Var> single_var(const Poly& p) {
  std::vector<Var> vs = p.variables();
  if (vs.size() > 1)
    throw std::invalid_argument("gluing needs univariate chart elements: " +
                                p.to_string());
  if (vs.empty()) return std::nullopt;
  return vs[0];
}

std::uint64_t uni_degree(const Poly& p, Var x) {
  std::uint64_t d = 0;
  for (const auto& [m, c] : p.terms()) d = std::max(d, m.exponent_of(x));
  return d;
}

Rat uni_coeff(const Poly& p, Var x, std::uint64_t d) {
  return p.coeff(d == 0 ? Monomial() : Monomial::var(x, d));
}

// a = q*b + r in k[x]
std::pair<Poly, Poly> uni_divmod(const Poly& a, const Poly& b, Var x) {
  Poly q, r = a;
  std::uint64_t db = uni_degree(b, x);
  Rat lb = uni_coeff(b, x, db);
  while (!r.is_zero() && uni_degree(r, x) >= db) {
    std::uint64_t dr = uni_degree(r, x);
    Rat c = uni_coeff(r, x, dr) / lb;
    Poly t = Poly::term(dr == db ? Monomial() : Monomial::var(x, dr - db), c);
    q = q + t;
    r = r - poly_mul(t, b);
  }
  return {q, r};
}

// extended Euclid: returns (g, c, e) with c*a + e*b = g
std::tuple<Poly, Poly, Poly> uni_ext_gcd(Poly a, Poly b, Var x) {
  Poly c0 = Poly::constant(1), c1;
  Poly e0, e1 = Poly::constant(1);
  while (!b.is_zero()) {
    auto [q, r] = uni_divmod(a, b, x);
    a = std::exchange(b, r);
    c0 = c0 - poly_mul(q, c1);
    std::swap(c0, c1);
    e0 = e0 - poly_mul(q, e1);
    std::swap(e0, e1);
  }
  return {a, c0, e0};
}

Poly poly_pow(const Poly& f, std::uint64_t k) {
  Poly r = Poly::constant(1);
  for (std::uint64_t i = 0; i < k; ++i) r = poly_mul(r, f);
  return r;
}

// attempt to read a finite operator in x off the value table
OpPtr reconstruct(const std::vector<std::pair<Poly, Poly>>& table, Var x) {
  std::map<std::uint64_t, Poly> on_power;
  for (const auto& [in, out] : table) {
    if (in.terms().size() != 1) continue;
    const auto& [m, c] = *in.terms().begin();
    if (c != 1) continue;
    if (!m.is_unit() && (m.exponents().size() != 1 ||
                         m.exponents().begin()->first != x))
      continue;
    on_power.emplace(m.exponent_of(x), out);
  }
  std::uint64_t top = 0;
  while (on_power.count(top)) ++top;
  if (top == 0) return nullptr;
  // solve D(x^m) = sum_j p_j * m!/(m-j)! * x^{m-j} for the coefficients p_j
  std::vector<Poly> coeffs;
  Rat mfact = 1;
  for (std::uint64_t m = 0; m < top; ++m) {
    if (m > 0) mfact *= m;
    Poly rhs = on_power.at(m);
    Rat fall = 1;  // m!/(m-j)!
    for (std::uint64_t j = 0; j < m; ++j) {
      rhs = rhs - poly_mul(coeffs[j], Poly::term(Monomial::var(x, m - j),
                                                 fall));
      fall *= m - j;
    }
    coeffs.push_back(rhs.scale(Rat(1) / mfact));
  }
  while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
  WeylOp op;
  for (std::uint64_t j = 0; j < coeffs.size(); ++j)
    op = op + compose(WeylOp::mult(coeffs[j]), WeylOp::derivative(x, j));
  for (const auto& [in, out] : table)
    if (apply_finite(op, in) != out) return nullptr;
  return OpExpr::finite(op);
}

}  // namespace

GlueResult glue(const LocalOperator& D1, const LocalOperator& D2,
                const std::vector<Poly>& inputs) {
  std::optional<Var> vf = single_var(D1.f());
  std::optional<Var> vg = single_var(D2.f());
  if (vf && vg && *vf != *vg)
    throw std::invalid_argument("chart elements use different variables");
  Var x = vf ? *vf : (vg ? *vg : 1);
  auto [gcd, c0, e0] = uni_ext_gcd(D1.f(), D2.f(), x);
  if (uni_degree(gcd, x) > 0)
    throw NotCoprime("gcd(" + D1.f().to_string() + ", " +
                     D2.f().to_string() + ") = " + gcd.to_string());

  GlueResult out;
  for (const Poly& u : inputs) {
    LocalizedPoly a = apply_local(D1, embed(u));
    LocalizedPoly b = apply_local(D2, embed(u));
    Poly fp = poly_pow(D1.f(), a.k);
    Poly gq = poly_pow(D2.f(), b.k);
    if (poly_mul(a.num, gq) != poly_mul(b.num, fp))
      throw NotCompatible("chart values disagree on input " + u.to_string() +
                          ": " + to_string(a, D1.f()) + " vs " +
                          to_string(b, D2.f()));
    Poly v;
    if (a.k == 0 && b.k == 0) {
      v = a.num;
    } else {
      auto [g2, c, e] = uni_ext_gcd(fp, gq, x);
      // g2 is a nonzero constant since f, g are coprime
      Rat unit = uni_coeff(g2, x, 0);
      v = (poly_mul(c, a.num) + poly_mul(e, b.num)).scale(Rat(1) / unit);
    }
    out.table.emplace_back(u, v);
  }
  out.op = reconstruct(out.table, x);
  return out;
}

HomVanishing hom_vanishing(const Poly& f) {
  if (f.is_zero())
    throw std::invalid_argument("hom_vanishing needs a nonzero element");
  return f.is_constant() ? HomVanishing::AllOfR : HomVanishing::ZeroModule;
}

std::string to_string(HomVanishing v) {
  return v == HomVanishing::ZeroModule ? "zero-module" : "all-of-R";
}

}  // namespace ordo
