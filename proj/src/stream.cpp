#include "ordo/stream.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ordo {

// ---- CoefForm --------------------------------------------------------------

CoefForm CoefForm::one() { return constant(1); }

CoefForm CoefForm::constant(const Rat& c) {
  CoefForm f;
  if (c != 0) f.q = {c};
  return f;
}

Rat CoefForm::eval_poly(std::uint64_t i) const {
  Rat v = 0;
  for (auto it = q.rbegin(); it != q.rend(); ++it) v = v * Rat(i) + *it;
  return v;
}

Rat CoefForm::eval(std::uint64_t i) const {
  Rat v = eval_poly(i);
  if (v == 0 || !over_factorial) return v;
  Int fact = 1;
  for (std::uint64_t k = 2; k <= i; ++k) fact *= k;
  return v / Rat(fact);
}

bool CoefForm::is_zero_poly() const {
  for (const auto& c : q)
    if (c != 0) return false;
  return true;
}

CoefForm CoefForm::scaled(const Rat& c) const {
  CoefForm r = *this;
  if (c == 0) {
    r.q.clear();
    return r;
  }
  for (auto& x : r.q) x *= c;
  return r;
}

CoefForm CoefForm::times_affine(const Rat& a, const Rat& b) const {
  CoefForm r;
  r.over_factorial = over_factorial;
  if (is_zero_poly() || (a == 0 && b == 0)) return r;
  r.q.assign(q.size() + 1, Rat(0));
  for (std::size_t k = 0; k < q.size(); ++k) {
    r.q[k] += q[k] * b;
    r.q[k + 1] += q[k] * a;
  }
  while (!r.q.empty() && r.q.back() == 0) r.q.pop_back();
  return r;
}

CoefForm CoefForm::shifted(std::int64_t d) const {
  // q(i + d) by repeated synthetic shift
  CoefForm r = *this;
  if (d == 0 || q.empty()) return r;
  std::vector<Rat> out(q.size(), Rat(0));
  // binomial expansion: out[k] = sum_{j>=k} q[j] C(j,k) d^{j-k}
  for (std::size_t j = 0; j < q.size(); ++j) {
    Rat binom = 1, dpow = 1;
    for (std::size_t k = 0; k <= j; ++k) {
      std::size_t kk = j - k;  // exponent of i
      // C(j, kk) = C(j, k)
      out[kk] += q[j] * binom * dpow;
      binom = binom * Rat(j - k) / Rat(k + 1);
      dpow *= Rat(d);
    }
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  r.q = out;
  return r;
}

std::string CoefForm::to_string(const std::string& idx) const {
  std::ostringstream os;
  if (q.empty()) return "0";
  bool first = true;
  for (std::size_t k = q.size(); k-- > 0;) {
    if (q[k] == 0) continue;
    Rat c = q[k];
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    Rat a = c < 0 ? Rat(-c) : c;
    if (k == 0 || a != 1) os << a;
    if (k > 0) {
      if (a != 1) os << "*";
      os << idx;
      if (k > 1) os << "^" << k;
    }
  }
  std::string body = os.str();
  if (over_factorial) return "(" + body + ")/fact(" + idx + ")";
  return body;
}

std::string Affine::to_string(const std::string& idx) const {
  std::ostringstream os;
  if (a == 0) return std::to_string(b);
  if (a == 1)
    os << idx;
  else
    os << a << "*" << idx;
  if (b > 0) os << "+" << b;
  if (b < 0) os << b;
  return os.str();
}

// ---- FamilySpec ------------------------------------------------------------

bool FamilySpec::in_range(std::uint64_t i) const {
  return i >= start && (!stop || i <= *stop);
}

WeylOp FamilySpec::term(std::uint64_t i) const {
  if (!in_range(i)) return WeylOp();
  Rat c = coef.eval(i);
  if (c == 0) return WeylOp();
  if (std::holds_alternative<SingleVarPat>(pattern)) {
    const auto& p = std::get<SingleVarPat>(pattern);
    std::int64_t v = p.var.eval(i), e = p.exp.eval(i);
    if (v < 1 || e < 0) throw std::logic_error("family term out of domain");
    return WeylOp::term(poly_factor,
                        Monomial::var(static_cast<Var>(v),
                                      static_cast<std::uint64_t>(e)),
                        c);
  }
  if (std::holds_alternative<FixedVarPat>(pattern)) {
    const auto& p = std::get<FixedVarPat>(pattern);
    std::int64_t e = p.exp.eval(i);
    if (e < 0) throw std::logic_error("family term out of domain");
    return WeylOp::term(poly_factor,
                        Monomial::var(p.v, static_cast<std::uint64_t>(e)), c);
  }
  const auto& p = std::get<PrefixPat>(pattern);
  Monomial deriv;
  for (std::uint64_t k = 0; k < i; ++k) deriv.set_exponent(p.m + k, 1);
  return WeylOp::term(poly_factor, deriv, c);
}

// ---- node factories --------------------------------------------------------

OpPtr OpExpr::finite(WeylOp op) {
  return std::make_shared<OpExpr>(Node{FiniteNode{std::move(op)}});
}
OpPtr OpExpr::zero() { return finite(WeylOp()); }
OpPtr OpExpr::identity() { return finite(WeylOp::identity()); }
OpPtr OpExpr::scale(Rat c, OpPtr inner) {
  return std::make_shared<OpExpr>(Node{ScaleNode{std::move(c), std::move(inner)}});
}
OpPtr OpExpr::sum(std::vector<OpPtr> parts) {
  return std::make_shared<OpExpr>(Node{SumNode{std::move(parts)}});
}
OpPtr OpExpr::comp(OpPtr left, OpPtr right) {
  return std::make_shared<OpExpr>(
      Node{ComposeNode{std::move(left), std::move(right)}});
}
OpPtr OpExpr::tensor_der(OpPtr inner, Var v, std::uint64_t n) {
  if (n == 0) return inner;
  return std::make_shared<OpExpr>(Node{TensorDerNode{std::move(inner), v, n}});
}
OpPtr OpExpr::family(FamilySpec spec) {
  return std::make_shared<OpExpr>(Node{FamilyNode{std::move(spec)}});
}
OpPtr OpExpr::limit(LimitBranches branches) {
  return std::make_shared<OpExpr>(Node{LimitNode{std::move(branches)}});
}

// ---- catalogue -------------------------------------------------------------

OpPtr make_uniform_family(std::uint64_t e) {
  FamilySpec s;
  s.pattern = SingleVarPat{{1, 0}, {0, static_cast<std::int64_t>(e)}};
  return OpExpr::family(s);
}

OpPtr make_d_omega() {
  FamilySpec s;
  s.pattern = SingleVarPat{{1, 0}, {1, 0}};
  return OpExpr::family(s);
}

OpPtr make_d_omega_plus(std::uint64_t n) {
  return OpExpr::tensor_der(make_d_omega(), y_var(1), n);
}

OpPtr make_d_infinity() {
  FamilySpec s;
  s.pattern = PrefixPat{1};
  return OpExpr::family(s);
}

OpPtr make_shift(Var v) {
  FamilySpec s;
  s.coef.over_factorial = true;
  s.pattern = FixedVarPat{v, {1, 0}};
  s.start = 0;
  return OpExpr::family(s);
}

namespace {

std::function<OpPtr(std::uint64_t)> memoize(
    std::function<OpPtr(std::uint64_t)> f) {
  auto cache = std::make_shared<std::map<std::uint64_t, OpPtr>>();
  auto mu = std::make_shared<std::mutex>();
  return [cache, mu, f](std::uint64_t n) {
    std::lock_guard<std::mutex> lock(*mu);
    auto it = cache->find(n);
    if (it != cache->end()) return it->second;
    OpPtr r = f(n);
    (*cache)[n] = r;
    return r;
  };
}

bool is_zero_node(const OpPtr& e) {
  const auto* f = std::get_if<FiniteNode>(&e->node());
  return f && f->op.is_zero();
}

bool is_identity_node(const OpPtr& e) {
  const auto* f = std::get_if<FiniteNode>(&e->node());
  return f && f->op == WeylOp::identity();
}

}  // namespace

OpPtr make_d_omega_omega() {
  LimitBranches lb;
  lb.first = 1;
  lb.gen = memoize([](std::uint64_t j) {
    return OpExpr::tensor_der(make_d_omega(), y_var(j), j);
  });
  lb.owner = [](Var v) -> std::optional<std::uint64_t> {
    if (v >= kYBase && v < kAllocBase && v - kYBase >= 1) return v - kYBase;
    return std::nullopt;
  };
  lb.shared = [](Var v) { return v < kYBase; };
  lb.declared_order = [](std::uint64_t j) {
    return add(Ordinal::omega(), Ordinal::finite(j));
  };
  lb.declared_sup = mul(Ordinal::omega(), Ordinal::finite(2));
  lb.label = "D[w*2]";
  return OpExpr::limit(lb);
}

// ---- support bounds --------------------------------------------------------

namespace {

std::uint64_t family_bound(const FamilySpec& s, const std::vector<Var>& V,
                           std::uint64_t d) {
  if (s.coef.is_zero_poly()) return s.start;
  std::uint64_t bound = s.start;  // all indices >= bound annihilate
  if (std::holds_alternative<SingleVarPat>(s.pattern)) {
    const auto& p = std::get<SingleVarPat>(s.pattern);
    for (Var v : V) {
      if (v >= kYBase) continue;  // indexed families live on the x-block
      std::int64_t num = static_cast<std::int64_t>(v) - p.var.b;
      if (p.var.a <= 0) throw std::logic_error("single-var family needs a>=1");
      if (num < 0 || num % p.var.a != 0) continue;
      std::uint64_t i = static_cast<std::uint64_t>(num / p.var.a);
      if (s.in_range(i)) bound = std::max(bound, i + 1);
    }
  } else if (std::holds_alternative<FixedVarPat>(s.pattern)) {
    const auto& p = std::get<FixedVarPat>(s.pattern);
    if (p.exp.a >= 1) {
      // exp(i) > d kills every degree-<=d polynomial
      std::int64_t cutoff = (static_cast<std::int64_t>(d) - p.exp.b) / p.exp.a;
      if (cutoff >= 0) bound = std::max(bound, static_cast<std::uint64_t>(cutoff) + 1);
    } else if (s.stop) {
      bound = std::max(bound, *s.stop + 1);
    } else {
      throw std::logic_error("fixed-var family with constant exponent is not "
                             "locally finite without a stop index");
    }
  } else {
    const auto& p = std::get<PrefixPat>(s.pattern);
    std::set<Var> vs(V.begin(), V.end());
    std::uint64_t run = 0;
    while (vs.count(p.m + run)) ++run;
    bound = std::max(bound, run + 1);
  }
  if (s.stop) bound = std::min(bound, *s.stop + 1);
  return bound;
}

// variables a node can introduce into its output beyond those of the input
void intro_vars(const OpPtr& D, std::set<Var>& out, std::uint64_t& deg) {
  if (const auto* f = std::get_if<FiniteNode>(&D->node())) {
    for (const auto& [k, c] : f->op.terms()) {
      for (const auto& [v, e] : k.first.exponents()) out.insert(v);
      deg = std::max(deg, k.first.degree());
    }
  } else if (const auto* s = std::get_if<ScaleNode>(&D->node())) {
    intro_vars(s->inner, out, deg);
  } else if (const auto* s = std::get_if<SumNode>(&D->node())) {
    for (const auto& p : s->parts) intro_vars(p, out, deg);
  } else if (const auto* c = std::get_if<ComposeNode>(&D->node())) {
    std::uint64_t d1 = 0, d2 = 0;
    intro_vars(c->left, out, d1);
    intro_vars(c->right, out, d2);
    deg = std::max(deg, d1 + d2);
  } else if (const auto* t = std::get_if<TensorDerNode>(&D->node())) {
    intro_vars(t->inner, out, deg);
  } else if (const auto* fam = std::get_if<FamilyNode>(&D->node())) {
    for (const auto& [v, e] : fam->spec.poly_factor.exponents()) out.insert(v);
    deg = std::max(deg, fam->spec.poly_factor.degree());
  }
  // LimitNode: the constructed operators carry no polynomial factors
}

std::vector<std::uint64_t> relevant_branches(const LimitBranches& lb,
                                             const std::vector<Var>& V) {
  std::set<std::uint64_t> bs(lb.always.begin(), lb.always.end());
  for (Var v : V)
    if (auto b = lb.owner(v)) bs.insert(*b);
  return {bs.begin(), bs.end()};
}

}  // namespace

std::uint64_t support_bound(const OpPtr& D, const std::vector<Var>& V,
                            std::uint64_t d) {
  if (std::holds_alternative<FiniteNode>(D->node())) return 0;
  if (const auto* s = std::get_if<ScaleNode>(&D->node()))
    return support_bound(s->inner, V, d);
  if (const auto* s = std::get_if<SumNode>(&D->node())) {
    std::uint64_t b = 0;
    for (const auto& p : s->parts) b = std::max(b, support_bound(p, V, d));
    return b;
  }
  if (const auto* c = std::get_if<ComposeNode>(&D->node())) {
    std::set<Var> extra(V.begin(), V.end());
    std::uint64_t dextra = 0;
    intro_vars(c->right, extra, dextra);
    std::vector<Var> V2(extra.begin(), extra.end());
    return std::max(support_bound(c->right, V, d),
                    support_bound(c->left, V2, d + dextra));
  }
  if (const auto* t = std::get_if<TensorDerNode>(&D->node()))
    return support_bound(t->inner, V, d);
  if (const auto* f = std::get_if<FamilyNode>(&D->node()))
    return family_bound(f->spec, V, d);
  const auto& lb = std::get<LimitNode>(D->node()).branches;
  std::uint64_t b = 0;
  for (auto br : relevant_branches(lb, V))
    b = std::max(b, support_bound(lb.gen(br), V, d));
  return b;
}

// ---- application -----------------------------------------------------------

Poly apply(const OpPtr& D, const Poly& f) {
  if (const auto* n = std::get_if<FiniteNode>(&D->node()))
    return apply_finite(n->op, f);
  if (const auto* n = std::get_if<ScaleNode>(&D->node()))
    return ordo::apply(n->inner, f).scale(n->c);
  if (const auto* n = std::get_if<SumNode>(&D->node())) {
    Poly out;
    for (const auto& p : n->parts) out = out + ordo::apply(p, f);
    return out;
  }
  if (const auto* n = std::get_if<ComposeNode>(&D->node()))
    return ordo::apply(n->left, ordo::apply(n->right, f));
  if (const auto* n = std::get_if<TensorDerNode>(&D->node()))
    return ordo::apply(n->inner, partial_derive(f, n->v, n->n));
  if (const auto* n = std::get_if<FamilyNode>(&D->node())) {
    Poly out;
    std::uint64_t hi = family_bound(n->spec, f.variables(), f.degree());
    for (std::uint64_t i = n->spec.start; i < hi; ++i)
      out = out + apply_finite(n->spec.term(i), f);
    return out;
  }
  const auto& lb = std::get<LimitNode>(D->node()).branches;
  Poly out;
  for (auto br : relevant_branches(lb, f.variables()))
    out = out + ordo::apply(lb.gen(br), f);
  return out;
}

// ---- simplification --------------------------------------------------------

OpPtr simplify(const OpPtr& D) {
  if (std::holds_alternative<FiniteNode>(D->node())) return D;
  if (const auto* n = std::get_if<ScaleNode>(&D->node())) {
    OpPtr in = simplify(n->inner);
    if (n->c == 0 || is_zero_node(in)) return OpExpr::zero();
    if (const auto* f = std::get_if<FiniteNode>(&in->node()))
      return OpExpr::finite(f->op.scale(n->c));
    if (const auto* s = std::get_if<ScaleNode>(&in->node()))
      return simplify(OpExpr::scale(n->c * s->c, s->inner));
    if (n->c == 1) return in;
    return OpExpr::scale(n->c, in);
  }
  if (const auto* n = std::get_if<SumNode>(&D->node())) {
    std::vector<OpPtr> flat;
    WeylOp finite_acc;
    std::function<void(const OpPtr&)> take = [&](const OpPtr& p) {
      OpPtr q = simplify(p);
      if (is_zero_node(q)) return;
      if (const auto* f = std::get_if<FiniteNode>(&q->node())) {
        finite_acc = finite_acc + f->op;
        return;
      }
      if (const auto* s = std::get_if<SumNode>(&q->node())) {
        for (const auto& part : s->parts) take(part);
        return;
      }
      flat.push_back(q);
    };
    for (const auto& p : n->parts) take(p);
    if (!finite_acc.is_zero()) flat.push_back(OpExpr::finite(finite_acc));
    if (flat.empty()) return OpExpr::zero();
    if (flat.size() == 1) return flat[0];
    return OpExpr::sum(flat);
  }
  if (const auto* n = std::get_if<ComposeNode>(&D->node())) {
    OpPtr l = simplify(n->left), r = simplify(n->right);
    if (is_zero_node(l) || is_zero_node(r)) return OpExpr::zero();
    if (is_identity_node(l)) return r;
    if (is_identity_node(r)) return l;
    // distribute over sums to expose cancellation
    if (const auto* s = std::get_if<SumNode>(&l->node())) {
      std::vector<OpPtr> parts;
      for (const auto& p : s->parts) parts.push_back(OpExpr::comp(p, r));
      return simplify(OpExpr::sum(parts));
    }
    if (const auto* s = std::get_if<SumNode>(&r->node())) {
      std::vector<OpPtr> parts;
      for (const auto& p : s->parts) parts.push_back(OpExpr::comp(l, p));
      return simplify(OpExpr::sum(parts));
    }
    const auto* lf = std::get_if<FiniteNode>(&l->node());
    const auto* rf = std::get_if<FiniteNode>(&r->node());
    if (lf && rf) return OpExpr::finite(compose(lf->op, rf->op));
    if (lf) {
      if (const auto* rc = std::get_if<ComposeNode>(&r->node()))
        if (const auto* rcf = std::get_if<FiniteNode>(&rc->left->node()))
          return simplify(OpExpr::comp(
              OpExpr::finite(compose(lf->op, rcf->op)), rc->right));
    }
    // pull scalars out
    if (const auto* ls = std::get_if<ScaleNode>(&l->node()))
      return simplify(OpExpr::scale(ls->c, OpExpr::comp(ls->inner, r)));
    if (const auto* rs = std::get_if<ScaleNode>(&r->node()))
      return simplify(OpExpr::scale(rs->c, OpExpr::comp(l, rs->inner)));
    return OpExpr::comp(l, r);
  }
  if (const auto* n = std::get_if<TensorDerNode>(&D->node())) {
    OpPtr in = simplify(n->inner);
    if (is_zero_node(in)) return OpExpr::zero();
    if (const auto* f = std::get_if<FiniteNode>(&in->node()))
      return OpExpr::finite(compose(f->op, WeylOp::derivative(n->v, n->n)));
    if (const auto* s = std::get_if<ScaleNode>(&in->node()))
      return simplify(OpExpr::scale(
          s->c, OpExpr::tensor_der(s->inner, n->v, n->n)));
    return OpExpr::tensor_der(in, n->v, n->n);
  }
  if (const auto* n = std::get_if<FamilyNode>(&D->node())) {
    const auto& s = n->spec;
    if (s.coef.is_zero_poly() || (s.stop && *s.stop < s.start))
      return OpExpr::zero();
    return D;
  }
  return D;  // LimitNode
}

// ---- theta -----------------------------------------------------------------

namespace {

OpPtr theta_var_family(Var v, const FamilySpec& s) {
  if (std::holds_alternative<SingleVarPat>(s.pattern)) {
    const auto& p = std::get<SingleVarPat>(s.pattern);
    if (v >= kYBase) return OpExpr::zero();  // families live on the x-block
    std::int64_t num = static_cast<std::int64_t>(v) - p.var.b;
    if (p.var.a < 1 || num < 0 || num % p.var.a != 0) return OpExpr::zero();
    std::uint64_t i = static_cast<std::uint64_t>(num / p.var.a);
    if (!s.in_range(i)) return OpExpr::zero();
    return OpExpr::finite(theta_poly(Poly::variable(v), s.term(i)));
  }
  if (std::holds_alternative<FixedVarPat>(s.pattern)) {
    const auto& p = std::get<FixedVarPat>(s.pattern);
    if (v != p.v) return OpExpr::zero();
    FamilySpec out = s;
    out.coef = s.coef.times_affine(Rat(-p.exp.a), Rat(-p.exp.b));
    auto& pat = std::get<FixedVarPat>(out.pattern);
    pat.exp.b -= 1;
    return simplify(OpExpr::family(out));
  }
  const auto& p = std::get<PrefixPat>(s.pattern);
  if (v < p.m) return OpExpr::zero();
  if (s.coef.over_factorial)
    throw std::logic_error("theta on factorial prefix family not catalogued");
  std::uint64_t jstar = v - p.m + 1;  // first length whose term contains d(v)
  if (s.stop && jstar > *s.stop) return OpExpr::zero();
  // lead = -poly_factor * d(x_m)...d(x_{v-1})
  Monomial lead_deriv;
  for (Var w = p.m; w < v; ++w) lead_deriv.set_exponent(w, 1);
  WeylOp lead = WeylOp::term(s.poly_factor, lead_deriv, -1);
  std::vector<OpPtr> parts;
  if (jstar >= s.start) {
    Rat c = s.coef.eval_poly(jstar);
    if (c != 0) parts.push_back(OpExpr::finite(WeylOp::identity().scale(c)));
  }
  FamilySpec tail;
  tail.pattern = PrefixPat{v + 1};
  tail.coef = s.coef.shifted(static_cast<std::int64_t>(jstar));
  tail.start = s.start > jstar ? s.start - jstar : 1;
  if (s.stop) tail.stop = *s.stop - jstar;
  if (!tail.stop || *tail.stop >= tail.start)
    parts.push_back(OpExpr::family(tail));
  return simplify(
      OpExpr::comp(OpExpr::finite(lead), OpExpr::sum(std::move(parts))));
}

OpPtr theta_mon(const Monomial& m, const OpPtr& D);

}  // namespace

OpPtr theta_var(Var v, const OpPtr& D) {
  if (const auto* n = std::get_if<FiniteNode>(&D->node()))
    return OpExpr::finite(theta_poly(Poly::variable(v), n->op));
  if (const auto* n = std::get_if<ScaleNode>(&D->node()))
    return simplify(OpExpr::scale(n->c, theta_var(v, n->inner)));
  if (const auto* n = std::get_if<SumNode>(&D->node())) {
    std::vector<OpPtr> parts;
    for (const auto& p : n->parts) parts.push_back(theta_var(v, p));
    return simplify(OpExpr::sum(parts));
  }
  if (const auto* n = std::get_if<ComposeNode>(&D->node())) {
    return simplify(OpExpr::sum(
        {OpExpr::comp(theta_var(v, n->left), n->right),
         OpExpr::comp(n->left, theta_var(v, n->right))}));
  }
  if (const auto* n = std::get_if<TensorDerNode>(&D->node())) {
    if (v == n->v) {
      OpPtr lowered = n->n == 1 ? n->inner
                                : OpExpr::tensor_der(n->inner, n->v, n->n - 1);
      return simplify(OpExpr::scale(Rat(-static_cast<std::int64_t>(n->n)),
                                    lowered));
    }
    return simplify(
        OpExpr::tensor_der(theta_var(v, n->inner), n->v, n->n));
  }
  if (const auto* n = std::get_if<FamilyNode>(&D->node()))
    return theta_var_family(v, n->spec);
  const auto& lb = std::get<LimitNode>(D->node()).branches;
  if (auto b = lb.owner(v)) return theta_var(v, lb.gen(*b));
  if (!lb.shared(v)) return OpExpr::zero();
  LimitBranches out = lb;
  auto inner_gen = lb.gen;
  out.gen = memoize([inner_gen, v](std::uint64_t n) {
    return theta_var(v, inner_gen(n));
  });
  out.declared_order = nullptr;
  out.declared_sup = std::nullopt;
  out.label = "theta(" + var_to_string(v) + ", " + lb.label + ")";
  return OpExpr::limit(out);
}

namespace {

OpPtr theta_mon(const Monomial& m, const OpPtr& D) {
  if (m.is_unit()) return OpExpr::zero();
  Var v = m.exponents().begin()->first;
  Monomial rest = m;
  rest.set_exponent(v, m.exponent_of(v) - 1);
  if (rest.is_unit()) return theta_var(v, D);
  // theta_{x_v * rest}(D) = x_v * theta_rest(D) + theta_{x_v}(D) * rest
  return simplify(OpExpr::sum(
      {OpExpr::comp(OpExpr::finite(WeylOp::mult(Poly::variable(v))),
                    theta_mon(rest, D)),
       OpExpr::comp(theta_var(v, D),
                    OpExpr::finite(WeylOp::mult(Poly::term(rest, 1))))}));
}

}  // namespace

OpPtr theta(const Poly& r, const OpPtr& D) {
  std::vector<OpPtr> parts;
  for (const auto& [m, c] : r.terms()) {
    if (m.is_unit()) continue;  // constants commute
    parts.push_back(OpExpr::scale(c, theta_mon(m, D)));
  }
  return simplify(OpExpr::sum(std::move(parts)));
}

// ---- zero testing ----------------------------------------------------------

std::vector<Var> probe_vars(const OpPtr& D, std::uint64_t budget) {
  std::set<Var> out;
  std::function<void(const OpPtr&)> walk = [&](const OpPtr& e) {
    if (const auto* n = std::get_if<FiniteNode>(&e->node())) {
      for (Var v : n->op.variables()) out.insert(v);
    } else if (const auto* n = std::get_if<ScaleNode>(&e->node())) {
      walk(n->inner);
    } else if (const auto* n = std::get_if<SumNode>(&e->node())) {
      for (const auto& p : n->parts) walk(p);
    } else if (const auto* n = std::get_if<ComposeNode>(&e->node())) {
      walk(n->left);
      walk(n->right);
    } else if (const auto* n = std::get_if<TensorDerNode>(&e->node())) {
      out.insert(n->v);
      walk(n->inner);
    } else if (const auto* n = std::get_if<FamilyNode>(&e->node())) {
      const auto& s = n->spec;
      for (const auto& [v, ex] : s.poly_factor.exponents()) out.insert(v);
      std::uint64_t hi = s.start + budget;
      if (s.stop) hi = std::min(hi, *s.stop);
      if (std::holds_alternative<SingleVarPat>(s.pattern)) {
        const auto& p = std::get<SingleVarPat>(s.pattern);
        for (std::uint64_t i = s.start; i <= hi; ++i) {
          std::int64_t v = p.var.eval(i);
          if (v >= 1) out.insert(static_cast<Var>(v));
        }
      } else if (std::holds_alternative<FixedVarPat>(s.pattern)) {
        out.insert(std::get<FixedVarPat>(s.pattern).v);
      } else {
        const auto& p = std::get<PrefixPat>(s.pattern);
        for (std::uint64_t k = 0; k <= budget; ++k) out.insert(p.m + k);
      }
    } else {
      const auto& lb = std::get<LimitNode>(e->node()).branches;
      std::set<std::uint64_t> bs(lb.always.begin(), lb.always.end());
      for (std::uint64_t b = lb.first; b < lb.first + std::min<std::uint64_t>(budget, 3); ++b)
        bs.insert(b);
      for (auto b : bs) walk(lb.gen(b));
    }
  };
  walk(D);
  return {out.begin(), out.end()};
}

ZeroVerdict zero_test(const OpPtr& D, std::uint64_t budget) {
  OpPtr s = simplify(D);
  if (is_zero_node(s)) {
    ZeroVerdict v;
    v.kind = ZeroVerdict::Zero;
    v.certificate = "simplifies to the zero operator";
    return v;
  }
  if (const auto* fn = std::get_if<FiniteNode>(&s->node())) {
    // A componentwise-minimal derivative multi-index b gives a guaranteed
    // witness: applying to x^b kills every other term's derivative part, so
    // the surviving coefficients sit on distinct monomials.
    DerivMultiIndex bmin = fn->op.terms().begin()->first.second;
    bool shrunk = true;
    while (shrunk) {
      shrunk = false;
      for (const auto& [key, c] : fn->op.terms())
        if (!(key.second == bmin) && key.second.divides(bmin)) {
          bmin = key.second;
          shrunk = true;
        }
    }
    ZeroVerdict v;
    v.kind = ZeroVerdict::NonZero;
    v.witness = Poly::term(bmin, 1);
    return v;
  }
  std::vector<Var> vars = probe_vars(s, budget);
  std::vector<Poly> probes;
  probes.push_back(Poly::constant(1));
  std::uint64_t emax = std::min<std::uint64_t>(budget, 8);
  for (Var v : vars)
    for (std::uint64_t e = 1; e <= emax; ++e)
      probes.push_back(Poly::term(Monomial::var(v, e), 1));
  // products of consecutive probe variables (prefix-style witnesses)
  for (std::size_t i = 0; i < vars.size(); ++i) {
    Monomial m;
    for (std::size_t j = i; j < vars.size(); ++j) {
      m.set_exponent(vars[j], 1);
      probes.push_back(Poly::term(m, 1));
    }
  }
  for (const auto& f : probes) {
    if (!ordo::apply(s, f).is_zero()) {
      ZeroVerdict v;
      v.kind = ZeroVerdict::NonZero;
      v.witness = f;
      return v;
    }
  }
  ZeroVerdict v;
  v.kind = ZeroVerdict::Unknown;
  v.budget = budget;
  return v;
}

// ---- structural proportionality --------------------------------------------

namespace {

// P(i) built from coefficient vector
std::vector<Rat> poly_mul_vec(const std::vector<Rat>& a,
                              const std::vector<Rat>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Rat> r(a.size() + b.size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

// product (i + lo)(i + lo + 1)...(i + hi) as a polynomial in i
std::vector<Rat> rising_product(std::int64_t lo, std::int64_t hi) {
  std::vector<Rat> r{Rat(1)};
  for (std::int64_t k = lo; k <= hi; ++k)
    r = poly_mul_vec(r, {Rat(k), Rat(1)});
  return r;
}

std::optional<Rat> family_ratio(const FamilySpec& A, const FamilySpec& B) {
  if (A.stop || B.stop) return std::nullopt;
  if (A.coef.over_factorial != B.coef.over_factorial) return std::nullopt;
  if (!(A.poly_factor == B.poly_factor)) return std::nullopt;
  std::int64_t d = 0;  // B index = A index + d
  if (std::holds_alternative<FixedVarPat>(A.pattern) &&
      std::holds_alternative<FixedVarPat>(B.pattern)) {
    const auto& pa = std::get<FixedVarPat>(A.pattern);
    const auto& pb = std::get<FixedVarPat>(B.pattern);
    if (pa.v != pb.v || pa.exp.a != pb.exp.a || pa.exp.a == 0)
      return std::nullopt;
    if ((pa.exp.b - pb.exp.b) % pa.exp.a != 0) return std::nullopt;
    d = (pa.exp.b - pb.exp.b) / pa.exp.a;
  } else if (std::holds_alternative<SingleVarPat>(A.pattern) &&
             std::holds_alternative<SingleVarPat>(B.pattern)) {
    const auto& pa = std::get<SingleVarPat>(A.pattern);
    const auto& pb = std::get<SingleVarPat>(B.pattern);
    if (pa.var.a != pb.var.a || pa.exp.a != pb.exp.a || pa.var.a == 0)
      return std::nullopt;
    if ((pa.var.b - pb.var.b) % pa.var.a != 0) return std::nullopt;
    d = (pa.var.b - pb.var.b) / pa.var.a;
    if (pa.exp.b != pb.exp.b + pa.exp.a * d) return std::nullopt;
  } else {
    return std::nullopt;
  }
  // Need coef_A(i) = lambda * coef_B(i + d) for all i in A's range, with the
  // factorial ratio folded in when both sequences carry 1/i!.
  std::vector<Rat> lhs = A.coef.q;
  std::vector<Rat> rhs = B.coef.shifted(d).q;
  if (A.coef.over_factorial) {
    if (d > 0)
      lhs = poly_mul_vec(lhs, rising_product(1, d));  // (i+1)...(i+d)
    else if (d < 0)
      rhs = poly_mul_vec(rhs, rising_product(d + 1, 0));  // (i+d+1)...(i)
  }
  if (lhs.empty() || rhs.empty()) return std::nullopt;
  if (lhs.size() != rhs.size()) return std::nullopt;
  Rat lambda = lhs.back() / rhs.back();
  if (lambda == 0) return std::nullopt;
  for (std::size_t k = 0; k < lhs.size(); ++k)
    if (lhs[k] != lambda * rhs[k]) return std::nullopt;
  // Range alignment: unmatched leading indices must carry zero coefficients.
  std::int64_t sA = static_cast<std::int64_t>(A.start);
  std::int64_t sB = static_cast<std::int64_t>(B.start);
  for (std::int64_t i = sA; i + d < sB; ++i)
    if (A.coef.eval(static_cast<std::uint64_t>(i)) != 0) return std::nullopt;
  for (std::int64_t j = sB; j - d < sA; ++j)
    if (B.coef.eval(static_cast<std::uint64_t>(j)) != 0) return std::nullopt;
  return lambda;
}

}  // namespace

std::optional<Rat> proportional(const OpPtr& A0, const OpPtr& B0) {
  OpPtr A = simplify(A0), B = simplify(B0);
  if (const auto* s = std::get_if<ScaleNode>(&A->node())) {
    auto r = proportional(s->inner, B);
    if (!r) return std::nullopt;
    return *r * s->c;
  }
  if (const auto* s = std::get_if<ScaleNode>(&B->node())) {
    auto r = proportional(A, s->inner);
    if (!r || s->c == 0) return std::nullopt;
    return *r / s->c;
  }
  const auto* fa = std::get_if<FiniteNode>(&A->node());
  const auto* fb = std::get_if<FiniteNode>(&B->node());
  if (fa && fb) {
    if (fa->op.is_zero() || fb->op.is_zero()) return std::nullopt;
    if (fa->op.terms().size() != fb->op.terms().size()) return std::nullopt;
    Rat lambda = 0;
    auto ia = fa->op.terms().begin();
    auto ib = fb->op.terms().begin();
    for (; ia != fa->op.terms().end(); ++ia, ++ib) {
      if (!(ia->first == ib->first)) return std::nullopt;
      Rat r = ia->second / ib->second;
      if (lambda == 0)
        lambda = r;
      else if (r != lambda)
        return std::nullopt;
    }
    return lambda;
  }
  const auto* ga = std::get_if<FamilyNode>(&A->node());
  const auto* gb = std::get_if<FamilyNode>(&B->node());
  if (ga && gb) return family_ratio(ga->spec, gb->spec);
  return std::nullopt;
}

// ---- variable support ------------------------------------------------------

VarSet varset(const OpPtr& D) {
  VarSet out;
  std::function<void(const OpPtr&)> walk = [&](const OpPtr& e) {
    if (const auto* n = std::get_if<FiniteNode>(&e->node())) {
      for (Var v : n->op.variables()) out.finite.push_back(v);
    } else if (const auto* n = std::get_if<ScaleNode>(&e->node())) {
      walk(n->inner);
    } else if (const auto* n = std::get_if<SumNode>(&e->node())) {
      for (const auto& p : n->parts) walk(p);
    } else if (const auto* n = std::get_if<ComposeNode>(&e->node())) {
      walk(n->left);
      walk(n->right);
    } else if (const auto* n = std::get_if<TensorDerNode>(&e->node())) {
      out.finite.push_back(n->v);
      walk(n->inner);
    } else if (const auto* n = std::get_if<FamilyNode>(&e->node())) {
      const auto& s = n->spec;
      for (const auto& [v, ex] : s.poly_factor.exponents())
        out.finite.push_back(v);
      if (std::holds_alternative<SingleVarPat>(s.pattern)) {
        out.progs.push_back({std::get<SingleVarPat>(s.pattern).var, s.start, s.stop});
      } else if (std::holds_alternative<FixedVarPat>(s.pattern)) {
        out.finite.push_back(std::get<FixedVarPat>(s.pattern).v);
      } else {
        const auto& p = std::get<PrefixPat>(s.pattern);
        out.progs.push_back(
            {Affine{1, static_cast<std::int64_t>(p.m) - 1}, 1, s.stop});
      }
    } else {
      out.opaque = true;
    }
  };
  walk(D);
  std::sort(out.finite.begin(), out.finite.end());
  out.finite.erase(std::unique(out.finite.begin(), out.finite.end()),
                   out.finite.end());
  return out;
}

namespace {

bool prog_contains(const VarSet::Progression& p, Var v) {
  if (v >= kYBase) return false;  // indexed families live on the x-block
  if (p.var.a <= 0) return true;  // degenerate; be conservative
  std::int64_t num = static_cast<std::int64_t>(v) - p.var.b;
  if (num < 0 || num % p.var.a != 0) return false;
  std::uint64_t i = static_cast<std::uint64_t>(num / p.var.a);
  return i >= p.lo && (!p.hi || i <= *p.hi);
}

bool progs_may_intersect(const VarSet::Progression& p,
                         const VarSet::Progression& q) {
  if (p.var.a <= 0 || q.var.a <= 0) return true;
  std::int64_t g = std::gcd(p.var.a, q.var.a);
  return (q.var.b - p.var.b) % g == 0;  // conservative on range bounds
}

}  // namespace

bool provably_disjoint(const VarSet& A, const VarSet& B) {
  if (A.opaque || B.opaque) return false;
  for (Var v : A.finite) {
    if (std::binary_search(B.finite.begin(), B.finite.end(), v)) return false;
    for (const auto& q : B.progs)
      if (prog_contains(q, v)) return false;
  }
  for (Var v : B.finite)
    for (const auto& p : A.progs)
      if (prog_contains(p, v)) return false;
  for (const auto& p : A.progs)
    for (const auto& q : B.progs)
      if (progs_may_intersect(p, q)) return false;
  return true;
}

// ---- printing --------------------------------------------------------------

namespace {

std::string family_to_string(const FamilySpec& s) {
  std::ostringstream os;
  if (std::holds_alternative<PrefixPat>(s.pattern)) {
    const auto& p = std::get<PrefixPat>(s.pattern);
    os << "prefixfamily(i>=" << s.start;
    if (p.m != 1) os << ", from=" << var_to_string(p.m);
    if (s.stop) os << ", i<=" << *s.stop;
    bool trivial_coef = !s.coef.over_factorial && s.coef.q.size() == 1 &&
                        s.coef.q[0] == 1;
    if (!trivial_coef) os << ", coef=" << s.coef.to_string("i");
    os << ")";
    if (!s.poly_factor.is_unit()) {
      return s.poly_factor.to_string() + "*" + os.str();
    }
    return os.str();
  }
  os << "family(i>=" << s.start;
  if (s.stop) os << ", i<=" << *s.stop;
  os << ", ";
  bool trivial_coef =
      !s.coef.over_factorial && s.coef.q.size() == 1 && s.coef.q[0] == 1;
  if (!trivial_coef) os << "(" << s.coef.to_string("i") << ")*";
  if (!s.poly_factor.is_unit()) os << s.poly_factor.to_string() << "*";
  if (std::holds_alternative<SingleVarPat>(s.pattern)) {
    const auto& p = std::get<SingleVarPat>(s.pattern);
    os << "d(x[" << p.var.to_string("i") << "])";
    if (!(p.exp.a == 0 && p.exp.b == 1)) os << "^(" << p.exp.to_string("i") << ")";
  } else {
    const auto& p = std::get<FixedVarPat>(s.pattern);
    os << "d(" << var_to_string(p.v) << ")";
    if (!(p.exp.a == 0 && p.exp.b == 1)) os << "^(" << p.exp.to_string("i") << ")";
  }
  os << ")";
  return os.str();
}

}  // namespace

std::string to_string(const OpPtr& D) {
  if (const auto* n = std::get_if<FiniteNode>(&D->node()))
    return n->op.to_string();
  if (const auto* n = std::get_if<ScaleNode>(&D->node())) {
    std::ostringstream os;
    os << "(" << n->c << ")*(" << to_string(n->inner) << ")";
    return os.str();
  }
  if (const auto* n = std::get_if<SumNode>(&D->node())) {
    std::string out;
    for (std::size_t i = 0; i < n->parts.size(); ++i) {
      if (i) out += " + ";
      out += to_string(n->parts[i]);
    }
    return out.empty() ? "0" : out;
  }
  if (const auto* n = std::get_if<ComposeNode>(&D->node()))
    return "compose(" + to_string(n->left) + ", " + to_string(n->right) + ")";
  if (const auto* n = std::get_if<TensorDerNode>(&D->node()))
    return "tensorder(" + to_string(n->inner) + ", " + var_to_string(n->v) +
           ", " + std::to_string(n->n) + ")";
  if (const auto* n = std::get_if<FamilyNode>(&D->node()))
    return family_to_string(n->spec);
  const auto& lb = std::get<LimitNode>(D->node()).branches;
  return "limitfamily(" + (lb.label.empty() ? "anonymous" : lb.label) + ")";
}

}  // namespace ordo
