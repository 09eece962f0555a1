#include "ordo/order.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "ordo/errors.hpp"

namespace ordo {

namespace {

OrderVerdict exact(std::uint64_t n, std::string cert) {
  OrderVerdict v;
  v.kind = OrderVerdict::Exact;
  v.n = n;
  v.certificate = std::move(cert);
  return v;
}

}  // namespace

OrderVerdict r_order(const OpPtr& D, const Poly& r, std::uint64_t cap,
                     std::uint64_t probe_budget) {
  OpPtr T = simplify(D);
  ZeroVerdict z = zero_test(T, probe_budget);
  if (z.kind == ZeroVerdict::Zero)
    return exact(0, "operator is zero: " + z.certificate);
  bool contiguous = (z.kind == ZeroVerdict::NonZero);
  bool prev_nonzero = contiguous;
  std::uint64_t last_nonzero = 0;
  for (std::uint64_t k = 1; k <= cap + 1; ++k) {
    OpPtr next = simplify(theta(r, T));
    if (prev_nonzero) {
      if (auto lam = proportional(next, T); lam && *lam != 0) {
        OrderVerdict v;
        v.kind = OrderVerdict::InfiniteCertified;
        v.certificate = "theta fixed point at step " + std::to_string(k - 1) +
                        " with factor " + lam->str();
        return v;
      }
    }
    z = zero_test(next, probe_budget);
    if (z.kind == ZeroVerdict::Zero) {
      if (contiguous)
        return exact(k - 1, "theta^" + std::to_string(k) + " vanished: " +
                                z.certificate);
      OrderVerdict v;
      v.kind = OrderVerdict::AtLeast;
      v.cap = last_nonzero;
      v.certificate = "order between " + std::to_string(last_nonzero) +
                      " and " + std::to_string(k - 1) +
                      " (intermediate steps not certified nonzero)";
      return v;
    }
    prev_nonzero = (z.kind == ZeroVerdict::NonZero);
    if (prev_nonzero)
      last_nonzero = k;
    else
      contiguous = false;
    T = next;
  }
  OrderVerdict v;
  v.kind = OrderVerdict::AtLeast;
  v.cap = cap;
  v.certificate = "no vanishing within cap " + std::to_string(cap);
  return v;
}

Ordinal compose_order_bound(const Ordinal& g, const Ordinal& d) {
  Ordinal one = Ordinal::finite(1);
  Ordinal p1 = mul(add(g, one), add(d, one));
  Ordinal p2 = mul(add(d, one), add(g, one));
  // both products end in the successor right factor, so pred is defined
  return (p1 <= p2 ? p1 : p2).pred();
}

namespace {

OrdinalOrderVerdict oo_exact(Ordinal a, std::string detail) {
  OrdinalOrderVerdict v;
  v.kind = OrdinalOrderVerdict::Exact;
  v.alpha = std::move(a);
  v.detail = std::move(detail);
  return v;
}

OrdinalOrderVerdict oo_upper(Ordinal a, std::string detail) {
  OrdinalOrderVerdict v;
  v.kind = OrdinalOrderVerdict::UpperBound;
  v.alpha = std::move(a);
  v.detail = std::move(detail);
  return v;
}

OrdinalOrderVerdict oo_none(std::string detail) {
  OrdinalOrderVerdict v;
  v.kind = OrdinalOrderVerdict::NoOrdinalOrder;
  v.detail = std::move(detail);
  return v;
}

OrdinalOrderVerdict oo_unknown(std::string detail) {
  OrdinalOrderVerdict v;
  v.kind = OrdinalOrderVerdict::Unknown;
  v.detail = std::move(detail);
  return v;
}

// derivative degree of the i-th family term (undefined when the coefficient
// vanishes there)
std::uint64_t family_term_degree(const FamilySpec& s, std::uint64_t i) {
  if (const auto* sv = std::get_if<SingleVarPat>(&s.pattern)) {
    std::int64_t e = sv->exp.eval(i);
    return e > 0 ? static_cast<std::uint64_t>(e) : 0;
  }
  if (const auto* fv = std::get_if<FixedVarPat>(&s.pattern)) {
    std::int64_t e = fv->exp.eval(i);
    return e > 0 ? static_cast<std::uint64_t>(e) : 0;
  }
  return i;  // prefix: i first-order factors
}

OrdinalOrderVerdict oo(const OpPtr& D);
OrdinalOrderVerdict oo_impl(const OpPtr& D);

OrdinalOrderVerdict oo_family(const FamilySpec& s) {
  if (s.stop) {
    // finitely many terms: a finite operator in disguise
    bool any = false;
    std::uint64_t best = 0;
    for (std::uint64_t i = s.start; i <= *s.stop; ++i) {
      if (s.coef.eval(i) == 0) continue;
      any = true;
      best = std::max(best, family_term_degree(s, i));
    }
    if (!any) throw ZeroOperator("family has no nonzero terms");
    return oo_exact(Ordinal::finite(best), "bounded family");
  }
  if (std::holds_alternative<PrefixPat>(s.pattern))
    return oo_none(
        "prefix family: iterated theta along consecutive variables never "
        "stabilises at a fixed level");
  if (const auto* sv = std::get_if<SingleVarPat>(&s.pattern)) {
    if (s.coef.is_zero_poly()) throw ZeroOperator("family coefficient is zero");
    if (sv->exp.a >= 1)
      return oo_exact(Ordinal::omega(),
                      "unbounded term degrees over infinitely many variables");
    if (sv->exp.a == 0 && sv->exp.b >= 0)
      return oo_exact(Ordinal::finite(static_cast<std::uint64_t>(sv->exp.b)),
                      "uniform term degree over infinitely many variables");
    return oo_unknown("family with decreasing exponent form");
  }
  // fixed-variable family with infinitely many terms: infinite order in its
  // own variable, so no level of the filtration contains it; but that is a
  // differentiability question settled by probing, not here.
  return oo_unknown("unbounded single-variable family");
}

OrdinalOrderVerdict oo_limit(const LimitBranches& br) {
  if (!br.declared_sup || !br.declared_order)
    return oo_unknown("limit family without declared orders");
  if (!br.declared_sup->is_limit())
    return oo_unknown("declared supremum is not a limit ordinal");
  for (std::uint64_t b = br.first; b < br.first + 3; ++b) {
    OrdinalOrderVerdict v;
    try {
      v = oo(simplify(br.gen(b)));
    } catch (const ZeroOperator&) {
      return oo_unknown("probed branch is zero");
    }
    if (v.kind != OrdinalOrderVerdict::Exact || !(v.alpha == br.declared_order(b)))
      return oo_unknown("probed branch order disagrees with declaration");
    if (!(v.alpha < *br.declared_sup))
      return oo_unknown("declared order not below declared supremum");
  }
  return oo_exact(*br.declared_sup,
                  "declared supremum, branch orders verified on probes");
}

// Expression trees built lazily share subtrees through memoized generators,
// so verdicts are cached per node (the key pins the node alive).
OrdinalOrderVerdict oo(const OpPtr& D) {
  static std::mutex mu;
  static std::map<const OpExpr*, std::pair<OpPtr, OrdinalOrderVerdict>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(D.get());
    if (it != cache.end()) return it->second.second;
  }
  OrdinalOrderVerdict v = oo_impl(D);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(D.get(), std::make_pair(D, v));
  return v;
}

OrdinalOrderVerdict oo_impl(const OpPtr& D) {
  const auto& n = D->node();
  if (const auto* f = std::get_if<FiniteNode>(&n))
    return oo_exact(Ordinal::finite(finite_order(f->op)), "finite operator");
  if (const auto* s = std::get_if<ScaleNode>(&n)) return oo(s->inner);
  if (const auto* t = std::get_if<TensorDerNode>(&n)) {
    OrdinalOrderVerdict v = oo(t->inner);
    if (v.kind == OrdinalOrderVerdict::Exact ||
        v.kind == OrdinalOrderVerdict::UpperBound)
      v.alpha = add(v.alpha, Ordinal::finite(t->n));
    return v;
  }
  if (const auto* fam = std::get_if<FamilyNode>(&n)) return oo_family(fam->spec);
  if (const auto* lim = std::get_if<LimitNode>(&n)) return oo_limit(lim->branches);
  if (const auto* c = std::get_if<ComposeNode>(&n)) {
    OrdinalOrderVerdict l = oo(c->left), r = oo(c->right);
    bool lb = l.kind == OrdinalOrderVerdict::Exact ||
              l.kind == OrdinalOrderVerdict::UpperBound;
    bool rb = r.kind == OrdinalOrderVerdict::Exact ||
              r.kind == OrdinalOrderVerdict::UpperBound;
    if (lb && rb)
      return oo_upper(compose_order_bound(l.alpha, r.alpha),
                      "composition bound");
    return oo_unknown("composition with unbounded factor");
  }
  const auto& parts = std::get<SumNode>(n).parts;
  std::vector<OrdinalOrderVerdict> vs;
  std::vector<VarSet> sets;
  for (const auto& p : parts) {
    vs.push_back(oo(p));
    if (vs.back().kind == OrdinalOrderVerdict::Unknown)
      return oo_unknown("summand of unknown order");
    sets.push_back(varset(p));
  }
  bool disjoint = true;
  for (std::size_t i = 0; i < sets.size() && disjoint; ++i)
    for (std::size_t j = i + 1; j < sets.size() && disjoint; ++j)
      if (!provably_disjoint(sets[i], sets[j])) disjoint = false;
  bool all_exact = true, any_none = false;
  Ordinal best;
  for (const auto& v : vs) {
    if (v.kind == OrdinalOrderVerdict::NoOrdinalOrder) {
      any_none = true;
      continue;
    }
    if (v.kind != OrdinalOrderVerdict::Exact) all_exact = false;
    if (best < v.alpha) best = v.alpha;
  }
  if (any_none) {
    if (disjoint)
      return oo_none("variable-disjoint sum with a summand of no order");
    return oo_unknown("entangled sum with a summand of no order");
  }
  if (disjoint && all_exact)
    return oo_exact(best, "maximum over variable-disjoint summands");
  return oo_upper(best, "maximum over summands");
}

}  // namespace

OrdinalOrderVerdict ordinal_order(const OpPtr& D) {
  OpPtr S = simplify(D);
  if (const auto* f = std::get_if<FiniteNode>(&S->node());
      f && f->op.is_zero())
    throw ZeroOperator("ordinal order of the zero operator");
  return oo(S);
}

DiffClass classify(const OpPtr& D, std::uint64_t probe_budget,
                   std::uint64_t theta_cap) {
  OpPtr S = simplify(D);
  OrdinalOrderVerdict v = ordinal_order(S);
  DiffClass out;
  if (v.kind == OrdinalOrderVerdict::Exact) {
    if (v.alpha.is_finite()) {
      out.kind = DiffClass::StronglyDiff;
      out.n = v.alpha.finite_value();
    } else {
      out.kind = DiffClass::QuiteDiff;
      out.alpha = v.alpha;
    }
    out.detail = v.detail;
    return out;
  }
  std::vector<Var> vars = probe_vars(S, probe_budget);
  if (vars.size() > 6) vars.resize(6);
  bool all_exact = !vars.empty();
  for (Var x : vars) {
    OrderVerdict rv = r_order(S, Poly::variable(x), theta_cap, probe_budget);
    if (rv.kind == OrderVerdict::InfiniteCertified) {
      out.kind = DiffClass::NotDifferential;
      out.witness_r = Poly::variable(x);
      out.detail = rv.certificate;
      return out;
    }
    if (rv.kind != OrderVerdict::Exact) all_exact = false;
  }
  if (v.kind == OrdinalOrderVerdict::NoOrdinalOrder && all_exact) {
    out.kind = DiffClass::DiffWithoutOrdinalOrder;
    out.detail = v.detail;
    return out;
  }
  out.kind = DiffClass::Unknown;
  out.detail = v.detail;
  return out;
}

std::string to_string(const OrderVerdict& v) {
  switch (v.kind) {
    case OrderVerdict::Exact:
      return "exact(" + std::to_string(v.n) + ")";
    case OrderVerdict::AtLeast:
      return "atleast(" + std::to_string(v.cap) + ")";
    default:
      return "infinite";
  }
}

std::string to_string(const OrdinalOrderVerdict& v) {
  switch (v.kind) {
    case OrdinalOrderVerdict::Exact:
      return "exact(" + v.alpha.to_string() + ")";
    case OrdinalOrderVerdict::UpperBound:
      return "upperbound(" + v.alpha.to_string() + ")";
    case OrdinalOrderVerdict::NoOrdinalOrder:
      return "no-ordinal-order";
    default:
      return "unknown";
  }
}

std::string to_string(const DiffClass& v) {
  switch (v.kind) {
    case DiffClass::StronglyDiff:
      return "strongly-differential(" + std::to_string(v.n) + ")";
    case DiffClass::QuiteDiff:
      return "quite-differential(" + v.alpha.to_string() + ")";
    case DiffClass::DiffWithoutOrdinalOrder:
      return "differential-without-ordinal-order";
    case DiffClass::NotDifferential:
      return "not-differential(" + v.witness_r.to_string() + ")";
    default:
      return "unknown";
  }
}

}  // namespace ordo
