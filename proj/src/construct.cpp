#include "ordo/construct.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "ordo/errors.hpp"
#include "ordo/order.hpp"
#include "ordo/ring.hpp"

namespace ordo {

std::string BuildAddress::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += ".";
    s += std::to_string(path[i]);
  }
  return s + "]";
}

Var BlockAllocator::var_for(const BuildAddress& a) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = fwd_.find(a);
  if (it != fwd_.end()) return it->second;
  Var v = kAllocBase + static_cast<Var>(fwd_.size());
  fwd_.emplace(a, v);
  rev_.emplace(v, a);
  return v;
}

std::optional<BuildAddress> BlockAllocator::address_of(Var v) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = rev_.find(v);
  if (it == rev_.end()) return std::nullopt;
  return it->second;
}

std::vector<Var> BlockAllocator::allocated() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<Var> out;
  for (const auto& [v, a] : rev_) out.push_back(v);
  return out;
}

namespace {

std::function<OpPtr(std::uint64_t)> memo_gen(
    std::function<OpPtr(std::uint64_t)> f) {
  auto cache = std::make_shared<std::map<std::uint64_t, OpPtr>>();
  auto mu = std::make_shared<std::mutex>();
  return [f = std::move(f), cache, mu](std::uint64_t n) {
    std::lock_guard<std::mutex> lock(*mu);
    auto it = cache->find(n);
    if (it != cache->end()) return it->second;
    OpPtr r = f(n);
    cache->emplace(n, r);
    return r;
  };
}

// Trigger variables worth probing, collected structurally: every tensor step
// contributes its fresh variable, and limit nodes expand only a few branches
// (the higher ones first, fewer at deeper nesting) so that the collection
// stays small while still reaching commutator orders cofinal in the target.
void collect_triggers(const OpPtr& D, std::uint64_t quota,
                      std::set<Var>& out) {
  const auto& n = D->node();
  if (const auto* f = std::get_if<FiniteNode>(&n)) {
    for (Var v : f->op.variables()) out.insert(v);
  } else if (const auto* s = std::get_if<ScaleNode>(&n)) {
    collect_triggers(s->inner, quota, out);
  } else if (const auto* s = std::get_if<SumNode>(&n)) {
    for (const auto& p : s->parts) collect_triggers(p, quota, out);
  } else if (const auto* c = std::get_if<ComposeNode>(&n)) {
    collect_triggers(c->left, quota, out);
    collect_triggers(c->right, quota, out);
  } else if (const auto* t = std::get_if<TensorDerNode>(&n)) {
    out.insert(t->v);
    collect_triggers(t->inner, quota, out);
  } else if (const auto* fam = std::get_if<FamilyNode>(&n)) {
    const auto& s = fam->spec;
    for (const auto& [v, e] : s.poly_factor.exponents()) out.insert(v);
    std::uint64_t hi = s.start + 6;
    if (s.stop) hi = std::min(hi, *s.stop);
    if (const auto* sv = std::get_if<SingleVarPat>(&s.pattern)) {
      for (std::uint64_t i = s.start; i <= hi; ++i) {
        std::int64_t v = sv->var.eval(i);
        if (v >= 1) out.insert(static_cast<Var>(v));
      }
    } else if (const auto* fv = std::get_if<FixedVarPat>(&s.pattern)) {
      out.insert(fv->v);
    } else {
      Var m = std::get<PrefixPat>(s.pattern).m;
      for (std::uint64_t k = 0; k <= 6; ++k) out.insert(m + k);
    }
  } else {
    const auto& lb = std::get<LimitNode>(n).branches;
    std::uint64_t k = std::min<std::uint64_t>(
        3, std::max<std::uint64_t>(1, quota));
    for (std::uint64_t b = lb.first + 3 - k; b <= lb.first + 2; ++b)
      collect_triggers(lb.gen(b), quota ? quota - 1 : 0, out);
  }
}

}  // namespace

OpPtr build_D(const Ordinal& alpha,
              const std::shared_ptr<BlockAllocator>& alloc,
              const BuildAddress& at) {
  if (alpha.is_zero()) return OpExpr::identity();
  if (alpha.is_successor()) {
    BuildAddress child = at;
    child.path.push_back(0);
    OpPtr inner = build_D(alpha.pred(), alloc, child);
    Var y = alloc->var_for(at);
    return OpExpr::tensor_der(inner, y, 1);
  }
  LimitBranches lb;
  lb.first = 1;
  lb.gen = memo_gen([alloc, at, alpha](std::uint64_t n) {
    BuildAddress branch = at;
    branch.path.push_back(n);
    return build_D(fundamental_sequence(alpha, n), alloc, branch);
  });
  lb.owner = [alloc, at](Var v) -> std::optional<std::uint64_t> {
    auto a = alloc->address_of(v);
    if (!a || a->path.size() <= at.path.size()) return std::nullopt;
    if (!std::equal(at.path.begin(), at.path.end(), a->path.begin()))
      return std::nullopt;
    std::uint64_t next = a->path[at.path.size()];
    if (next == 0) return std::nullopt;
    return next;
  };
  lb.shared = [](Var) { return false; };
  lb.declared_order = [alpha](std::uint64_t n) {
    return fundamental_sequence(alpha, n);
  };
  lb.declared_sup = alpha;
  lb.label = "D[" + alpha.to_string() + "]";
  return OpExpr::limit(std::move(lb));
}

BuiltOperator build_D(const Ordinal& alpha) {
  BuiltOperator b;
  b.allocator = std::make_shared<BlockAllocator>();
  b.alpha = alpha;
  b.op = build_D(alpha, b.allocator, BuildAddress{});
  return b;
}

ProbeReport verify_order_probes(const OpPtr& D, const Ordinal& alpha,
                                std::uint64_t budget) {
  auto bad = [](std::string s) { return ProbeReport{false, std::move(s)}; };
  if (!alpha.is_zero() && !ordo::apply(D, Poly::constant(1)).is_zero())
    return bad("operator does not annihilate constants");
  if (alpha.is_zero()) {
    OrdinalOrderVerdict v = ordinal_order(D);
    if (v.kind == OrdinalOrderVerdict::Exact && v.alpha.is_zero())
      return {true, "consistent: order 0"};
    return bad("order is not 0: " + to_string(v));
  }
  std::set<Var> triggers;
  collect_triggers(D, std::min<std::uint64_t>(budget, 3), triggers);
  std::optional<Ordinal> best;
  std::uint64_t determined = 0;
  for (Var x : triggers) {
    OpPtr t = theta_var(x, D);
    OrdinalOrderVerdict v;
    try {
      v = ordinal_order(t);
    } catch (const ZeroOperator&) {
      continue;
    }
    if (v.kind == OrdinalOrderVerdict::NoOrdinalOrder)
      return bad("commutator through " + var_to_string(x) + " has no order");
    if (v.kind == OrdinalOrderVerdict::Unknown) continue;
    if (!(v.alpha < alpha))
      return bad("commutator through " + var_to_string(x) +
                 " has order >= target: " + to_string(v));
    if (v.kind == OrdinalOrderVerdict::Exact) {
      ++determined;
      if (!best || *best < v.alpha) best = v.alpha;
    }
  }
  if (!best) return bad("no commutator order could be determined");
  if (alpha.is_successor()) {
    if (!(*best == alpha.pred()))
      return bad("probed orders top out at " + best->to_string() +
                 ", below the predecessor " + alpha.pred().to_string());
  } else {
    Ordinal threshold = fundamental_sequence(alpha, 2);
    if (*best < threshold)
      return bad("probed orders top out at " + best->to_string() +
                 ", not cofinal past " + threshold.to_string());
  }
  return {true, "consistent: " + std::to_string(determined) +
                    " commutator orders below " + alpha.to_string() +
                    ", max " + best->to_string()};
}

namespace {

std::uint64_t depth_of(const OpPtr& D, std::uint64_t budget) {
  const auto& n = D->node();
  if (std::holds_alternative<FiniteNode>(n) ||
      std::holds_alternative<FamilyNode>(n))
    return 1;
  if (const auto* s = std::get_if<ScaleNode>(&n))
    return 1 + depth_of(s->inner, budget);
  if (const auto* t = std::get_if<TensorDerNode>(&n))
    return 1 + depth_of(t->inner, budget);
  if (const auto* s = std::get_if<SumNode>(&n)) {
    std::uint64_t d = 0;
    for (const auto& p : s->parts) d = std::max(d, depth_of(p, budget));
    return 1 + d;
  }
  if (const auto* c = std::get_if<ComposeNode>(&n))
    return 1 + std::max(depth_of(c->left, budget),
                        depth_of(c->right, budget));
  const auto& lb = std::get<LimitNode>(n).branches;
  std::uint64_t d = 0, probe = std::min<std::uint64_t>(budget, 3);
  for (std::uint64_t b = lb.first; b < lb.first + probe; ++b)
    d = std::max(d, depth_of(lb.gen(b), budget));
  return 1 + d;
}

}  // namespace

BuildSummary summarize(const BuiltOperator& b, std::uint64_t budget) {
  BuildSummary s;
  s.depth = depth_of(b.op, budget);
  (void)probe_vars(b.op, budget);  // materialize the probed branches
  std::vector<Var> vs = b.allocator->allocated();
  s.allocated = vs.size();
  if (!vs.empty()) {
    s.lo = *std::min_element(vs.begin(), vs.end());
    s.hi = *std::max_element(vs.begin(), vs.end());
  }
  return s;
}

}  // namespace ordo
