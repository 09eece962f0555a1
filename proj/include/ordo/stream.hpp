// Countably infinite, locally finite operator expressions: structured sums
// of finite Weyl operators indexed by closed-form families, application,
// symbolic commutators, zero testing, and support bounds.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ordo/ordinal.hpp"
#include "ordo/weyl.hpp"

namespace ordo {

// ---- closed-form coefficient sequences ------------------------------------

// c(i) = q(i) or q(i)/i! with q a rational polynomial in the family index.
struct CoefForm {
  std::vector<Rat> q;  // q[k] is the coefficient of i^k
  bool over_factorial = false;

  static CoefForm one();
  static CoefForm constant(const Rat& c);

  Rat eval_poly(std::uint64_t i) const;  // q(i) only
  Rat eval(std::uint64_t i) const;       // q(i) or q(i)/i!
  bool is_zero_poly() const;

  CoefForm scaled(const Rat& c) const;
  // multiply q by the affine polynomial (a*i + b)
  CoefForm times_affine(const Rat& a, const Rat& b) const;
  // q(i + d)
  CoefForm shifted(std::int64_t d) const;

  std::string to_string(const std::string& idx) const;
};

// affine integer form a*i + b
struct Affine {
  std::int64_t a = 0, b = 0;
  std::int64_t eval(std::uint64_t i) const {
    return a * static_cast<std::int64_t>(i) + b;
  }
  bool operator==(const Affine&) const = default;
  std::string to_string(const std::string& idx) const;
};

// ---- family term patterns --------------------------------------------------

// term i differentiates variable var(i) to order exp(i)
struct SingleVarPat {
  Affine var;  // var.a >= 1
  Affine exp;
};

// term i differentiates the fixed variable v to order exp(i)
struct FixedVarPat {
  Var v = 1;
  Affine exp;
};

// term i is the product d(x_m) d(x_{m+1}) ... d(x_{m+i-1})
struct PrefixPat {
  Var m = 1;
};

struct FamilySpec {
  CoefForm coef = CoefForm::one();
  std::variant<SingleVarPat, FixedVarPat, PrefixPat> pattern;
  Monomial poly_factor;  // fixed monomial multiplier on every term
  std::uint64_t start = 1;
  std::optional<std::uint64_t> stop;  // inclusive

  bool in_range(std::uint64_t i) const;
  // materialized i-th summand
  WeylOp term(std::uint64_t i) const;
};

// ---- expression nodes ------------------------------------------------------

class OpExpr;
using OpPtr = std::shared_ptr<const OpExpr>;

struct FiniteNode {
  WeylOp op;
};
struct ScaleNode {
  Rat c;
  OpPtr inner;
};
struct SumNode {
  std::vector<OpPtr> parts;
};
struct ComposeNode {
  OpPtr left, right;  // left ∘ right (right applied first)
};
// inner ∘ d^n/dv^n with v not occurring in inner
struct TensorDerNode {
  OpPtr inner;
  Var v = 0;
  std::uint64_t n = 1;
};
struct FamilyNode {
  FamilySpec spec;
};

// Countable sum of sub-operators indexed by a branch number. Each branch has
// a set of trigger variables it owns; a branch can act on an input only if
// the input mentions one of its trigger variables, except for the branches
// listed in `always` (those that do not annihilate constants).
struct LimitBranches {
  std::uint64_t first = 1;
  std::function<OpPtr(std::uint64_t)> gen;
  std::function<std::optional<std::uint64_t>(Var)> owner;
  // true for variables occurring in every (or infinitely many) branches
  std::function<bool(Var)> shared;
  std::vector<std::uint64_t> always;
  std::function<Ordinal(std::uint64_t)> declared_order;  // may be empty
  std::optional<Ordinal> declared_sup;
  std::string label;
};
struct LimitNode {
  LimitBranches branches;
};

class OpExpr {
 public:
  using Node = std::variant<FiniteNode, ScaleNode, SumNode, ComposeNode,
                            TensorDerNode, FamilyNode, LimitNode>;

  explicit OpExpr(Node n) : node_(std::move(n)) {}
  const Node& node() const { return node_; }

  static OpPtr finite(WeylOp op);
  static OpPtr zero();
  static OpPtr identity();
  static OpPtr scale(Rat c, OpPtr inner);
  static OpPtr sum(std::vector<OpPtr> parts);
  static OpPtr comp(OpPtr left, OpPtr right);
  static OpPtr tensor_der(OpPtr inner, Var v, std::uint64_t n);
  static OpPtr family(FamilySpec spec);
  static OpPtr limit(LimitBranches branches);

 private:
  Node node_;
};

// ---- catalogue shortcuts ---------------------------------------------------

// Σ_{i>=1} d(x_i)^e
OpPtr make_uniform_family(std::uint64_t e);
// D_ω = Σ_{i>=1} d(x_i)^i
OpPtr make_d_omega();
// D_{ω+n} = D_ω ∘ d(y)^n
OpPtr make_d_omega_plus(std::uint64_t n);
// D_∞ = Σ_{i>=1} d(x_1)···d(x_i)
OpPtr make_d_infinity();
// Sh = Σ_{i>=0} 1/i! d(x_v)^i
OpPtr make_shift(Var v = 1);
// D_{ω+ω} = Σ_{j>=1} D_ω ∘ d(y_j)^j as a limit family triggered by the y_j
OpPtr make_d_omega_omega();

// ---- operations ------------------------------------------------------------

Poly apply(const OpPtr& D, const Poly& f);

// N such that every family index i >= N annihilates every polynomial in the
// variables V of total degree <= d; composite nodes combine child bounds.
std::uint64_t support_bound(const OpPtr& D, const std::vector<Var>& V,
                            std::uint64_t d);

// rD - Dr, in closed form for catalogued patterns
OpPtr theta(const Poly& r, const OpPtr& D);
OpPtr theta_var(Var v, const OpPtr& D);

// Structural simplification: folds scalars, flattens sums, merges finite
// parts, collapses zero branches.
OpPtr simplify(const OpPtr& D);

struct ZeroVerdict {
  enum Kind { Zero, NonZero, Unknown } kind = Unknown;
  Poly witness;             // for NonZero: apply(D, witness) != 0
  std::string certificate;  // for Zero: the structural reason
  std::uint64_t budget = 0;
};

ZeroVerdict zero_test(const OpPtr& D, std::uint64_t budget);

// Variables worth probing (finite slice of the operator's support).
std::vector<Var> probe_vars(const OpPtr& D, std::uint64_t budget);

// If A == c*B structurally for a nonzero scalar c, returns c.
std::optional<Rat> proportional(const OpPtr& A, const OpPtr& B);

// Conservative symbolic variable support, for disjointness analysis.
struct VarSet {
  struct Progression {
    Affine var;  // var(i) for i in [lo, hi]
    std::uint64_t lo = 1;
    std::optional<std::uint64_t> hi;
  };
  std::vector<Var> finite;
  std::vector<Progression> progs;
  bool opaque = false;  // membership not finitely described
};

VarSet varset(const OpPtr& D);
// true only when provably disjoint
bool provably_disjoint(const VarSet& A, const VarSet& B);

std::string to_string(const OpPtr& D);

}  // namespace ordo
