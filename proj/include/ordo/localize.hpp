// Extension of operators to principal localizations R[f^{-1}] via the
// commutator recursion, two-chart gluing over the univariate ring, and the
// colocalization Hom-vanishing check.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ordo/ring.hpp"
#include "ordo/stream.hpp"

namespace ordo {

// num / f^k with the ambient f implicit; normalized so that f does not
// exactly divide num while k > 0.
struct LocalizedPoly {
  Poly num;
  std::uint64_t k = 0;

  friend bool operator==(const LocalizedPoly& a, const LocalizedPoly& b) {
    return a.k == b.k && a.num == b.num;
  }
};

LocalizedPoly normalize_local(Poly num, std::uint64_t k, const Poly& f);
inline LocalizedPoly embed(const Poly& u) { return {u, 0}; }
LocalizedPoly local_add(const LocalizedPoly& a, const LocalizedPoly& b,
                        const Poly& f);
std::string to_string(const LocalizedPoly& v, const Poly& f);

// An operator together with its certified finite order with respect to f
// and the precomputed commutator chain theta_f^j(base).
class LocalOperator {
 public:
  const OpPtr& base() const { return chain_.front(); }
  const Poly& f() const { return f_; }
  std::uint64_t f_order() const { return chain_.size() - 1; }

 private:
  friend LocalOperator extend(const OpPtr&, const Poly&, std::uint64_t);
  friend LocalizedPoly apply_local(const LocalOperator&, const LocalizedPoly&);
  std::vector<OpPtr> chain_;
  Poly f_;
};

// Succeeds iff r_order(D, f, cap) is exact; throws InfiniteLocalOrder when
// the order is certified infinite (shift-type operators) and OrderUnknown
// when the probe budget runs out.
LocalOperator extend(const OpPtr& D, const Poly& f, std::uint64_t cap = 12);

// Evaluates the defining recursion f * D_S(v) = theta_f(D)_S(v) + D_S(f*v)
// by dynamic programming over (chain position, denominator exponent).
LocalizedPoly apply_local(const LocalOperator& D, const LocalizedPoly& v);

struct GlueResult {
  // (input, glued value) pairs; the glued value is the unique polynomial
  // localizing to both chart values
  std::vector<std::pair<Poly, Poly>> table;
  // reconstructed finite operator when the table is consistent with one
  OpPtr op;
};

// Two-chart gluing over k[x]: requires gcd(f, g) = 1 and chart agreement on
// every input; throws NotCoprime / NotCompatible otherwise.
GlueResult glue(const LocalOperator& D1, const LocalOperator& D2,
                const std::vector<Poly>& inputs);

enum class HomVanishing { ZeroModule, AllOfR };

// Hom_R(R[f^{-1}], R) for R = k[x]: zero unless f is a unit.
HomVanishing hom_vanishing(const Poly& f);

std::string to_string(HomVanishing v);

}  // namespace ordo
