// Finite differential operators on the polynomial ring: normal-ordered
// x^a ∘ d^b terms with rational coefficients, composition, commutators
// theta_r(A) = rA - Ar, application, and finite order.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ordo/errors.hpp"
#include "ordo/ring.hpp"

namespace ordo {

// Orders of iterated derivatives per variable; same shape as a monomial.
using DerivMultiIndex = Monomial;

class WeylOp {
 public:
  WeylOp() = default;

  static WeylOp identity();
  // multiplication by f
  static WeylOp mult(const Poly& f);
  // d^k/dv^k
  static WeylOp derivative(Var v, std::uint64_t k = 1);
  static WeylOp term(const Monomial& a, const DerivMultiIndex& b, const Rat& c);

  bool is_zero() const { return terms_.empty(); }
  const std::map<std::pair<Monomial, DerivMultiIndex>, Rat>& terms() const {
    return terms_;
  }

  WeylOp operator+(const WeylOp& o) const;
  WeylOp operator-(const WeylOp& o) const;
  WeylOp operator-() const;
  WeylOp scale(const Rat& c) const;

  void add_term(const Monomial& a, const DerivMultiIndex& b, const Rat& c);

  // Sorted list of variables occurring in either part of some term.
  std::vector<Var> variables() const;

  std::string to_string() const;

  friend bool operator==(const WeylOp& x, const WeylOp& y);

 private:
  std::map<std::pair<Monomial, DerivMultiIndex>, Rat> terms_;
};

struct MulFactor {
  Poly f;
};
struct DeriveFactor {
  Var v;
  std::uint64_t k = 1;
};
using RawFactor = std::variant<MulFactor, DeriveFactor>;

// Normal ordering of an arbitrary product of multiplication and derivation
// factors, applied left to right as operators.
WeylOp normal_form(const std::vector<RawFactor>& raw);

// Normal-ordered product A ∘ B (apply B first).
WeylOp compose(const WeylOp& A, const WeylOp& B);

// theta_r(A) = rA - Ar
WeylOp theta_poly(const Poly& r, const WeylOp& A);

Poly apply_finite(const WeylOp& A, const Poly& f);

// Maximal total derivative degree; throws ZeroOperator on the zero map.
std::uint64_t finite_order(const WeylOp& A);

}  // namespace ordo
