// Sparse multivariate polynomials over the rationals in countably many
// variables, plus monomial ideals with parametric generator families.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ordo/rational.hpp"

namespace ordo {

// Variables are positive integers. The first block x_1, x_2, ... is for user
// input; indices from kYBase are the auxiliary y-block used by tensor
// constructions (y = y_1), and indices from kAllocBase are handed out by the
// fresh-variable allocator.
using Var = std::uint64_t;

inline constexpr Var kYBase = 1'000'000'000;
inline constexpr Var kAllocBase = 2'000'000'000;

inline Var y_var(std::uint64_t j = 1) { return kYBase + j; }

std::string var_to_string(Var v);

// Exponent map; no zero exponents stored, empty map is the unit monomial.
class Monomial {
 public:
  Monomial() = default;
  static Monomial var(Var v, std::uint64_t e = 1);

  const std::map<Var, std::uint64_t>& exponents() const { return exps_; }
  std::uint64_t exponent_of(Var v) const;
  std::uint64_t degree() const;
  bool is_unit() const { return exps_.empty(); }

  Monomial times(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  // Quotient o / *this; only valid when divides(o).
  Monomial quotient_of(const Monomial& o) const;

  void set_exponent(Var v, std::uint64_t e);

  std::string to_string() const;

  // Graded lexicographic: total degree first, ties broken with smaller
  // variable indices weighing more.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b);

 private:
  std::map<Var, std::uint64_t> exps_;
};

class Poly {
 public:
  Poly() = default;
  static Poly constant(const Rat& c);
  static Poly variable(Var v);
  static Poly term(const Monomial& m, const Rat& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  const std::map<Monomial, Rat>& terms() const { return terms_; }
  Rat coeff(const Monomial& m) const;
  std::uint64_t degree() const;
  // Sorted list of variables occurring in some term.
  std::vector<Var> variables() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly scale(const Rat& c) const;

  std::string to_string() const;

  friend bool operator==(const Poly& a, const Poly& b);

  void add_term(const Monomial& m, const Rat& c);

 private:
  std::map<Monomial, Rat> terms_;
};

Poly poly_mul(const Poly& f, const Poly& g);

// k-fold partial derivative with respect to v.
Poly partial_derive(const Poly& f, Var v, std::uint64_t k = 1);

// Exact quotient num / f when f divides num in the polynomial ring,
// nullopt otherwise. f must be nonzero.
std::optional<Poly> divide_exact(const Poly& num, const Poly& f);

// Generator families for monomial ideals.
struct PurePowers {
  // generators x_{var(i)}^{exp(i)} with var(i) = s + t*i, exp(i) = a*i + b,
  // for i in [i0, i1] (i1 empty means unbounded).
  std::uint64_t s = 0, t = 1;
  std::int64_t a = 1, b = 0;
  std::uint64_t i0 = 1;
  std::optional<std::uint64_t> i1;
};

struct PairProducts {
  // generators x_i * x_j for all i != j in [lo, hi] (hi empty: unbounded).
  std::uint64_t lo = 1;
  std::optional<std::uint64_t> hi;
};

struct MonomialIdealSpec {
  std::vector<Monomial> finite_generators;
  std::vector<PurePowers> pure_power_families;
  std::vector<PairProducts> pair_product_families;
};

bool ideal_member(const Monomial& m, const MonomialIdealSpec& J);

// Drops every term whose monomial lies in J; idempotent and linear.
Poly reduce_mod(const Poly& f, const MonomialIdealSpec& J);

}  // namespace ordo
