// Ordinal arithmetic in Cantor normal form below epsilon_0.
//
// An ordinal is a finite sum  w^e1 * c1 + w^e2 * c2 + ... with ordinal
// exponents e1 > e2 > ... and positive integer coefficients. The empty
// sum is 0; finite ordinals have a single term with exponent 0.
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ordo {

class Ordinal;

struct OrdinalTerm {
  // exponent is stored behind a vector inside Ordinal, so the recursion
  // bottoms out at the empty term list.
  std::vector<OrdinalTerm> exponent;
  std::uint64_t coeff = 0;
};

class Ordinal {
 public:
  Ordinal() = default;

  static Ordinal finite(std::uint64_t n);
  static Ordinal omega();
  // w^e * c  (c >= 1)
  static Ordinal omega_pow(const Ordinal& e, std::uint64_t c = 1);

  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  // Finite value; only valid when is_finite().
  std::uint64_t finite_value() const;

  bool is_successor() const;
  bool is_limit() const { return !is_zero() && !is_successor(); }

  // Predecessor of a successor ordinal.
  Ordinal pred() const;

  const std::vector<OrdinalTerm>& terms() const { return terms_; }

  // Leading exponent; only valid for nonzero ordinals.
  Ordinal leading_exponent() const;

  std::string to_string() const;

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b);

 private:
  friend Ordinal add(const Ordinal&, const Ordinal&);
  friend Ordinal mul(const Ordinal&, const Ordinal&);
  std::vector<OrdinalTerm> terms_;
};

std::strong_ordering compare(const Ordinal& a, const Ordinal& b);

// Standard (non-commutative) ordinal addition and multiplication.
Ordinal add(const Ordinal& a, const Ordinal& b);
Ordinal mul(const Ordinal& a, const Ordinal& b);

// n-th member of the canonical fundamental sequence of a limit ordinal:
// for a = g + w^(s+1) returns g + w^s * n, for a = g + w^l (l limit)
// returns g + w^(l[n]). Throws std::invalid_argument unless a is a limit.
Ordinal fundamental_sequence(const Ordinal& a, std::uint64_t n);

// Text syntax: `w` for omega, `^` powers, `*` and `+`, e.g.
// "w^2*3 + w*2 + 5". Parenthesised ordinals are allowed as exponents.
// Returns std::nullopt on malformed input.
std::optional<Ordinal> parse_ordinal(const std::string& text);

}  // namespace ordo
