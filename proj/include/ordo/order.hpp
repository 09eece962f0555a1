// Order analysis: r-order by theta iteration, structural ordinal order,
// and the four-way classification of operators.
#pragma once

#include <cstdint>
#include <string>

#include "ordo/ordinal.hpp"
#include "ordo/stream.hpp"

namespace ordo {

struct OrderVerdict {
  enum Kind { Exact, AtLeast, InfiniteCertified } kind = AtLeast;
  std::uint64_t n = 0;    // Exact
  std::uint64_t cap = 0;  // AtLeast
  std::string certificate;
};

struct OrdinalOrderVerdict {
  enum Kind { Exact, UpperBound, NoOrdinalOrder, Unknown } kind = Unknown;
  Ordinal alpha;  // Exact / UpperBound
  std::string detail;
};

struct DiffClass {
  enum Kind {
    StronglyDiff,
    QuiteDiff,
    DiffWithoutOrdinalOrder,
    NotDifferential,
    Unknown
  } kind = Unknown;
  std::uint64_t n = 0;  // StronglyDiff
  Ordinal alpha;        // QuiteDiff
  Poly witness_r;       // NotDifferential
  std::string detail;
};

// Least n with theta_r^{n+1}(D) = 0, found by iterating theta with a zero
// test at every step; InfiniteCertified on a structural fixed point
// theta_r(T) = lambda*T with lambda != 0.
OrderVerdict r_order(const OpPtr& D, const Poly& r, std::uint64_t cap = 12,
                     std::uint64_t probe_budget = 8);

// Structural ordinal order of the expression tree. Throws ZeroOperator when
// D simplifies to the zero operator.
OrdinalOrderVerdict ordinal_order(const OpPtr& D);

DiffClass classify(const OpPtr& D, std::uint64_t probe_budget = 8,
                   std::uint64_t theta_cap = 12);

// zeta with zeta+1 = min((g+1)(d+1), (d+1)(g+1)): the composition bound for
// ordinal orders g and d.
Ordinal compose_order_bound(const Ordinal& g, const Ordinal& d);

std::string to_string(const OrderVerdict& v);
std::string to_string(const OrdinalOrderVerdict& v);
std::string to_string(const DiffClass& v);

}  // namespace ordo
