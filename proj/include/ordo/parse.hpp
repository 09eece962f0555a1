// Text grammar for polynomials and operator expressions. Variables are
// written x1 or x[1] (y and y[j] for the auxiliary block), rationals as p/q,
// and every product needs an explicit *. Operator syntax covers finite Weyl
// expressions plus the catalogued families:
//   d(x1)^2 + x2*d(x3)          finite operator
//   family(i>=1, d(x[i])^i)     single-variable pattern
//   family(i>=0, (1/fact(i))*d(x[1])^i)
//   prefixfamily(i>=1)          products d(x1)...d(xi)
//   tensorder(E, y, n)          E followed by d(y)^n on a fresh variable
//   compose(E1, E2)
#pragma once

#include <string>

#include "ordo/ring.hpp"
#include "ordo/stream.hpp"

namespace ordo {

// Throws MalformedTerm with the offending position.
Poly parse_poly(const std::string& text);

// Throws MalformedTerm or UnsupportedFamily.
OpPtr parse_op(const std::string& text);

}  // namespace ordo
