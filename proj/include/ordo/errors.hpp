#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ordo {

// Requested an order-like quantity of the zero map, which has none.
struct ZeroOperator : std::runtime_error {
  ZeroOperator() : std::runtime_error("zero operator has no order") {}
  explicit ZeroOperator(const std::string& what) : std::runtime_error(what) {}
};

// Requested a torsion invariant of an element that is zero in the module.
struct ZeroElement : std::runtime_error {
  ZeroElement() : std::runtime_error("element is zero in the module") {}
};

// Localization refused: the operator has no finite order with respect to
// the inverted element, so it does not extend to the localized module.
struct InfiniteLocalOrder : std::runtime_error {
  explicit InfiniteLocalOrder(const std::string& what) : std::runtime_error(what) {}
};

// The order probe ran out of budget without certifying a finite order.
struct OrderUnknown : std::runtime_error {
  explicit OrderUnknown(const std::string& what) : std::runtime_error(what) {}
};

// Gluing refused: the two chart values disagree on the overlap.
struct NotCompatible : std::runtime_error {
  explicit NotCompatible(const std::string& what) : std::runtime_error(what) {}
};

// Gluing refused: the chart elements do not generate the unit ideal.
struct NotCoprime : std::runtime_error {
  explicit NotCoprime(const std::string& what) : std::runtime_error(what) {}
};

// Syntax error in a polynomial, ordinal, or operator expression.
struct MalformedTerm : std::runtime_error {
  MalformedTerm(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position(position) {}
  std::size_t position;
};

// A family expression outside the supported catalogue shapes.
struct UnsupportedFamily : std::runtime_error {
  explicit UnsupportedFamily(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace ordo
