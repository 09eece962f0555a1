#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace ordo {

// Exact rational coefficients; every formula here needs characteristic zero.
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

}  // namespace ordo
