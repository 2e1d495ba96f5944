#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace ratnear {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "7", "-3/5", "0.125", "1e-3", "2.5e2" into an exact rational.
/// Decimal literals are read exactly (0.1 is 1/10, not the nearest double).
Rational parse_rational(std::string_view text);

/// Exact value of a finite double.
Rational rational_from_double(double value);

double to_double(const Rational& value);

/// Largest integer <= value.
BigInt floor_rational(const Rational& value);
BigInt ceil_rational(const Rational& value);

std::string to_string(const Rational& value);

}  // namespace ratnear
