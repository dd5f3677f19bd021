#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace divaudit {

// All score and utility arithmetic is exact. Floats never appear in a
// verdict path.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts integers ("4", "-2"), fractions ("7/2") and decimals ("3.5").
std::optional<Rational> parse_rational(std::string_view text);

// Canonical form: integer when the denominator is 1, otherwise "num/den".
std::string format_rational(const Rational& value);

}  // namespace divaudit
