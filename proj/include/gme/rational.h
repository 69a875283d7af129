#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace gme {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "3", "-2", "1/2", "-7/3". Throws DomainError on anything else.
Rational parse_rational(std::string_view text);

/// Canonical text: "2", "-1/2".
std::string to_string(const Rational& value);

double to_double(const Rational& value);

}  // namespace gme
