#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace hetdof {

using Rational = boost::rational<std::int64_t>;

/// Renders as "p/q" (always with a denominator, "0/1" for zero).
std::string to_string(const Rational& r);

/// Parses "p/q" or a bare integer.
Rational parse_rational(const std::string& text);

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

}  // namespace hetdof
