#include "hetdof/rational.hpp"

#include "hetdof/errors.hpp"

namespace hetdof {

std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(text));
    const auto den = std::stoll(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in rational '" + text + "'");
    return Rational(std::stoll(text.substr(0, slash)), den);
  } catch (const std::logic_error&) {
    throw InputError("malformed rational '" + text + "'");
  }
}

}  // namespace hetdof
