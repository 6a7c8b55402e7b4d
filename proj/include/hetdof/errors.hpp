#pragma once

#include <stdexcept>
#include <string>

namespace hetdof {

/// Malformed input: bad parameters, unknown node indices, unparsable documents.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A configuration that no implemented scheme covers.
class UnsupportedConfiguration : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// More zero-forcing constraints than transmit antennas.
class InfeasibleShape : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A linear system that should be generic turned out (numerically) singular.
class GenericityViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive search refused because the instance exceeds the size cap.
class SearchTooLarge : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace hetdof
