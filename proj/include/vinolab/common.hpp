#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace vinolab {

/// Arbitrary-precision signed integer.
using BigInt = boost::multiprecision::cpp_int;
/// Exact rational with arbitrary-precision numerator and denominator.
using Rational = boost::multiprecision::cpp_rational;
/// Solution counts. Always nonnegative; kept signed so inclusion-exclusion
/// style intermediates stay representable.
using Count = boost::multiprecision::cpp_int;
/// An assignment of integer values to variables.
using Tuple = std::vector<std::int64_t>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A table or enumeration would exceed the configured memory budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration exceeds its hard work limit.
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// Numerical quadrature failed its panel-doubling stability test.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Input violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration is malformed.
class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

inline std::string to_string(const BigInt& v) { return v.str(); }

/// Exact a^e for small nonnegative exponents.
inline BigInt ipow(const BigInt& a, unsigned e) {
  return boost::multiprecision::pow(a, e);
}

}  // namespace vinolab
