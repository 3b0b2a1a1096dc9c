#pragma once

#include <stdexcept>
#include <string>

namespace sbmh {

/// Invalid input: bad configuration, malformed file, precondition violated.
/// The CLI maps this to exit status 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine could not produce a trustworthy answer (singular
/// system, failed factorization, eigenvalue too close to 1). Exit status 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sbmh
