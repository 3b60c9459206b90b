#pragma once

#include <stdexcept>
#include <string>

namespace gef {

// Violated input contract. The CLI maps this to exit status 2.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// A computation that could not be completed or certified. Exit status 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// The contour passes too close to a zero for the increment to be certified.
class ZeroOnContourError : public NumericError {
 public:
  explicit ZeroOnContourError(const std::string& what) : NumericError(what) {}
};

}  // namespace gef
