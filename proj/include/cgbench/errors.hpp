#pragma once

#include <stdexcept>
#include <string>

namespace cgbench {

// Operand shapes do not match (vector lengths, matrix dims).
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// The operator fed to the solver is not positive definite (p'Ap <= 0).
class NotPositiveDefinite : public std::runtime_error {
 public:
  explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// File opened fine but its contents are malformed.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A benchmark produced output that disagrees with the scalar reference.
class ChecksumError : public std::runtime_error {
 public:
  explicit ChecksumError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cgbench
