#ifndef ELA_ERRORS_HPP
#define ELA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ela {

// Exit-code mapping for the CLI: validation failures exit 1, numerical
// failures exit 2, I/O failures exit 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user-supplied values: parameter domains, shape mismatches, config.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Parameter outside a mathematical domain (alpha <= 0, x < 0, ...).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Containers whose shapes or orderings do not line up.
class StructuralError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Unusable run configuration (unknown mapper, missing fields, ...).
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// An iterative scheme failed to converge, or training diverged.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Filesystem trouble; message carries the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ela

#endif  // ELA_ERRORS_HPP
