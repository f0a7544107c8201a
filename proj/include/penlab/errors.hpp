#pragma once

#include <stdexcept>
#include <string>

namespace penlab {

// Bad arguments to an operation (dimension mismatch, negative epsilon, ...).
class input_error : public std::invalid_argument {
 public:
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// A user-supplied function produced NaN (or an otherwise unusable value).
class evaluation_error : public std::runtime_error {
 public:
  explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed configuration file, unknown registry name, inconsistent problem spec.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Every multistart run failed; no minimum estimate is available.
class solve_error : public std::runtime_error {
 public:
  explicit solve_error(const std::string& what) : std::runtime_error(what) {}
};

// Operation not available for the requested configuration.
class unsupported_error : public std::logic_error {
 public:
  explicit unsupported_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace penlab
