#pragma once

#include <stdexcept>
#include <string>

namespace ltlab {

/// Invalid input or configuration (maps to CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Enumeration budget or matrix-size cap exceeded (exit code 3).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Occupied perturbed states reach the plane-wave cutoff shell (exit code 3).
class CutoffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An eigenvalue sits on the Fermi level within tolerance (exit code 4 in strict mode).
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ltlab
