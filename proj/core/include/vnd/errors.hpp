#pragma once

#include <stdexcept>
#include <string>

namespace vnd {

// Base class for all library errors.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument values (non-finite entries, out-of-range parameters,
// dimension mismatches).
class invalid_input_error : public error {
 public:
  using error::error;
};

// Input does not have the structure an operation requires (wrong rank,
// not nilpotent, spans not one-dimensional, ...).
class structure_error : public error {
 public:
  using error::error;
};

// Numerically near-dependent input to an orthogonalization.
class degeneracy_error : public error {
 public:
  using error::error;
};

// A result would exceed a configured size cap.
class capacity_error : public error {
 public:
  using error::error;
};

// Ill-conditioned or otherwise numerically unreliable computation.
class numeric_error : public error {
 public:
  using error::error;
};

}  // namespace vnd
