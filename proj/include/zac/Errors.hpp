#pragma once

#include <stdexcept>
#include <string>

namespace zac {

/// Malformed or inconsistent input (architecture, circuit, parameters).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The architecture cannot hold what the circuit asks for.
class CapacityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A compiled program failed replay, or an internal invariant broke.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace zac
