#pragma once

#include <stdexcept>
#include <string>

namespace qfelab {

// Operands of incompatible dimension (states, channels, registers).
class DimensionMismatch : public std::invalid_argument {
 public:
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// A matrix or vector failed a validity check (normalization, Hermiticity, ...).
class InvalidState : public std::invalid_argument {
 public:
  explicit InvalidState(const std::string& what) : std::invalid_argument(what) {}
};

// A role in a security game acted out of turn or outside its budget.
class ProtocolViolation : public std::logic_error {
 public:
  explicit ProtocolViolation(const std::string& what) : std::logic_error(what) {}
};

// The ideal-world simulator tried to read data outside its allowed view.
class FirewallViolation : public ProtocolViolation {
 public:
  explicit FirewallViolation(const std::string& what) : ProtocolViolation(what) {}
};

// A property that must hold by theorem was observed to fail during a run.
class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qfelab
