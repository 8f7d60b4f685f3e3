#pragma once

#include <stdexcept>
#include <string>

namespace c2e {

/// Shape, valence or symmetry mismatch between operands.
class StructuralError : public std::logic_error {
 public:
  explicit StructuralError(const std::string& what) : std::logic_error(what) {}
};

/// A derivative was requested from a jet with no remaining order.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// Domain violation or a singular value where an invertible one is required.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// A construction was requested on geometry that does not satisfy its hypotheses
/// (not generic, wrong obstruction class, wrong dimension).
class PreconditionError : public StructuralError {
 public:
  explicit PreconditionError(const std::string& what) : StructuralError(what) {}
};

}  // namespace c2e
