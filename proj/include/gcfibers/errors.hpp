#pragma once

#include <stdexcept>
#include <string>

namespace gcf {

/// Input violates a documented precondition (non-interlacing data, point
/// outside the polytope, out-of-range stage, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// An edge set or equality set does not describe a face of the diagram.
struct InvalidFace : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A Hermitian matrix does not carry the expected spectrum.
struct SpectrumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical solve produced a result outside tolerance.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration was refused because the diagram is too large.
struct SizeGuardError : std::length_error {
  SizeGuardError(int boxes, int bound)
      : std::length_error("diagram has " + std::to_string(boxes) + " boxes; exhaustive face enumeration is limited to " +
                          std::to_string(bound) + " (raise GC_FIBERS_MAX_BOXES to at least " + std::to_string(boxes) +
                          " to override)"),
        boxes(boxes),
        bound(bound) {}
  int boxes;
  int bound;
};

/// Two independent computations that must agree did not. Always a bug.
struct InconsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace gcf
