#pragma once

#include <stdexcept>
#include <string>

namespace k3db {

// Clearing a denominator left a nonzero remainder.
struct NotPolynomial : std::runtime_error {
  explicit NotPolynomial(const std::string& what) : std::runtime_error(what) {}
};

// A quotient singularity r/a with gcd(a, r) != 1 or a out of range.
struct NotCoprime : std::invalid_argument {
  explicit NotCoprime(const std::string& what) : std::invalid_argument(what) {}
};

// Weight deduction could not complete within its repair budget, or the
// deduced weights fail final validation.
struct NoCandidate : std::runtime_error {
  explicit NoCandidate(const std::string& what) : std::runtime_error(what) {}
};

// Requested projection centre is not numerically of Type I.
struct NotTypeI : std::runtime_error {
  explicit NotTypeI(const std::string& what) : std::runtime_error(what) {}
};

// A projection produced a record with degree <= 0.
struct DegenerateDegree : std::runtime_error {
  explicit DegenerateDegree(const std::string& what) : std::runtime_error(what) {}
};

// The polarising class failed to be orthogonal to the exceptional curves
// in the lattice cross-check.
struct OrthogonalityFailure : std::logic_error {
  explicit OrthogonalityFailure(const std::string& what) : std::logic_error(what) {}
};

// A projection image has no matching database record.
struct ImageNotInDatabase : std::runtime_error {
  explicit ImageNotInDatabase(const std::string& what) : std::runtime_error(what) {}
};

// File could not be read or written, or is not in the expected syntax.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Database file declares a format version this code does not speak.
struct FormatVersionMismatch : std::runtime_error {
  explicit FormatVersionMismatch(const std::string& what) : std::runtime_error(what) {}
};

// Database file content does not hash to the digest in its header.
struct ChecksumMismatch : std::runtime_error {
  explicit ChecksumMismatch(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace k3db
