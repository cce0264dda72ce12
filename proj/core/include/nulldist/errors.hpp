#pragma once

#include <stdexcept>
#include <string>

namespace nulldist {

// Error taxonomy shared by every module. The CLI maps these to exit codes.

/// Point or parameter outside the chart / admissible domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller broke a documented precondition (non-causal segment, bad bounds, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Quadrature, root finding or a graph search failed to deliver a number.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No admissible path between two lattice nodes.
class UnreachableError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Malformed scenario file, expression or command line value.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace nulldist
