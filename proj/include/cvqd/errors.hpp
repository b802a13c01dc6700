#pragma once

#include <stdexcept>
#include <string>

namespace cvqd {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Drift matrix has spectral abscissa >= -1e-12; no steady state exists.
struct UnstableDrift : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidBlockId : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Symplectic spectrum of a block came out complex (unphysical input).
struct ComplexEigenvalue : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NegativeRadicand : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Config syntax error; carries the 1-based line number.
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_no, const std::string& what_arg)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what_arg),
        line(line_no) {}
};

/// Semantic error in a config or parameter set; names the offending field.
struct ValidationError : std::runtime_error {
  std::string field;
  ValidationError(std::string field_name, const std::string& what_arg)
      : std::runtime_error(field_name + ": " + what_arg), field(std::move(field_name)) {}
};

}  // namespace cvqd
