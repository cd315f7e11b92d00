#pragma once

#include <stdexcept>
#include <string>

namespace robustcap {

/// Malformed input data: bad CSV, unknown column, horizon mismatch.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A parameter value outside its documented domain.
struct InvalidParameter : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A SystemDesign violating catalog capacity limits or missing entries.
struct InvalidDesign : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Solver breakdown. An infeasible model is a status, not an error.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A modification that cannot be applied (overlapping splice, negative gaps).
struct ModificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem trouble while writing reports or artifacts.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace robustcap
