#pragma once

#include <iosfwd>
#include <string>

#include "robustcap/lp.hpp"

namespace robustcap {

/// Serializes the problem as LP interchange text: a Minimize section,
/// one named constraint row per line, a Bounds section with exactly one
/// line per variable, then End. Variable ordering follows the problem's
/// index order and names are sanitized deterministically, so identical
/// problems produce identical bytes.
std::string export_lp_file(const LpProblem& problem);

/// Parses text produced by export_lp_file (or compatible hand-written
/// files) back into a problem. Throws SchemaError with a line number on
/// malformed input.
LpProblem parse_lp_file(const std::string& text);

}  // namespace robustcap
