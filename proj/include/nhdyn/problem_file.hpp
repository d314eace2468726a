#pragma once

#include <string>

#include "nhdyn/constraints.hpp"

namespace nhdyn {

/// Load a problem from the line-oriented declarative format:
///
///   # comment
///   coords x y theta phi
///   param M = 1
///   lagrangian 0.5*M*(dx^2 + dy^2) + ...
///   constraint dx - R*cos(theta)*dphi
///   direction g1, ..., gn, b1, ..., bn
///   forces chetaev          (or repeated:  force e1, ..., en)
///
/// Sections may appear in any order; `coords` and `lagrangian` are required,
/// and a constrained problem must pick a force mode. Expression syntax
/// errors are reported with the offending line number.
NonholonomicProblem loadProblemFile(const std::string& path);

/// Parse the same format from an in-memory string (line numbers start at 1).
NonholonomicProblem parseProblemText(const std::string& text);

/// Serialize a problem into the file format; loading the result reproduces
/// the problem's behavior exactly.
std::string problemFileText(const NonholonomicProblem& problem);

}  // namespace nhdyn
