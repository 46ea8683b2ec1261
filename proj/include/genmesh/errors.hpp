#pragma once

#include <stdexcept>
#include <string>

namespace genmesh {

/// Precondition or argument violation on a public operation.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Geometric degeneracy (affinely dependent vertices, vanishing projection, ...).
struct DegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A structural axiom of a mesh was found violated mid-computation.
struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number.
struct ParseError : std::runtime_error {
    int line;
    ParseError(const std::string& what, int line_)
        : std::runtime_error(what + " (line " + std::to_string(line_) + ")"), line(line_) {}
};

}  // namespace genmesh
