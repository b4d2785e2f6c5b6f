#pragma once

#include <stdexcept>
#include <string>

namespace orbitpool {

/// Base class for all orbitpool errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched groups, incompatible grids, malformed arguments.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// A method was requested for a case it does not support
/// (e.g. exact symmetric-difference measure outside translation boxes).
class UnsupportedMethod : public Error {
public:
    explicit UnsupportedMethod(const std::string& what) : Error(what) {}
};

/// Input violates a support/margin/resolution precondition.
class DegenerateInput : public Error {
public:
    explicit DegenerateInput(const std::string& what) : Error(what) {}
};

/// Vector fields too close to linearly dependent for a curvature estimate.
class DegenerateBasis : public Error {
public:
    explicit DegenerateBasis(const std::string& what) : Error(what) {}
};

}  // namespace orbitpool
