#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fihde {

// Base class for all library errors. Subclasses distinguish the failure
// category so callers (and the CLI exit-code mapping) can dispatch on type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Structurally invalid data: grid mismatch, non-finite samples, bad lengths.
class DataError : public Error {
public:
    using Error::Error;
};

// Self-composition left the interval under the Strict policy.
class RangeError : public Error {
public:
    RangeError(const std::string& msg, std::vector<int> nodes)
        : Error(msg), escaped_nodes(std::move(nodes)) {}
    std::vector<int> escaped_nodes;
};

// Expression text failed to parse.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, std::size_t offset)
        : Error(msg), byte_offset(offset) {}
    std::size_t byte_offset;
};

// Expression evaluation hit a genuine domain fault (log of non-positive,
// division by zero, ...). The message names the offending subexpression.
class EvalError : public Error {
public:
    using Error::Error;
};

// An iterative solve failed to reach its tolerance within its cap.
class SolverError : public Error {
public:
    SolverError(const std::string& msg, double resid)
        : Error(msg), residual(resid) {}
    double residual;
};

// Bad or missing configuration (scenario keys, absent N1/N2, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// A monotone step produced an ordering violation beyond tolerance.
class MonotonicityError : public Error {
public:
    MonotonicityError(const std::string& msg, int step_, int node_, double magnitude_)
        : Error(msg), step(step_), node(node_), magnitude(magnitude_) {}
    int step;
    int node;
    double magnitude;
};

// File-system and format failures in the CLI layer.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace fihde
