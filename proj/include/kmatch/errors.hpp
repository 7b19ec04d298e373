#pragma once

#include <stdexcept>
#include <string>

namespace kmatch {

// Malformed input text (edge lists, matching files).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameters outside the asymptotic regime a formula needs (d <= 1, p_d >= 1, ...).
class RegimeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A documented precondition of an operation does not hold for its input.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The generator could not repair its pair set: no edge is induced by the far
// set, or the repair budget ran out.
class GeneratorStalled : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact search or enumeration refused because the instance exceeds its cap.
class InstanceTooLarge : public std::length_error {
public:
    using std::length_error::length_error;
};

} // namespace kmatch
