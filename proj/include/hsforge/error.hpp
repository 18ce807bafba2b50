#pragma once

#include <stdexcept>
#include <string>

namespace hsforge {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operation called outside its domain: mismatched universes, non-units, bad parameters.
class precondition_error : public error {
public:
    using error::error;
};

// Input data violates a structural requirement (e.g. a substitution map that is not well defined).
class validation_error : public error {
public:
    using error::error;
};

class parse_error : public error {
public:
    using error::error;
};

// Raised by derivation-coordinate solvers when a derivation is outside the span of the generators.
class solver_error : public precondition_error {
public:
    using precondition_error::precondition_error;
};

class cancelled : public error {
public:
    cancelled() : error("operation cancelled") {}
};

} // namespace hsforge
