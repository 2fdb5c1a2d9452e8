#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

// Precondition violations on caller-supplied data.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A point outside the set an operation is defined on (e.g. |x| >= 1 for the
// Poisson kernel's interior argument).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A function handed in as a modulus of continuity is not one.
class InvalidModulus : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class DimensionError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// Adaptive integration ran out of subdivisions; carries the partial result.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, double partial, double error)
        : std::runtime_error(what), partial_value(partial), error_estimate(error) {}

    double partial_value;
    double error_estimate;
};

}  // namespace fraclab
