#pragma once

#include <stdexcept>
#include <string>

namespace urn {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Request exceeds an enumeration or memory guard.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inconsistent configuration, e.g. declared limits that contradict each other.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A distance curve never dropped below the requested level on the search range.
class NoCrossingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A proven inequality failed numerically. Either a bug or a counterexample.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace urn
