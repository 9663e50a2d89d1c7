#pragma once

#include <stdexcept>
#include <string>

namespace dcop {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad text, wrong schema, inconsistent dimensions.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Declared (M, L) disagree with the stored data, or an index is out of range.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A precondition on mathematical content failed (an axiom, irreducibility, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Dense grid would exceed the configured size budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// Two equal values in a margin ranked under the error tie policy.
class TieError : public Error {
public:
    using Error::Error;
};

}  // namespace dcop
