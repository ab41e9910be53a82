#pragma once

#include <stdexcept>
#include <string>

namespace stablecut {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

/// The supplied values do not form a bijection of the stated domain.
class NotABijection : public Error {
public:
    using Error::Error;
};

/// An operation that needs a nonempty interval or subset received an empty one.
class EmptySubset : public Error {
public:
    using Error::Error;
};

/// An index, position, or person lies outside the relevant domain.
class OutOfDomain : public Error {
public:
    using Error::Error;
};

/// Two objects that must share a domain do not.
class DomainMismatch : public Error {
public:
    using Error::Error;
};

/// The requested window is not a subinterval of the domain.
class NotSubinterval : public Error {
public:
    using Error::Error;
};

/// A Lehmer code entry violates its positional range.
class InvalidCode : public Error {
public:
    using Error::Error;
};

/// A comparison was requested between a person and itself.
class SamePerson : public Error {
public:
    using Error::Error;
};

/// The instance exceeds a hard size cap of the requested operation.
class TooLarge : public Error {
public:
    using Error::Error;
};

/// A numeric parameter lies outside its admissible range.
class BadParameter : public Error {
public:
    using Error::Error;
};

/// A quantity exceeded the range of double precision; use the log-scale API.
class Overflow : public Error {
public:
    using Error::Error;
};

/// An enumeration produced more results than the caller's limit.
class LimitExceeded : public Error {
public:
    using Error::Error;
};

/// The work budget was spent before the computation finished.  The message
/// is a diagnostic only; no partial numeric answer is ever reported.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// No parameter choice in the searched range produced a finite bound.
class NoFiniteValue : public Error {
public:
    using Error::Error;
};

/// Every trial of an estimation run spent its budget; a BudgetExceeded so
/// callers can treat single-shot and aggregate budget exhaustion alike.
class AllTrialsFailed : public BudgetExceeded {
public:
    using BudgetExceeded::BudgetExceeded;
};

/// A textual document could not be parsed; the message carries the source
/// path and the JSON pointer of the offending element.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace stablecut
