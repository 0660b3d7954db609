#pragma once

#include <stdexcept>
#include <string>

namespace stretch {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Arguments outside an operation's documented domain.
struct PreconditionError : Error {
    using Error::Error;
};

/// A state the construction guarantees to be unreachable was reached.
struct InternalError : Error {
    using Error::Error;
};

/// An online policy was queried with an item sequence that cannot occur.
struct IllegalSequenceError : Error {
    using Error::Error;
};

/// Items fed to the wrapped algorithm during lifting stopped fitting.
struct InnerInfeasibilityError : InternalError {
    using InternalError::InternalError;
};

/// Node budget of a solve was exhausted.
struct ResourceLimitError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& what, int line, int column)
        : Error(what), line(line), column(column) {}
    int line;
    int column;
};

/// Proof tree is structurally inconsistent (bad loads, missing or extra child).
struct MalformedTreeError : Error {
    using Error::Error;
};

/// An adversary item in a proof violates the packing constraint.
struct InfeasibleItemError : Error {
    using Error::Error;
};

/// An algorithm decision tree leaves a legal adversary option unanswered.
struct IncompleteStrategyError : Error {
    using Error::Error;
};

}  // namespace stretch
