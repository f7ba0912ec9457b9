#pragma once

#include <stdexcept>
#include <string>

namespace normsnark {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller handed in something that violates an operation's precondition.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// An exact search was asked to run on an instance above its size guard.
class SizeGuardExceeded : public Error {
public:
    using Error::Error;
};

/// The extension construction does not cover this superposition
/// (odd cycle, every dock 1 and every p(1) = 1).
class MethodInapplicable : public Error {
public:
    using Error::Error;
};

/// The independent verifier rejected an assembled coloring. Never expected.
class VerificationFailed : public Error {
public:
    using Error::Error;
};

/// Malformed graph6 / JSON text.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace normsnark
