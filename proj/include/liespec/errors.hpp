#pragma once

#include <stdexcept>
#include <string>

namespace liespec {

/// Base class for all liespec errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// linalg errors
class ShapeMismatch : public Error {
public:
    using Error::Error;
};
class NonFiniteEntry : public Error {
public:
    using Error::Error;
};
class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

// Lie-structure errors
class NotIndependent : public Error {
public:
    using Error::Error;
};
class NotClosed : public Error {
public:
    using Error::Error;
};
class NotSolvable : public Error {
public:
    using Error::Error;
};
class NotNilpotent : public Error {
public:
    using Error::Error;
};
class NotAnIdeal : public Error {
public:
    using Error::Error;
};
class NotACharacter : public Error {
public:
    using Error::Error;
};

// homology errors
class DegreeOutOfRange : public Error {
public:
    using Error::Error;
};
class ComplexNotChain : public Error {
public:
    using Error::Error;
};
class NotCommuting : public Error {
public:
    using Error::Error;
};

// spectrum errors
class NumericalFailure : public Error {
public:
    using Error::Error;
};
class CombinatorialBlowup : public Error {
public:
    using Error::Error;
};
class IncompleteCandidates : public Error {
public:
    using Error::Error;
};

// io errors
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace liespec
