#pragma once

#include <stdexcept>
#include <string>

namespace compfeat {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Graph does not satisfy skeleton invariants (cycle, multiple sinks, ...).
class StructuralError : public Error {
public:
    using Error::Error;
};

/// A value or parameter does not belong to the base space it is used with.
class DomainMismatchError : public Error {
public:
    using Error::Error;
};

/// Out-of-range argument (negative coefficient, delta outside (0,1), ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// API misuse, e.g. inner product of embeddings from different registries.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Operation needs a finite parameter domain but a continuous base is present.
class UnsupportedSpaceError : public Error {
public:
    using Error::Error;
};

/// Iterative solver hit its epoch cap before reaching tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace compfeat
