#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace depgen {

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Unrecoverable parse failure (unbalanced braces at top level).
class FatalSyntaxError : public Error {
public:
    FatalSyntaxError(const std::string& what, int line, int column)
        : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
          line(line),
          column(column) {}
    int line;
    int column;
};

class DuplicatePathError : public Error {
public:
    using Error::Error;
};

class DuplicateClassError : public Error {
public:
    using Error::Error;
};

class PointNotFoundError : public Error {
public:
    using Error::Error;
};

/// The incomplete-function text already contains the generation marker.
class MarkerCollisionError : public Error {
public:
    using Error::Error;
};

class TokenizeError : public Error {
public:
    using Error::Error;
};

/// Shared-prefix removal consumed the entire token sequence.
class EmptyResidualError : public Error {
public:
    using Error::Error;
};

class EmptyMaskError : public Error {
public:
    using Error::Error;
};

/// Decode budget exhausted before the API call completed.
class TruncatedError : public Error {
public:
    TruncatedError(const std::string& what, std::vector<int> partial)
        : Error(what), partial(std::move(partial)) {}
    std::vector<int> partial;
};

class UnknownContextError : public Error {
public:
    using Error::Error;
};

class TransportError : public Error {
public:
    using Error::Error;
};

class MalformedResponseError : public Error {
public:
    using Error::Error;
};

class LengthMismatchError : public Error {
public:
    using Error::Error;
};

class EmptySetError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace depgen
