#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace techrank {

// Root of all techrank error conditions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A file could not be opened or read.
class IoError : public Error {
public:
    using Error::Error;
};

// An edge references a label that is not part of the node lists.
class UnknownLabelError : public Error {
public:
    using Error::Error;
};

// A label appears twice within one layer.
class DuplicateLabelError : public Error {
public:
    using Error::Error;
};

// A layer has no nodes, either on input or after pruning.
class EmptyLayerError : public Error {
public:
    using Error::Error;
};

// Malformed input file content. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A row or object lacks a required column/field.
class MissingColumnError : public ParseError {
public:
    using ParseError::ParseError;
};

// The same entity occurs twice in a file that requires unique entities.
class DuplicateEntityError : public Error {
public:
    using Error::Error;
};

// A degree power k^(-exponent) left the finite double range.
class NumericalOverflowError : public Error {
public:
    using Error::Error;
};

// Fewer than two entities are shared by the two rankings.
class InsufficientOverlapError : public Error {
public:
    using Error::Error;
};

// One rank vector is constant, the correlation is undefined.
class ZeroVarianceError : public Error {
public:
    using Error::Error;
};

// Requested dense verification beyond the feasibility bound.
class OracleTooLargeError : public Error {
public:
    using Error::Error;
};

}  // namespace techrank
