#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qam {

/// Caller supplied something that breaks a documented precondition.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numeric routine could not produce a trustworthy value.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed pattern file. Carries the offending 1-based line (0 when the
/// problem is not tied to a line, e.g. an unreadable file).
class PatternFileError : public ValidationError {
public:
    enum class Kind { Io, Empty, BlankLine, MissingNewline, NonBinary, Ragged, Duplicate, TooMany };

    PatternFileError(Kind kind, std::size_t line, const std::string& what)
        : ValidationError(what), kind_(kind), line_(line) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

}  // namespace qam
