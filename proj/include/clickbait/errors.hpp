#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clickbait {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error {
    using Error::Error;
};

// Malformed input. `line` is 1-based, 0 when not tied to a line.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
    std::size_t line;
};

struct ValidationError : Error {
    using Error::Error;
};

struct JoinError : Error {
    using Error::Error;
};

// Precondition violated by the caller (bad k, mismatched lengths, unknown feature, ...).
struct DomainError : Error {
    using Error::Error;
};

struct TrainingError : Error {
    using Error::Error;
};

struct ModelLoadError : Error {
    using Error::Error;
};

}  // namespace clickbait
