#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asags {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A resource file could not be opened or read.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// A resource or dataset file is malformed. `line()` is 1-based, 0 when the
/// error is not tied to a line (JSON schema errors carry a field path instead).
class LoadError : public Error {
public:
    LoadError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid arguments to a scoring or evaluation operation (empty reference,
/// malformed configuration, ...).
class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace asags
