#pragma once

#include <stdexcept>
#include <string>

namespace kgnbr {

enum class ErrorKind {
    Io,
    Parse,
    NotFound,
    InvalidArgument,
    Schema,
    Model,
};

// Every library failure is thrown as an Error; the CLI maps the kind onto an exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(ErrorKind::Parse, source + ":" + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

inline Error io_error(const std::string& message) { return {ErrorKind::Io, message}; }
inline Error not_found(const std::string& message) { return {ErrorKind::NotFound, message}; }
inline Error invalid_argument(const std::string& message) {
    return {ErrorKind::InvalidArgument, message};
}
inline Error schema_error(const std::string& message) { return {ErrorKind::Schema, message}; }

}  // namespace kgnbr
