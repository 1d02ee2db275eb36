#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msflow {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class UnknownElement : public Error {
public:
    explicit UnknownElement(const std::string& name)
        : Error("unknown element '" + name + "'"), name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

// Raised by the text readers; line() is 1-based, 0 when not attributable.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace msflow
