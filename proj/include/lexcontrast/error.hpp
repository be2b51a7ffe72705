#ifndef LEXCONTRAST_ERROR_HPP
#define LEXCONTRAST_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexcontrast {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. `location()` is a 1-based record or line index, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t location = 0)
        : Error(location ? what + " (at " + std::to_string(location) + ")" : what),
          location_(location) {}

    std::size_t location() const noexcept { return location_; }

private:
    std::size_t location_;
};

/// A numerical kernel could not produce a defined result (singular matrix, zero variance, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace lexcontrast

#endif
