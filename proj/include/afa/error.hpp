// error.hpp - exception types shared by the library and the CLI
#pragma once

#include <stdexcept>
#include <string>

namespace afa {

// Invalid configuration: bad grid, mismatched kernel/grid, bad CLI values.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a function (R = 0 at x = 0, p <= 2, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A computation produced a non-finite or inconsistent value.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed state file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace afa
