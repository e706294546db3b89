#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace zwise {

// Everything thrown on purpose derives from Error so the CLI can map
// failures to exit codes without catching std::exception wholesale.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed construction arguments: breakpoints out of order, thresholds
// outside (0,1), bad config values.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Caller handed a value outside the documented domain (score outside [0,1],
// rating outside [1,10], wrong response count, empty input).
class InputError : public Error {
public:
    using Error::Error;
};

// Data too degenerate to work with: zero spread where a bandwidth is needed,
// undefined correlation, sample smaller than a method's floor.
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

// Density calibration found the wrong number of valleys for the requested
// taxonomy. Carries the counts so callers can report them.
class CalibrationMismatch : public Error {
public:
    CalibrationMismatch(std::size_t found, std::size_t expected, const std::string& what)
        : Error(what), found_(found), expected_(expected) {}
    std::size_t found() const { return found_; }
    std::size_t expected() const { return expected_; }

private:
    std::size_t found_;
    std::size_t expected_;
};

// Corpus validation failure. Collects every violation instead of stopping at
// the first so a bad file can be fixed in one pass.
class ValidationError : public Error {
public:
    ValidationError(std::vector<std::string> violations, const std::string& what)
        : Error(what), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

} // namespace zwise
