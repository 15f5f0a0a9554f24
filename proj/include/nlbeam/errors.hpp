#pragma once

#include <stdexcept>
#include <string>

namespace nlbeam {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A constructor or operation received parameters outside its contract.
class InvalidConfiguration : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    LengthMismatch(const std::string& what, std::size_t expected, std::size_t got)
        : Error(what + ": expected length " + std::to_string(expected) + ", got " +
                std::to_string(got)) {}
};

/// Raised when c_f >= sigma_1, i.e. the coercivity margin omega is not positive.
class AssumptionViolation : public Error {
public:
    using Error::Error;
};

/// The integrator produced a non-finite state.
class BlowUp : public Error {
public:
    BlowUp(double time)
        : Error("non-finite state at t = " + std::to_string(time)), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Configuration text could not be parsed or validated; carries the offending line.
class ConfigError : public Error {
public:
    ConfigError(int line, const std::string& what)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace nlbeam
