#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ctfsyn {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    /// Short machine-readable category used in the CLI's JSON error payload.
    virtual const char* kind() const noexcept { return "error"; }
};

/// Input outside an operation's documented domain.
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

/// Numerical procedure failed (step-size underflow, Newton non-convergence, singular fit).
class NumericError : public Error {
public:
    NumericError(const std::string& what, double residual = 0.0)
        : Error(what), residual_(residual) {}
    const char* kind() const noexcept override { return "numeric"; }
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Malformed or out-of-range configuration. Carries every violation found.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> violations);
    const char* kind() const noexcept override { return "config"; }
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

} // namespace ctfsyn
