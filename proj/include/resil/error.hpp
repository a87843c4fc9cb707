#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace resil {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured limit was hit.
class LimitExceeded : public Error {
public:
    using Error::Error;
};

struct Diagnostic {
    std::string location; // JSON-pointer style, e.g. "/petri/transitions/3/pre"
    std::string message;
};

/// One or more validation failures, each with its location in the input.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Diagnostic> diags);
    ValidationError(std::string location, std::string message)
        : ValidationError(std::vector<Diagnostic>{{std::move(location), std::move(message)}}) {}

    const std::vector<Diagnostic>& diagnostics() const noexcept { return diags_; }

private:
    std::vector<Diagnostic> diags_;
};

} // namespace resil
