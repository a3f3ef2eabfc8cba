#pragma once

#include <stdexcept>
#include <string>

namespace regdbn {

// Error categories map 1:1 onto the CLI's machine-parseable exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& msg)
        : std::runtime_error(msg), category_(std::move(category)) {}
    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

// Mismatched vector/matrix shapes.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error("dimension", msg) {}
};

// Rejected input: precondition violated by the caller's data.
class InvalidInputError : public Error {
public:
    explicit InvalidInputError(const std::string& msg) : Error("invalid_input", msg) {}
};

// Non-finite values produced during training.
class DivergenceError : public Error {
public:
    explicit DivergenceError(const std::string& msg) : Error("divergence", msg) {}
};

// Iterative fit failed to converge.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& msg) : Error("convergence", msg) {}
};

// Malformed file contents (missing column, unparseable cell, bad model file).
class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& msg) : Error("schema", msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error("io", msg) {}
};

} // namespace regdbn
