#pragma once

#include <stdexcept>
#include <string>

namespace fundalloc {

// Error categories; the numeric value doubles as the CLI exit code.
enum class ErrorKind {
    config = 1,      // invalid configuration or command usage
    data = 2,        // bad input data, I/O failures, missing files
    provider = 3,    // embedding/chat provider transport or script failures
    parse = 4,       // model output could not be turned into an allocation
    infeasible = 5,  // optimizer found no feasible allocation
};

const char* error_kind_name(ErrorKind kind);

// Typed runtime error. `code` is a stable machine-readable identifier
// (e.g. "schema_error", "timeout_error") used by tests and CLI output.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const { return kind_; }
    const std::string& code() const { return code_; }
    int exit_code() const { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
    std::string code_;
};

}  // namespace fundalloc
