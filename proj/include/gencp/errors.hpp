#ifndef GENCP_ERRORS_HPP
#define GENCP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gencp {

// Programming errors: a caller broke an operation's contract.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Invalid task definitions (unbounded task, bad schema values).
class TaskError : public std::runtime_error {
public:
    explicit TaskError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed serialized input (assignment encodings, task files, reports).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Unrecoverable backend failures (after retries, or protocol errors).
class BackendError : public std::runtime_error {
public:
    explicit BackendError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gencp

#endif
