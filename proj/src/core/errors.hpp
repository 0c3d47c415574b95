#pragma once

#include <stdexcept>
#include <string>

namespace optlat {

enum class ErrorCategory {
    domain,    // bad argument or out-of-range input
    model,     // numeric precondition violated (branch bounds, stability)
    resource,  // configured limit exceeded
    parse,     // malformed config document
    internal,  // invariant broken inside the library
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string message)
        : std::runtime_error(std::move(message)), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

struct DomainError : Error {
    explicit DomainError(std::string message) : Error(ErrorCategory::domain, std::move(message)) {}
};

struct ModelError : Error {
    explicit ModelError(std::string message) : Error(ErrorCategory::model, std::move(message)) {}
};

struct ResourceError : Error {
    explicit ResourceError(std::string message) : Error(ErrorCategory::resource, std::move(message)) {}
};

struct ParseError : Error {
    explicit ParseError(std::string message) : Error(ErrorCategory::parse, std::move(message)) {}
};

struct InternalError : Error {
    explicit InternalError(std::string message) : Error(ErrorCategory::internal, std::move(message)) {}
};

}  // namespace optlat
