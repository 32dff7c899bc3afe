#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace outerface {

// Domain-level failure with a stable machine-readable kind ("SingleClass",
// "PoolTooSmall", ...). The CLI maps any DomainError to exit code 1 and
// prints the kind so scripts can branch on it.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void raise(std::string kind, const std::string& message) {
    throw DomainError(std::move(kind), message);
}

inline void require(bool cond, const char* kind, const std::string& message) {
    if (!cond) throw DomainError(kind, message);
}

}  // namespace outerface
