#pragma once

#include <stdexcept>
#include <string>

namespace dam {

// Every error carries the name of its kind so that front ends can report it.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error("DomainError", w) {}
};
struct SingularError : Error {
    explicit SingularError(const std::string& w) : Error("SingularError", w) {}
};
struct NormalizationError : Error {
    explicit NormalizationError(const std::string& w) : Error("NormalizationError", w) {}
};
struct NoBracketError : Error {
    explicit NoBracketError(const std::string& w) : Error("NoBracketError", w) {}
};
struct StabilityError : Error {
    explicit StabilityError(const std::string& w) : Error("StabilityError", w) {}
};

} // namespace dam
