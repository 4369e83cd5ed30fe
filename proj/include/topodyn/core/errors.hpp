#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace topodyn {

/// Raised when an argument lies outside an operation's domain
/// (cascade index 0, flow time below the grid step, empty subshift, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when an operation would exceed a configured evaluation or size cap.
class ResourceError : public std::runtime_error {
public:
    ResourceError(std::string operation, const std::string& what)
        : std::runtime_error(operation + ": " + what), operation_(std::move(operation))
    {
    }

    [[nodiscard]] const std::string& operation() const noexcept { return operation_; }

private:
    std::string operation_;
};

/// Malformed input text; line and column are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column), message_(message)
    {
    }

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

struct Limits {
    std::uint64_t max_evals = 10'000'000;
    std::size_t max_net = 1'000'000;
};

/// Counts map evaluations for one operation and throws once the cap is passed.
class EvalBudget {
public:
    EvalBudget(std::string operation, std::uint64_t cap) : operation_(std::move(operation)), cap_(cap) {}

    EvalBudget(const EvalBudget&) = delete;
    EvalBudget& operator=(const EvalBudget&) = delete;

    void charge(std::uint64_t n)
    {
        used_ += n;
        if (used_ > cap_) {
            throw ResourceError(operation_, "evaluation cap of " + std::to_string(cap_) + " exceeded");
        }
    }

    /// Throws up front when a known total would not fit.
    void require(std::uint64_t n) const
    {
        if (n > cap_ || used_ + n > cap_) {
            throw ResourceError(operation_, "requires " + std::to_string(n) + " evaluations, cap is " +
                                                std::to_string(cap_));
        }
    }

    [[nodiscard]] std::uint64_t used() const noexcept { return used_; }
    [[nodiscard]] std::uint64_t cap() const noexcept { return cap_; }
    [[nodiscard]] const std::string& operation() const noexcept { return operation_; }

private:
    std::string operation_;
    std::uint64_t cap_;
    std::uint64_t used_ = 0;
};

} // namespace topodyn
