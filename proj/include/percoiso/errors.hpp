#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>

namespace perco {

// Error taxonomy shared by all modules. The CLI maps these onto exit codes:
// usage/parse -> 2, budget/padding -> 3.

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an exact computation would exceed its enumeration budget.
// `partial_count` reports how much work completed before the bail-out.
struct BudgetError : std::runtime_error {
    std::uint64_t partial_count;
    explicit BudgetError(const std::string& msg, std::uint64_t partial = 0)
        : std::runtime_error(msg), partial_count(partial) {}
};

// Raised when a window is too small to decide a question about the infinite
// graph. Never downgraded to a silent approximation; the caller must enlarge
// the window.
struct PaddingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace perco
