#ifndef WALKMAX_ERRORS_HPP
#define WALKMAX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace walkmax {

// Raised when a run would exceed its jump-evaluation budget.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an iterative numerical routine fails to reach its tolerance.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised on malformed or inconsistent run configuration.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace walkmax

#endif
