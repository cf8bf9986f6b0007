#pragma once
#include <stdexcept>
#include <string>

namespace hubbard {

// Inputs outside the regime an operation is defined for (J >= J_crit, open
// boundary for a momentum grid, malformed config values).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Integration drift, non-convergence, lost normalization.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hilbert space or dense matrix larger than the configured budget.
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hubbard
