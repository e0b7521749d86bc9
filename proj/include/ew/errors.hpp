#pragma once

#include <stdexcept>
#include <string>

namespace ew {

// Parameter outside its admissible range (|phi| >= 1, rho not in [0,1), ...).
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Structurally invalid request (zero length, odd k where even is required, ...).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Exact-enumeration budget exceeded. Enumeration never truncates silently.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed-form oracle requested for a process it does not cover.
struct unsupported_oracle_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Eigensolver or other numerical routine failed.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ew
