#pragma once

#include <stdexcept>

namespace mechgap {

/// Numeric tolerances shared by series evaluation, quadrature, root finding
/// and price-grid construction.
struct ToleranceConfig {
    double series_tol = 1e-12;     // absolute series-tail cutoff
    double quad_tol = 1e-9;        // absolute quadrature target
    double root_tol = 1e-10;       // absolute bracket width for root finding
    int max_iter = 200;            // iteration cap for iterative schemes
    int grid_resolution = 1000;    // price-grid points per unit length

    void validate() const {
        if (series_tol <= 0 || quad_tol <= 0 || root_tol <= 0)
            throw std::invalid_argument("ToleranceConfig: tolerances must be positive");
        if (max_iter < 50)
            throw std::invalid_argument("ToleranceConfig: max_iter must be at least 50");
        if (grid_resolution < 1)
            throw std::invalid_argument("ToleranceConfig: grid_resolution must be positive");
    }
};

/// Thrown when an iterative scheme fails to reach its tolerance.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mechgap
