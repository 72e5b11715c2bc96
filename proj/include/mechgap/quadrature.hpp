#pragma once

#include <functional>

namespace mechgap {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // accumulated error estimate
    bool converged = true;
};

/// Adaptive Simpson on [a, b] with endpoint values supplied by the caller,
/// so integrands defined by a limit at an endpoint can be handled.
QuadResult adaptive_simpson(const std::function<double(double)>& f,
                            double a, double b, double fa, double fb,
                            double tol, int max_depth = 60);

/// Convenience overload evaluating the endpoints directly.
QuadResult adaptive_simpson(const std::function<double(double)>& f,
                            double a, double b, double tol, int max_depth = 60);

}  // namespace mechgap
