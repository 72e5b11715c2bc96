#pragma once

#include <functional>

namespace mechgap {

/// Root of f on [lo, hi] by bisection; requires a sign change on the bracket.
/// Returns the midpoint of the final bracket of width <= tol.
double bisect_root(const std::function<double(double)>& f,
                   double lo, double hi, double tol, int max_iter);

/// Solve f(p) = y for f strictly decreasing on (1, inf), with f -> inf as
/// p -> 1+ and f -> 0 as p -> inf. The bracket is grown geometrically from
/// the initial guess p0 before bisecting.
double invert_decreasing(const std::function<double(double)>& f,
                         double y, double p0, double tol, int max_iter);

/// Maximize a unimodal f on [a, b] by golden-section search; returns argmax.
double golden_section_max(const std::function<double(double)>& f,
                          double a, double b, double tol, int max_iter);

}  // namespace mechgap
