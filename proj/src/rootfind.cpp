#include "mechgap/rootfind.hpp"

#include <cmath>
#include <stdexcept>

#include "mechgap/tolerance.hpp"

namespace mechgap {

double bisect_root(const std::function<double(double)>& f,
                   double lo, double hi, double tol, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0) == (fhi < 0))
        throw ConvergenceError("bisect_root: no sign change on bracket");
    for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    if ((hi - lo) > tol)
        throw ConvergenceError("bisect_root: bracket did not shrink to tolerance");
    return 0.5 * (lo + hi);
}

double invert_decreasing(const std::function<double(double)>& f,
                         double y, double p0, double tol, int max_iter) {
    // Grow the bracket in (1, inf): lo has f(lo) >= y, hi has f(hi) <= y.
    double lo = p0, hi = p0;
    int tries = 0;
    while (f(hi) > y) {
        hi = 1.0 + 2.0 * (hi - 1.0);
        if (++tries > max_iter)
            throw ConvergenceError("invert_decreasing: upper bracket not found");
    }
    tries = 0;
    while (f(lo) < y) {
        lo = 1.0 + 0.5 * (lo - 1.0);
        if (++tries > max_iter)
            throw ConvergenceError("invert_decreasing: lower bracket not found");
    }
    for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) >= y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double golden_section_max(const std::function<double(double)>& f,
                          double a, double b, double tol, int max_iter) {
    constexpr double inv_phi = 0.6180339887498949;  // (sqrt(5)-1)/2
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace mechgap
