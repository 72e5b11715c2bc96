#include "mechgap/quadrature.hpp"

#include <cmath>

namespace mechgap {
namespace {

struct Worker {
    const std::function<double(double)>& f;
    bool converged = true;
    double err = 0.0;

    // Classic recursion: accept when |S_left + S_right - S_whole| < 15 tol.
    double recurse(double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
        double m = 0.5 * (a + b);
        double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        double flm = f(lm), frm = f(rm);
        double h = b - a;
        double left = h / 12.0 * (fa + 4.0 * flm + fm);
        double right = h / 12.0 * (fm + 4.0 * frm + fb);
        double delta = left + right - whole;
        if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
            if (depth <= 0 && std::abs(delta) > 15.0 * tol) converged = false;
            err += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        return recurse(a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
               recurse(m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
    }
};

}  // namespace

QuadResult adaptive_simpson(const std::function<double(double)>& f,
                            double a, double b, double fa, double fb,
                            double tol, int max_depth) {
    if (a == b) return {0.0, 0.0, true};
    Worker w{f};
    double m = 0.5 * (a + b);
    double fm = f(m);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double v = w.recurse(a, b, fa, fm, fb, whole, tol, max_depth);
    return {v, w.err, w.converged};
}

QuadResult adaptive_simpson(const std::function<double(double)>& f,
                            double a, double b, double tol, int max_depth) {
    return adaptive_simpson(f, a, b, f(a), f(b), tol, max_depth);
}

}  // namespace mechgap
