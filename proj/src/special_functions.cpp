#include "mechgap/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mechgap/quadrature.hpp"
#include "mechgap/rootfind.hpp"

namespace mechgap {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double dilog_series(double z, double series_tol) {
    if (z < 0.0 || z > 1.0)
        throw std::domain_error("dilog_series: z outside [0, 1]");
    double sum = 0.0, power = z;
    for (long k = 1; k < 100000000L; ++k) {
        double term = power / (static_cast<double>(k) * k);
        sum += term;
        if (term < series_tol) return sum;
        power *= z;
    }
    throw ConvergenceError("dilog_series: did not converge");
}

double dilog(double z, double series_tol) {
    if (z < 0.0 || z > 1.0)
        throw std::domain_error("dilog: z outside [0, 1]");
    if (z == 1.0) return kPi * kPi / 6.0;
    if (z <= 0.5) return dilog_series(z, series_tol);
    // Li2(z) = pi^2/6 - ln z ln(1-z) - Li2(1-z)
    return kPi * kPi / 6.0 - std::log(z) * std::log1p(-z) -
           dilog_series(1.0 - z, series_tol);
}

double fn_R(double p) {
    if (p == kInf) return 0.0;
    if (!(p > 1.0)) throw std::domain_error("fn_R: requires p > 1");
    return -p * std::log1p(-1.0 / (p * p));
}

double fn_Q(double p, const ToleranceConfig& cfg) {
    if (p == kInf) return 0.0;
    if (!(p > 1.0)) throw std::domain_error("fn_Q: requires p > 1");
    double z = 1.0 / (p * p);
    return -std::log1p(-z) - 0.5 * dilog(z, cfg.series_tol);
}

double fn_V(double p) {
    if (!(p > 1.0)) throw std::domain_error("fn_V: requires p > 1");
    return -p * std::log1p(-1.0 / p);
}

namespace {

double invert(double y, const ToleranceConfig& cfg,
              const std::function<double(double)>& f) {
    if (y < 0.0) throw std::domain_error("inverse: requires y >= 0");
    if (y == 0.0) return kInf;
    return invert_decreasing(f, y, 2.0, cfg.root_tol, cfg.max_iter);
}

}  // namespace

double fn_R_inv(double y, const ToleranceConfig& cfg) {
    return invert(y, cfg, [](double p) { return fn_R(p); });
}

double fn_Q_inv(double y, const ToleranceConfig& cfg) {
    return invert(y, cfg, [&](double p) { return fn_Q(p, cfg); });
}

double psi1(double p) {
    if (p < 0.0) throw std::domain_error("psi1: requires p >= 0");
    return p <= 1.0 ? 0.0 : 1.0 - 1.0 / p;
}

double psi2(double p) {
    if (p < 0.0) throw std::domain_error("psi2: requires p >= 0");
    if (p <= 1.0) return 0.0;
    double s = 1.0 - 1.0 / p;
    return s * (1.0 - std::log(s));
}

double exp_neg_Q(double p, const ToleranceConfig& cfg) {
    return std::exp(-fn_Q(p, cfg));
}

namespace {

// Integrand of the substituted tail: (1 - exp(-Q(1/z))) / z^2
//   = exp(w) - expm1(w) / z^2   with w = Li2(z^2) / 2,
// finite on [0, 1] with limits 1/2 at z = 0 and 1 at z = 1.
double tail_integrand(double z, double series_tol) {
    if (z == 0.0) return 0.5;
    if (z >= 1.0) return 1.0;
    double w = 0.5 * dilog(z * z, series_tol);
    return std::exp(w) - std::expm1(w) / (z * z);
}

}  // namespace

double q_tail_integral(double a, const ToleranceConfig& cfg) {
    if (!(a >= 1.0)) throw std::domain_error("q_tail_integral: requires a >= 1");
    if (a == kInf) return 0.0;
    double hi = 1.0 / a;
    auto f = [&](double z) { return tail_integrand(z, cfg.series_tol); };
    auto r = adaptive_simpson(f, 0.0, hi, 0.5, tail_integrand(hi, cfg.series_tol),
                              cfg.quad_tol);
    if (!r.converged) throw ConvergenceError("q_tail_integral: quadrature failed");
    return r.value;
}

double q_segment_integral(double a, double b, const ToleranceConfig& cfg) {
    if (!(a >= 1.0) || b < a)
        throw std::domain_error("q_segment_integral: requires 1 <= a <= b");
    if (a == b) return 0.0;
    // By parts: int (x-1) d(e^-Q) = [(x-1) e^-Q] - int e^-Q dx, rewritten so
    // the b = inf case stays finite. The boundary terms vanish at a = 1.
    double head = a > 1.0 ? -(a - 1.0) * std::expm1(-fn_Q(a, cfg)) : 0.0;
    if (b == kInf) return head + q_tail_integral(a, cfg);
    double fa = a > 1.0 ? 1.0 - exp_neg_Q(a, cfg) : 1.0;
    auto f = [&](double x) { return 1.0 - exp_neg_Q(x, cfg); };
    auto r = adaptive_simpson(f, a, b, fa, f(b), cfg.quad_tol);
    if (!r.converged) throw ConvergenceError("q_segment_integral: quadrature failed");
    return head + (b - 1.0) * std::expm1(-fn_Q(b, cfg)) + r.value;
}

double c_star(const ToleranceConfig& cfg) {
    return 2.0 + q_tail_integral(1.0, cfg);
}

double c_star_direct(double upper_limit, const ToleranceConfig& cfg) {
    if (!(upper_limit > 1.0))
        throw std::domain_error("c_star_direct: requires upper_limit > 1");
    auto f = [&](double x) { return 1.0 - exp_neg_Q(x, cfg); };
    // f -> 1 as x -> 1+; supply the limit and split at 2 where curvature peaks.
    auto left = adaptive_simpson(f, 1.0, 2.0, 1.0, f(2.0), cfg.quad_tol / 2.0);
    auto right = adaptive_simpson(f, 2.0, upper_limit, cfg.quad_tol / 2.0);
    if (!left.converged || !right.converged)
        throw ConvergenceError("c_star_direct: quadrature failed");
    return 2.0 + left.value + right.value;
}

namespace {

// (1 - psi2(1/z)) / z^2 = (z + (1-z) ln(1-z)) / z^2; series fallback keeps
// the z -> 0 cancellation harmless.
double psi2_tail_integrand(double z) {
    if (z <= 0.0) return 0.5;
    if (z >= 1.0) return 1.0;
    if (z < 0.25) {
        double sum = 0.0, power = 1.0;
        for (int m = 0;; ++m) {
            double term = power / ((m + 1.0) * (m + 2.0));
            sum += term;
            if (term < 1e-17) return sum;
            power *= z;
        }
    }
    return (z + (1.0 - z) * std::log1p(-z)) / (z * z);
}

}  // namespace

double ar_upper_constant(const ToleranceConfig& cfg) {
    auto r = adaptive_simpson(psi2_tail_integrand, 0.0, 1.0, 0.5, 1.0,
                              cfg.quad_tol);
    if (!r.converged) throw ConvergenceError("ar_upper_constant: quadrature failed");
    return 1.0 + r.value;
}

double ar_upper_constant_series(long terms) {
    // Summed smallest-first so the tail is not absorbed into rounding.
    double sum = 0.0;
    for (long k = terms; k >= 1; --k) {
        double kd = static_cast<double>(k);
        sum += 1.0 / (kd * kd * (kd + 1.0));
    }
    return 1.0 + sum;
}

double fact_G(double x, double y, const ToleranceConfig& cfg) {
    if (!(x > 1.0) || y < x) throw std::domain_error("fact_G: requires y >= x > 1");
    return (1.0 - 1.0 / x) * std::expm1(fn_R(x) - fn_R(y)) +
           (fn_R(y) - fn_R(x)) - (fn_Q(y, cfg) - fn_Q(x, cfg));
}

double fact_H(double x, double y, const ToleranceConfig& cfg) {
    if (!(x > 1.0) || y < x) throw std::domain_error("fact_H: requires y >= x > 1");
    return std::expm1(fn_R(x) - fn_R(y)) / x -
           std::expm1(fn_Q(x, cfg) - fn_Q(y, cfg));
}

}  // namespace mechgap
