#pragma once

#include "mechgap/tolerance.hpp"

namespace mechgap {

// Analytic machinery behind the revenue-gap constants. The two posted-pricing
// functions are
//
//   fn_R(p) = -p * ln(1 - p^-2)
//   fn_Q(p) = -ln(1 - p^-2) - Li2(p^-2) / 2
//
// both strictly decreasing on (1, inf), diverging at 1+ and vanishing at
// infinity, and linked by R'(p) = p * Q'(p). The reserve-pricing counterpart
// is fn_V(p) = p * ln(p / (p - 1)). psi1/psi2 are the feasible envelopes of
// the highest and second-highest value CDFs.

inline constexpr double kPi = 3.14159265358979323846;

/// Dilogarithm Li2(z) for z in [0, 1]; direct series below 1/2, reflection
/// identity above so convergence stays fast near z = 1.
double dilog(double z, double series_tol = 1e-12);

/// Raw series sum_{k>=1} z^k / k^2, exposed for cross-checking the
/// reflection path. Slow near z = 1.
double dilog_series(double z, double series_tol = 1e-12);

double fn_R(double p);                                   // +inf allowed, maps to 0
double fn_Q(double p, const ToleranceConfig& cfg = {});  // +inf allowed, maps to 0
double fn_V(double p);

double fn_R_inv(double y, const ToleranceConfig& cfg = {});
double fn_Q_inv(double y, const ToleranceConfig& cfg = {});

double psi1(double p);
double psi2(double p);

/// exp(-fn_Q(p)); the CDF of the spectral virtual welfare, finite at p = inf.
double exp_neg_Q(double p, const ToleranceConfig& cfg = {});

/// Tail integral int_a^inf (1 - exp(-Q(x))) dx, a >= 1, computed under the
/// substitution z = 1/x with analytic endpoint limits.
double q_tail_integral(double a, const ToleranceConfig& cfg = {});

/// int_a^b (x - 1) * (-Q'(x)) * exp(-Q(x)) dx for 1 <= a <= b <= +inf,
/// via integration by parts (no Q' evaluation).
double q_segment_integral(double a, double b, const ToleranceConfig& cfg = {});

/// The SPM-vs-AP gap constant: 2 + int_1^inf (1 - exp(-Q(x))) dx ~ 2.6202.
double c_star(const ToleranceConfig& cfg = {});

/// Same constant from the un-substituted integral truncated at upper_limit;
/// kept as an independent cross-check of c_star.
double c_star_direct(double upper_limit, const ToleranceConfig& cfg = {});

/// The AR-vs-AP gap constant 1 + int_1^inf (1 - psi2(x)) dx = pi^2/6.
double ar_upper_constant(const ToleranceConfig& cfg = {});

/// Series oracle 1 + sum_{k=1..terms} 1/(k^2 (k+1)) for the same constant.
double ar_upper_constant_series(long terms);

/// G(x,y) = (1 - 1/x)(e^{R(x)-R(y)} - 1) + (R(y) - R(x)) - (Q(y) - Q(x));
/// nonpositive for y >= x > 1.
double fact_G(double x, double y, const ToleranceConfig& cfg = {});

/// H(x,y) = (1/x)(e^{R(x)-R(y)} - 1) - (e^{Q(x)-Q(y)} - 1);
/// nonnegative for y >= x > 1.
double fact_H(double x, double y, const ToleranceConfig& cfg = {});

}  // namespace mechgap
