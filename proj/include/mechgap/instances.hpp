#pragma once

#include <optional>

#include "mechgap/distributions.hpp"
#include "mechgap/tolerance.hpp"

namespace mechgap {

struct GenParams {
    double epsilon = 0.05;
    int n = 1000;
    double t = 1e6;  // equal-revenue truncation

    void validate(bool needs_partition = true) const {
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw std::invalid_argument("GenParams: epsilon must be in (0, 1)");
        if (n < (needs_partition ? 2 : 1))
            throw std::invalid_argument("GenParams: n too small");
        if (!(t > 1.0))
            throw std::invalid_argument("GenParams: t must exceed 1");
    }
};

/// Derived quantities of the partition-based generators, reported alongside
/// the instance for diagnostics.
struct PartitionInfo {
    double a = 0.0;
    double b = 0.0;
    double delta = 0.0;
};

/// Near-worst-case instance of the posted-pricing gap: Tri(inf), then n
/// buyers on the uniform partition of [a, b] with quantiles from the
/// fn_R-recursion, then a deterministic value of 1. Feasible (AP <= 1), with
/// SPM approaching c_star as epsilon -> 0, n -> inf.
Instance gen_spm_ap_worst(const GenParams& params, const ToleranceConfig& cfg = {},
                          PartitionInfo* info = nullptr);

/// n i.i.d. buyers with CDF (1 - 1/p)^(1/n): AP(p) <= 1 everywhere with
/// AR(1) climbing to pi^2/6 as n grows.
Instance gen_ar_ap_iid(int n);

/// 2n-buyer regular instance for the reserve-pricing gap: n buyers at b with
/// fn_V(b)/n budget each, then n buyers descending on [a, b] with quantiles
/// from the fn_V-recursion.
Instance gen_ar_ap_regular(const GenParams& params, PartitionInfo* info = nullptr);

/// The classic two-buyer gap instance: equal-revenue truncated at t plus a
/// deterministic value of 1. AR = AP = 1 while SPM approaches 2.
Instance gen_opt_ar_two(double t);

/// LHS - 1 of the defining equation of the three-buyer instance's smallest
/// monopoly price:
///   v2 + v1/(1 + v1 - v1^2) * ln[(1+v1)/(1+v2) * (v2 (v1^2-1) + v1)/v1^3] = 1.
/// Requires 1 < v1 < (1+sqrt 5)/2 and 0 < v2 < v1.
double three_buyer_v2_residual(double v1, double v2);

struct ThreeBuyerDiagnostics {
    double v1 = 0.0;
    double v2 = 0.0;
    double opt = 0.0;         // 1 + 1/v1 + v2 (1 - 1/v1^2)
    double ar_closed_v2 = 0.0;  // AR(v2) by the closed-form log path
};

/// {Tri(inf), Tri(v1, 1/v1^2), Tri(v2, 1)}. With v1 omitted, maximizes the
/// Myerson revenue over v1 in (1.01, 1.61) by golden section with an inner
/// bisection for v2.
Instance gen_opt_ar_three(std::optional<double> v1, const ToleranceConfig& cfg = {},
                          ThreeBuyerDiagnostics* diag = nullptr);

/// The four-buyer instance, parameters taken verbatim:
/// Tri(inf), Tri(1.8512, 0.2918), Tri(0.9700, 0.6138), Tri(0.7231, 1.0).
Instance gen_opt_ar_four();

/// Max AP revenue over the standard price grid; feasible iff <= 1 + slack.
double verify_feasibility(const Instance& inst, const ToleranceConfig& cfg = {});

}  // namespace mechgap
