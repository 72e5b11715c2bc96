#include "mechgap/instances.hpp"

#include <cmath>

#include "mechgap/mechanisms.hpp"
#include "mechgap/rootfind.hpp"
#include "mechgap/special_functions.hpp"

namespace mechgap {

Instance gen_spm_ap_worst(const GenParams& params, const ToleranceConfig& cfg,
                          PartitionInfo* info) {
    params.validate();
    double a = std::min(1.0 + params.epsilon,
                        fn_Q_inv(std::log(1.0 / params.epsilon), cfg));
    double b = 1.0 + 1.0 / params.epsilon;
    double delta = (b - a) / (params.n - 1);
    if (info) *info = {a, b, delta};

    Instance out;
    out.buyers.push_back(tri_inf());
    double prev_R = 0.0;  // fn_R at the previous (larger) price, starting at inf
    for (int i = 1; i <= params.n; ++i) {
        double v = i == params.n ? a : b - (i - 1) * delta;
        double dR = fn_R(v) - prev_R;
        prev_R += dR;
        out.buyers.push_back(tri(v, dR / (v + dR)));
    }
    out.buyers.push_back(tri(1.0, 1.0));
    return out;
}

Instance gen_ar_ap_iid(int n) {
    if (n < 1) throw std::invalid_argument("gen_ar_ap_iid: n must be >= 1");
    Instance out;
    for (int i = 0; i < n; ++i) out.buyers.push_back(root_irregular(n));
    return out;
}

Instance gen_ar_ap_regular(const GenParams& params, PartitionInfo* info) {
    params.validate();
    double a = 1.0 + params.epsilon;
    double b = 1.0 + 1.0 / params.epsilon;
    double delta = (b - a) / params.n;
    if (info) *info = {a, b, delta};

    Instance out;
    double share = fn_V(b) / params.n;
    for (int i = 0; i < params.n; ++i)
        out.buyers.push_back(tri(b, share / (b + share)));
    double prev_V = fn_V(b);
    for (int i = 1; i <= params.n; ++i) {
        double v = i == params.n ? a : b - i * delta;
        double dV = fn_V(v) - prev_V;
        prev_V += dV;
        out.buyers.push_back(tri(v, dV / (v + dV)));
    }
    return out;
}

Instance gen_opt_ar_two(double t) {
    Instance out;
    out.buyers.push_back(equal_revenue(t));
    out.buyers.push_back(tri(1.0, 1.0));
    return out;
}

namespace {
constexpr double kGoldenRatio = 1.618033988749895;  // prefactor pole of v1
}

double three_buyer_v2_residual(double v1, double v2) {
    if (!(v1 > 1.0) || v1 >= kGoldenRatio)
        throw std::domain_error("three_buyer_v2_residual: v1 must be in (1, (1+sqrt5)/2)");
    if (!(v2 > 0.0) || v2 >= v1)
        throw std::domain_error("three_buyer_v2_residual: v2 must be in (0, v1)");
    double pref = v1 / (1.0 + v1 - v1 * v1);
    double arg = (1.0 + v1) / (1.0 + v2) * (v2 * (v1 * v1 - 1.0) + v1) / (v1 * v1 * v1);
    return v2 + pref * std::log(arg) - 1.0;
}

namespace {

double solve_v2(double v1, const ToleranceConfig& cfg) {
    double lo = 1e-6, hi = v1 - 1e-6;
    auto f = [&](double v2) { return three_buyer_v2_residual(v1, v2); };
    if ((f(lo) < 0) == (f(hi) < 0))
        throw ConvergenceError("gen_opt_ar_three: no sign change for v2");
    return bisect_root(f, lo, hi, cfg.root_tol, cfg.max_iter);
}

double three_buyer_opt(double v1, const ToleranceConfig& cfg) {
    return 1.0 + 1.0 / v1 + solve_v2(v1, cfg) * (1.0 - 1.0 / (v1 * v1));
}

}  // namespace

Instance gen_opt_ar_three(std::optional<double> v1_opt, const ToleranceConfig& cfg,
                          ThreeBuyerDiagnostics* diag) {
    double v1;
    if (v1_opt) {
        v1 = *v1_opt;
        if (!(v1 > 1.0) || v1 > 1.61)
            throw std::invalid_argument("gen_opt_ar_three: v1 must be in (1, 1.61]");
    } else {
        v1 = golden_section_max(
            [&](double x) { return three_buyer_opt(x, cfg); }, 1.01, 1.61,
            cfg.root_tol, cfg.max_iter);
    }
    double v2 = solve_v2(v1, cfg);
    double q1 = 1.0 / (v1 * v1);

    if (diag) {
        diag->v1 = v1;
        diag->v2 = v2;
        diag->opt = 1.0 + 1.0 / v1 + v2 * (1.0 - q1);
        // AR(v2) = v2 + v1/(1+v1-v1^2) * [ln((x+1)/((v1^2-1)x + v1))]_{v2}^{v1}
        auto term = [&](double x) {
            return std::log((x + 1.0) / ((v1 * v1 - 1.0) * x + v1));
        };
        diag->ar_closed_v2 =
            v2 + v1 / (1.0 + v1 - v1 * v1) * (term(v1) - term(v2));
    }

    Instance out;
    out.buyers.push_back(tri_inf());
    out.buyers.push_back(tri(v1, q1));
    out.buyers.push_back(tri(v2, 1.0));
    return out;
}

Instance gen_opt_ar_four() {
    Instance out;
    out.buyers.push_back(tri_inf());
    out.buyers.push_back(tri(1.8512, 0.2918));
    out.buyers.push_back(tri(0.9700, 0.6138));
    out.buyers.push_back(tri(0.7231, 1.0));
    return out;
}

double verify_feasibility(const Instance& inst, const ToleranceConfig& cfg) {
    double worst = 0.0;
    for (double p : standard_price_grid(inst, cfg))
        worst = std::max(worst, ap_revenue(inst, p));
    return worst;
}

}  // namespace mechgap
