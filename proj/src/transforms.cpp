#include "mechgap/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "mechgap/special_functions.hpp"

namespace mechgap {

namespace {

TriangularView require_view(const Instance& inst, const char* who) {
    auto view = triangular_view(inst);
    if (!view) throw UnsupportedError(std::string(who) + ": instance is not triangular");
    return *view;
}

Instance from_view(const TriangularView& view) {
    Instance out;
    for (std::size_t i = 0; i < view.limit_indices.size(); ++i)
        out.buyers.push_back(tri_inf());
    for (const auto& b : view.finite) out.buyers.push_back(tri(b.v, b.q));
    return out;
}

double log_budget(double v, double q) { return std::log1p(v * q / (1.0 - q)); }

}  // namespace

Instance to_triangular(const Instance& inst, const SpmPolicy& policy) {
    inst.validate();
    policy.validate(inst);
    Instance out;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        double price = policy.prices[i];
        double s = price == kPriceInf ? 0.0 : survival(inst.buyers[i], price);
        if (s <= 0.0) {
            std::cerr << "to_triangular: buyer " << i
                      << " never accepts its price; dropped\n";
            continue;
        }
        if (!(price > 0.0))
            throw std::invalid_argument(
                "to_triangular: price must be positive where acceptance is possible");
        out.buyers.push_back(tri(price, s));
    }
    if (out.buyers.empty())
        throw std::invalid_argument("to_triangular: all buyers degenerate");
    return out;
}

Instance merge_duplicates(const Instance& inst) {
    auto view = require_view(inst, "merge_duplicates");
    TriangularView merged;
    merged.limit_indices = view.limit_indices;
    for (const auto& b : view.finite) {
        if (!merged.finite.empty() && merged.finite.back().v == b.v) {
            double qa = merged.finite.back().q;
            merged.finite.back().q = qa + b.q - qa * b.q;
        } else {
            merged.finite.push_back(b);
        }
    }
    return from_view(merged);
}

Instance ensure_tri_infinity(const Instance& inst, const ToleranceConfig& cfg) {
    (void)cfg;
    auto view = require_view(inst, "ensure_tri_infinity");
    if (!view.limit_indices.empty()) return from_view(view);  // idempotent

    double sum = 0.0;
    std::size_t k = view.finite.size();
    for (std::size_t i = 0; i < view.finite.size(); ++i) {
        sum += view.finite[i].v * view.finite[i].q;
        if (sum > 1.0) {
            k = i;
            break;
        }
    }
    if (k == view.finite.size())
        throw std::invalid_argument(
            "ensure_tri_infinity: requires sum of v_i q_i to exceed 1");

    Instance out;
    out.buyers.push_back(tri_inf());
    double vk = view.finite[k].v;
    out.buyers.push_back(tri(vk, (sum - 1.0) / vk));
    for (std::size_t i = k + 1; i < view.finite.size(); ++i)
        out.buyers.push_back(tri(view.finite[i].v, view.finite[i].q));
    return out;
}

Instance tighten_budgets(const Instance& inst, const ToleranceConfig& cfg) {
    auto view = require_view(inst, "tighten_budgets");
    for (std::size_t i = 0; i + 1 < view.finite.size(); ++i)
        if (view.finite[i].v == view.finite[i + 1].v && view.finite[i].v > 1.0)
            throw std::invalid_argument("tighten_budgets: monopoly prices must be distinct");

    // Buyers at or below price 1 sit outside the constraint system (the
    // budget bound diverges there) and pass through unchanged, matching the
    // convention that the deterministic value-1 buyer is unconstrained.
    TriangularView out = view;
    double prefix = 0.0;
    for (std::size_t i = 0; i < view.finite.size(); ++i) {
        if (view.finite[i].v <= 1.0) continue;
        if (view.finite[i].q >= 1.0)
            throw std::invalid_argument(
                "tighten_budgets: deterministic buyer above price 1 is infeasible");
        // The buyer's own budget ln(1 + vq/(1-q)) is invariant under the
        // move, so tight prefixes pin the new v_k directly.
        double delta = log_budget(view.finite[i].v, view.finite[i].q);
        prefix += delta;
        if (prefix > fn_R(view.finite[i].v) + cfg.root_tol)
            throw std::invalid_argument("tighten_budgets: constraint already violated");
        double v_new = fn_R_inv(prefix, cfg);
        double growth = std::expm1(delta);
        out.finite[i].v = v_new;
        out.finite[i].q = growth / (v_new + growth);
    }
    return from_view(out);
}

ConstraintReport budget_slacks(const Instance& inst, const ToleranceConfig& cfg) {
    auto view = require_view(inst, "budget_slacks");
    ConstraintReport rep;
    double prefix = 0.0;
    for (const auto& b : view.finite) {
        double slack;
        if (b.v <= 1.0) {
            slack = kPriceInf;  // budget bound diverges at 1: vacuous
        } else {
            prefix += b.q < 1.0 ? log_budget(b.v, b.q) : kPriceInf;
            slack = fn_R(b.v) - prefix;
        }
        rep.slacks.push_back(slack);
        rep.tight_mask.push_back(std::abs(slack) <= cfg.root_tol);
    }
    return rep;
}

double price_constraint_excess(const Instance& inst, int grid_points, const ToleranceConfig& cfg) {
    (void)cfg;
    auto view = require_view(inst, "price_constraint_excess");
    if (grid_points < 2)
        throw std::invalid_argument("price_constraint_excess: need at least two grid points");
    if (view.finite.empty()) return -kPriceInf;

    double v_max = view.finite.front().v;
    double worst = -kPriceInf;
    for (int g = 1; g <= grid_points; ++g) {
        // Grid over (1, v_max]; the constraint is vacuous above v_max.
        double p = 1.0 + (v_max - 1.0) * static_cast<double>(g) / grid_points;
        double lhs = 0.0;
        for (const auto& b : view.finite) {
            if (b.v < p) break;  // sorted descending
            lhs += std::log1p(b.v * b.q / ((1.0 - b.q) * p));
        }
        double rhs = -std::log1p(-1.0 / (p * p));
        worst = std::max(worst, lhs - rhs);
    }
    return worst;
}

}  // namespace mechgap
