#pragma once

#include <vector>

#include "mechgap/distributions.hpp"
#include "mechgap/mechanisms.hpp"
#include "mechgap/tolerance.hpp"

namespace mechgap {

// Instance reductions used to shape worst-case candidates. All transforms
// return fresh instances; inputs are never mutated, so before/after revenue
// relations can be tested directly.

/// Per-buyer slack of the cumulative-budget constraint
///   sum_{i<=k} ln(1 + v_i q_i / (1 - q_i)) <= fn_R(v_k)
/// over the finite triangular buyers, sorted by monopoly price descending.
/// Tri(inf) buyers are excluded: their factor is already folded into the
/// right-hand side.
struct ConstraintReport {
    std::vector<double> slacks;    // fn_R(v_k) - prefix sum
    std::vector<bool> tight_mask;  // |slack| <= root_tol
};

/// Replace each buyer by the triangular distribution matching its acceptance
/// behaviour under the given policy: v_i = price_i, q_i = survival at the
/// price. SPM revenue under the same policy is preserved exactly; AP does not
/// increase anywhere. Buyers with zero acceptance probability are dropped.
Instance to_triangular(const Instance& inst, const SpmPolicy& policy);

/// Collapse equal-monopoly-price triangular buyers pairwise via
/// q = q_a + q_b - q_a q_b. SPM preserved exactly, AP non-increasing.
Instance merge_duplicates(const Instance& inst);

/// Prepend Tri(inf) and cut the prefix of buyers whose cumulative v_i q_i
/// first exceeds 1, replacing buyer k by Tri(v_k, (sum_{i<=k} v_i q_i - 1)/v_k).
/// Requires sum v_i q_i > 1. Output keeps AP <= 1 on the standard grid.
/// A leading Tri(inf) makes this a no-op.
Instance ensure_tri_infinity(const Instance& inst, const ToleranceConfig& cfg = {});

/// Tighten every cumulative-budget constraint to equality, processing loose
/// indices smallest-first: v_k moves to fn_R_inv(prefix of preserved
/// per-buyer budgets), q_k keeps v q / (1 - q) fixed. SPM never decreases.
Instance tighten_budgets(const Instance& inst, const ToleranceConfig& cfg = {});

ConstraintReport budget_slacks(const Instance& inst, const ToleranceConfig& cfg = {});

/// Max over the grid of LHS - RHS of the per-price feasibility constraint
///   sum_{i: v_i >= p} ln(1 + v_i q_i / ((1 - q_i) p)) <= -ln(1 - p^-2),
/// grid spanning (1, max v].
double price_constraint_excess(const Instance& inst, int grid_points,
                 const ToleranceConfig& cfg = {});

}  // namespace mechgap
