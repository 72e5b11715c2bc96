#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mechgap/distributions.hpp"
#include "mechgap/tolerance.hpp"

namespace mechgap {

/// Requested computation is not defined for the given instance
/// (e.g. Myerson on an irregular buyer, closed-form SPM on a
/// non-triangular instance).
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A sequential posted-pricing mechanism: visit buyers in `order` and offer
/// buyer i the price prices[i]. Prices are extended reals; +inf means the
/// buyer is effectively skipped.
struct SpmPolicy {
    std::vector<std::size_t> order;  // permutation of buyer indices, visit order
    std::vector<double> prices;      // indexed by buyer, not by visit position

    void validate(const Instance& inst) const;
};

struct RevenueReport {
    std::string mechanism;           // AP | SPM | AR | OPT
    double revenue = 0.0;
    std::optional<double> price;     // optimizing posted/reserve price
    std::optional<SpmPolicy> policy; // optimizing policy, for SPM/OPT
    double numeric_error = 0.0;
    std::string method;              // closed_form | quadrature | grid_search | monte_carlo
};

struct MonteCarloConfig {
    std::uint64_t num_samples = 100000;
    std::uint64_t seed = 0;

    void validate() const {
        if (num_samples < 1)
            throw std::invalid_argument("MonteCarloConfig: num_samples must be >= 1");
    }
};

// ---- anonymous pricing ----

/// p * Pr(max value >= p); a buyer whose value equals the price buys.
double ap_revenue(const Instance& inst, double p);

/// Shared price grid: linear sweep of [0, max finite support] at
/// grid_resolution points per unit (capped), atom/kink candidates, and a
/// 1/z-spaced tail when an unbounded buyer is present.
std::vector<double> standard_price_grid(const Instance& inst,
                                        const ToleranceConfig& cfg = {});

RevenueReport ap_optimal(const Instance& inst, const ToleranceConfig& cfg = {});

// ---- order statistics ----

/// CDF of the highest value, prod_i F_i(p).
double d1(const Instance& inst, double p);

/// CDF of the second-highest value, via the disjoint sub-event sum; exact
/// even where some F_i(p) = 0.
double d2(const Instance& inst, double p);

// ---- anonymous reserve ----

/// AR(p) = p * Pr(max >= p) + int_p^inf (1 - D2(x)) dx; quadrature is split
/// at every atom/kink, with the unbounded tail handled under z = 1/x.
double ar_revenue(const Instance& inst, double p, const ToleranceConfig& cfg = {});

RevenueReport ar_optimal(const Instance& inst, const ToleranceConfig& cfg = {});

// ---- sequential posted-pricing ----

/// Exact expected revenue of the given policy.
double spm_revenue(const Instance& inst, const SpmPolicy& policy);

/// Optimal SPM (= Myerson revenue) for an all-triangular instance:
/// sum_i v_i q_i prod_{j<i} (1 - q_j) over buyers sorted by monopoly price
/// descending; each Tri(inf) buyer contributes its limit unit.
RevenueReport spm_opt_triangular(const Instance& inst);

// ---- Monte Carlo ----

/// Myerson revenue estimate E[(max_i virtual_value_i)+]. Tri(inf) buyers
/// enter through their limiting unit contribution. Rejects RootIrregular
/// buyers with n >= 2 (no ironing).
RevenueReport myerson_mc(const Instance& inst, const MonteCarloConfig& mc);

struct ApAt {
    double price;
};
struct ArAt {
    double reserve;
};
struct SpmWith {
    SpmPolicy policy;
};
using MechanismChoice = std::variant<ApAt, ArAt, SpmWith>;

/// Simulates the allocation/payment rule exactly. AR: the highest bidder
/// meeting the reserve wins and pays max(second-highest value, reserve);
/// ties go to the lowest index.
RevenueReport mechanism_mc(const Instance& inst, const MechanismChoice& mech,
                           const MonteCarloConfig& mc);

}  // namespace mechgap
