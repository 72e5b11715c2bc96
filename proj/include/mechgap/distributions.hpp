#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

namespace mechgap {

inline constexpr double kPriceInf = std::numeric_limits<double>::infinity();

// Value-distribution families. Tri(v, q) has CDF (1-q)p / ((1-q)p + vq) below
// its monopoly price v and an atom of mass q at v; q = 1 is a deterministic
// value. Tri(inf) is the limit distribution with CDF p / (p + 1).

struct Triangular {
    double v;  // monopoly price, > 0
    double q;  // monopoly quantile, in (0, 1]
    bool operator==(const Triangular&) const = default;
};

struct TriangularLimit {
    bool operator==(const TriangularLimit&) const = default;
};

struct EqualRevenueTruncated {
    double t;  // truncation point, > 1; CDF 1 - 1/p on [1, t), atom 1/t at t
    bool operator==(const EqualRevenueTruncated&) const = default;
};

struct RootIrregular {
    int n;  // CDF (1 - 1/p)^(1/n) above 1; irregular for n >= 2
    bool operator==(const RootIrregular&) const = default;
};

class DistributionSpec {
public:
    using Variant =
        std::variant<Triangular, TriangularLimit, EqualRevenueTruncated, RootIrregular>;

    DistributionSpec(Triangular d);              // NOLINT(google-explicit-constructor)
    DistributionSpec(TriangularLimit d);         // NOLINT
    DistributionSpec(EqualRevenueTruncated d);   // NOLINT
    DistributionSpec(RootIrregular d);           // NOLINT

    const Variant& value() const { return v_; }

    bool operator==(const DistributionSpec&) const = default;

private:
    Variant v_;
};

DistributionSpec tri(double v, double q);
DistributionSpec tri_inf();
DistributionSpec equal_revenue(double t);
DistributionSpec root_irregular(int n);

/// Right-continuous CDF Pr(value <= p); total on p >= 0.
double cdf(const DistributionSpec& d, double p);

/// Left limit of the CDF, Pr(value < p). At atoms this excludes the atom mass.
double cdf_left(const DistributionSpec& d, double p);

/// Pr(value >= p) = 1 - cdf_left(p). A buyer facing a price equal to their
/// value accepts: survival at the monopoly price of Tri(v, q) is q.
double survival(const DistributionSpec& d, double p);

/// Generalized inverse inf{ p : cdf(p) >= u } for u in [0, 1).
double quantile_sample(const DistributionSpec& d, double u);

/// Revenue-quantile curve r(q) = q * F^{-1}(1 - q), q in (0, 1].
double revenue_quantile(const DistributionSpec& d, double q);

/// Myerson virtual value; atoms map to their own value. Domain error outside
/// the support.
double virtual_value(const DistributionSpec& d, double p);

/// Midpoint-concavity scan of the revenue-quantile curve over all pairs of an
/// interior grid; tolerance 1e-9 absorbs kinks of the piecewise-linear tents.
bool is_regular_numeric(const DistributionSpec& d, int grid_size);

/// Top of the support; +inf for unbounded families.
double support_top(const DistributionSpec& d);

bool is_unbounded(const DistributionSpec& d);

/// Coefficient a in 1 - F(p) ~ a / p as p -> inf (0 for bounded support);
/// drives the analytic endpoint of tail quadratures.
double tail_coefficient(const DistributionSpec& d);

/// Prices where the CDF has an atom or a kink; quadrature split points.
std::vector<double> breakpoints(const DistributionSpec& d);

/// Candidate optimal posted prices: atoms and support edges.
std::vector<double> monopoly_candidates(const DistributionSpec& d);

struct Instance {
    std::vector<DistributionSpec> buyers;

    bool operator==(const Instance&) const = default;
    std::size_t size() const { return buyers.size(); }

    void validate() const;  // throws on empty
};

/// One buyer of the triangular view: finite ones carry (v, q), the Tri(inf)
/// buyers are counted separately.
struct TriBuyer {
    double v;
    double q;
    std::size_t index;  // position in Instance::buyers
};

/// Sorted view of an all-triangular instance: limit buyers first, then finite
/// buyers by monopoly price descending.
struct TriangularView {
    std::vector<std::size_t> limit_indices;
    std::vector<TriBuyer> finite;  // v descending
};

/// Present iff every buyer is Triangular or TriangularLimit.
std::optional<TriangularView> triangular_view(const Instance& inst);

}  // namespace mechgap
