#include "mechgap/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mechgap {

namespace {

void check_triangular(const Triangular& d) {
    if (!(d.v > 0.0) || d.v == kPriceInf)
        throw std::invalid_argument("Triangular: monopoly price must be finite and positive");
    if (!(d.q > 0.0 && d.q <= 1.0))
        throw std::invalid_argument("Triangular: monopoly quantile must be in (0, 1]");
}

void check_price(double p) {
    if (!(p >= 0.0)) throw std::domain_error("price must be nonnegative");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

DistributionSpec::DistributionSpec(Triangular d) : v_(d) { check_triangular(d); }
DistributionSpec::DistributionSpec(TriangularLimit d) : v_(d) {}
DistributionSpec::DistributionSpec(EqualRevenueTruncated d) : v_(d) {
    if (!(d.t > 1.0) || d.t == kPriceInf)
        throw std::invalid_argument("EqualRevenueTruncated: truncation must be finite and > 1");
}
DistributionSpec::DistributionSpec(RootIrregular d) : v_(d) {
    if (d.n < 1) throw std::invalid_argument("RootIrregular: n must be >= 1");
}

DistributionSpec tri(double v, double q) { return Triangular{v, q}; }
DistributionSpec tri_inf() { return TriangularLimit{}; }
DistributionSpec equal_revenue(double t) { return EqualRevenueTruncated{t}; }
DistributionSpec root_irregular(int n) { return RootIrregular{n}; }

double cdf(const DistributionSpec& d, double p) {
    check_price(p);
    return std::visit(
        overloaded{
            [&](const Triangular& t) {
                if (p >= t.v) return 1.0;
                double num = (1.0 - t.q) * p;
                return num / (num + t.v * t.q);
            },
            [&](const TriangularLimit&) {
                return p == kPriceInf ? 1.0 : p / (p + 1.0);
            },
            [&](const EqualRevenueTruncated& e) {
                if (p < 1.0) return 0.0;
                if (p >= e.t) return 1.0;
                return 1.0 - 1.0 / p;
            },
            [&](const RootIrregular& r) {
                if (p <= 1.0) return 0.0;
                return std::pow(1.0 - 1.0 / p, 1.0 / r.n);
            }},
        d.value());
}

double cdf_left(const DistributionSpec& d, double p) {
    check_price(p);
    return std::visit(
        overloaded{
            [&](const Triangular& t) {
                if (p > t.v) return 1.0;
                double num = (1.0 - t.q) * p;
                return num / (num + t.v * t.q);  // continuous below the atom
            },
            [&](const TriangularLimit&) {
                return p == kPriceInf ? 1.0 : p / (p + 1.0);
            },
            [&](const EqualRevenueTruncated& e) {
                if (p <= 1.0) return 0.0;
                if (p > e.t) return 1.0;
                return 1.0 - 1.0 / p;
            },
            [&](const RootIrregular& r) {
                if (p <= 1.0) return 0.0;
                return std::pow(1.0 - 1.0 / p, 1.0 / r.n);
            }},
        d.value());
}

double survival(const DistributionSpec& d, double p) {
    check_price(p);
    return std::visit(
        overloaded{
            [&](const Triangular& t) {
                if (p > t.v) return 0.0;
                if (p == t.v) return t.q;
                double num = (1.0 - t.q) * p;
                return t.v * t.q / (num + t.v * t.q);
            },
            [&](const TriangularLimit&) { return 1.0 / (p + 1.0); },
            [&](const EqualRevenueTruncated& e) {
                if (p <= 1.0) return 1.0;
                if (p > e.t) return 0.0;
                return 1.0 / p;  // p = t included: exactly the atom mass
            },
            [&](const RootIrregular& r) {
                if (p <= 1.0) return 1.0;
                return 1.0 - std::pow(1.0 - 1.0 / p, 1.0 / r.n);
            }},
        d.value());
}

double quantile_sample(const DistributionSpec& d, double u) {
    if (!(u >= 0.0 && u < 1.0))
        throw std::domain_error("quantile_sample: u must be in [0, 1)");
    if (u == 0.0) return 0.0;  // cdf(0) >= 0 for every family
    return std::visit(
        overloaded{
            [&](const Triangular& t) {
                if (u >= 1.0 - t.q) return t.v;
                return u * t.v * t.q / ((1.0 - t.q) * (1.0 - u));
            },
            [&](const TriangularLimit&) { return u / (1.0 - u); },
            [&](const EqualRevenueTruncated& e) {
                double p = 1.0 / (1.0 - u);
                return p < e.t ? p : e.t;
            },
            [&](const RootIrregular& r) {
                return 1.0 / (1.0 - std::pow(u, static_cast<double>(r.n)));
            }},
        d.value());
}

double revenue_quantile(const DistributionSpec& d, double q) {
    if (!(q > 0.0 && q <= 1.0))
        throw std::domain_error("revenue_quantile: q must be in (0, 1]");
    return std::visit(
        overloaded{
            [&](const Triangular& t) {
                // tent through (0,0), (q0, v q0), (1, 0)
                if (q <= t.q) return q * t.v;
                return t.v * t.q * (1.0 - q) / (1.0 - t.q);
            },
            [&](const TriangularLimit&) { return 1.0 - q; },
            [&](const EqualRevenueTruncated& e) {
                if (q <= 1.0 / e.t) return q * e.t;
                return 1.0;
            },
            [&](const RootIrregular& r) {
                double base = 1.0 - std::pow(1.0 - q, static_cast<double>(r.n));
                return q / base;
            }},
        d.value());
}

double virtual_value(const DistributionSpec& d, double p) {
    return std::visit(
        overloaded{
            [&](const Triangular& t) {
                if (p == t.v) return t.v;  // atom maps to its own value
                if (t.q == 1.0 || !(p >= 0.0) || p > t.v)
                    throw std::domain_error("virtual_value: price outside support");
                return -t.v * t.q / (1.0 - t.q);
            },
            [&](const TriangularLimit&) {
                if (!(p >= 0.0))
                    throw std::domain_error("virtual_value: price outside support");
                return -1.0;  // p - (1 - F)/f with F = p/(p+1)
            },
            [&](const EqualRevenueTruncated& e) {
                if (p == e.t) return e.t;
                if (!(p >= 1.0) || p > e.t)
                    throw std::domain_error("virtual_value: price outside support");
                return 0.0;
            },
            [&](const RootIrregular& r) {
                if (!(p >= 1.0))
                    throw std::domain_error("virtual_value: price outside support");
                if (p == 1.0) return r.n == 1 ? 0.0 : 1.0;  // limit from above
                double s = 1.0 - 1.0 / p;
                double root = std::pow(s, 1.0 / r.n);
                // p - (1 - F)/f with f = root / (n p^2 s)
                return p - (1.0 - root) * r.n * p * p * s / root;
            }},
        d.value());
}

bool is_regular_numeric(const DistributionSpec& d, int grid_size) {
    if (grid_size < 3)
        throw std::invalid_argument("is_regular_numeric: grid_size must be >= 3");
    constexpr double tol = 1e-9;
    std::vector<double> grid(grid_size);
    std::vector<double> rq(grid_size);
    for (int i = 0; i < grid_size; ++i) {
        grid[i] = (i + 1.0) / (grid_size + 1.0);  // interior of (0, 1)
        rq[i] = revenue_quantile(d, grid[i]);
    }
    for (int i = 0; i < grid_size; ++i) {
        for (int j = i + 1; j < grid_size; ++j) {
            double mid = revenue_quantile(d, 0.5 * (grid[i] + grid[j]));
            if (mid < 0.5 * (rq[i] + rq[j]) - tol) return false;
        }
    }
    return true;
}

double support_top(const DistributionSpec& d) {
    return std::visit(
        overloaded{[](const Triangular& t) { return t.v; },
                   [](const TriangularLimit&) { return kPriceInf; },
                   [](const EqualRevenueTruncated& e) { return e.t; },
                   [](const RootIrregular&) { return kPriceInf; }},
        d.value());
}

bool is_unbounded(const DistributionSpec& d) {
    return support_top(d) == kPriceInf;
}

double tail_coefficient(const DistributionSpec& d) {
    return std::visit(
        overloaded{[](const Triangular&) { return 0.0; },
                   [](const TriangularLimit&) { return 1.0; },
                   [](const EqualRevenueTruncated&) { return 0.0; },
                   [](const RootIrregular& r) { return 1.0 / r.n; }},
        d.value());
}

std::vector<double> breakpoints(const DistributionSpec& d) {
    return std::visit(
        overloaded{
            [](const Triangular& t) { return std::vector<double>{t.v}; },
            [](const TriangularLimit&) { return std::vector<double>{}; },
            [](const EqualRevenueTruncated& e) { return std::vector<double>{1.0, e.t}; },
            [](const RootIrregular&) { return std::vector<double>{1.0}; }},
        d.value());
}

std::vector<double> monopoly_candidates(const DistributionSpec& d) {
    return breakpoints(d);
}

void Instance::validate() const {
    if (buyers.empty()) throw std::invalid_argument("Instance: needs at least one buyer");
}

std::optional<TriangularView> triangular_view(const Instance& inst) {
    TriangularView view;
    for (std::size_t i = 0; i < inst.buyers.size(); ++i) {
        const auto& var = inst.buyers[i].value();
        if (const auto* t = std::get_if<Triangular>(&var)) {
            view.finite.push_back({t->v, t->q, i});
        } else if (std::holds_alternative<TriangularLimit>(var)) {
            view.limit_indices.push_back(i);
        } else {
            return std::nullopt;
        }
    }
    std::stable_sort(view.finite.begin(), view.finite.end(),
                     [](const TriBuyer& a, const TriBuyer& b) { return a.v > b.v; });
    return view;
}

}  // namespace mechgap
