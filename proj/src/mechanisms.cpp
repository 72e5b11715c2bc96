#include "mechgap/mechanisms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>

#include "mechgap/quadrature.hpp"
#include "mechgap/rng.hpp"
#include "mechgap/rootfind.hpp"

namespace mechgap {

namespace {

constexpr double kInf = kPriceInf;

int thread_budget() {
    if (const char* env = std::getenv("MECHGAP_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Fixed-size blocks summed in block order, so the estimate is bit-identical
// for any thread count.
McEstimate run_mc(std::uint64_t num_samples,
                  const std::function<double(std::uint64_t)>& sample_fn) {
    constexpr std::uint64_t kBlock = 8192;
    std::uint64_t num_blocks = (num_samples + kBlock - 1) / kBlock;
    std::vector<double> sums(num_blocks, 0.0), sq_sums(num_blocks, 0.0);

    auto worker = [&](std::uint64_t block) {
        std::uint64_t lo = block * kBlock;
        std::uint64_t hi = std::min(lo + kBlock, num_samples);
        double s = 0.0, s2 = 0.0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            double x = sample_fn(i);
            s += x;
            s2 += x * x;
        }
        sums[block] = s;
        sq_sums[block] = s2;
    };

    int threads = std::min<std::uint64_t>(thread_budget(), num_blocks);
    if (threads <= 1) {
        for (std::uint64_t b = 0; b < num_blocks; ++b) worker(b);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::uint64_t b; (b = next.fetch_add(1)) < num_blocks;) worker(b);
            });
        for (auto& th : pool) th.join();
    }

    double total = 0.0, total_sq = 0.0;
    for (std::uint64_t b = 0; b < num_blocks; ++b) {
        total += sums[b];
        total_sq += sq_sums[b];
    }
    double n = static_cast<double>(num_samples);
    double mean = total / n;
    McEstimate est{mean, 0.0};
    if (num_samples > 1) {
        double var = (total_sq - n * mean * mean) / (n - 1.0);
        est.std_error = var > 0.0 ? std::sqrt(var / n) : 0.0;
    }
    return est;
}

double sample_value(const Instance& inst, std::size_t buyer, std::uint64_t seed,
                    std::uint64_t index) {
    return quantile_sample(inst.buyers[buyer], rng::uniform(seed, buyer, index));
}

}  // namespace

void SpmPolicy::validate(const Instance& inst) const {
    if (order.size() != inst.size() || prices.size() != inst.size())
        throw std::invalid_argument("SpmPolicy: dimension mismatch with instance");
    std::vector<bool> seen(inst.size(), false);
    for (std::size_t i : order) {
        if (i >= inst.size() || seen[i])
            throw std::invalid_argument("SpmPolicy: order is not a permutation");
        seen[i] = true;
    }
    for (double p : prices)
        if (!(p >= 0.0)) throw std::invalid_argument("SpmPolicy: negative price");
}

double ap_revenue(const Instance& inst, double p) {
    inst.validate();
    if (!(p >= 0.0)) throw std::domain_error("ap_revenue: price must be nonnegative");
    if (p == 0.0) return 0.0;
    if (p == kInf) return 0.0;
    double none_accepts = 1.0;
    for (const auto& d : inst.buyers) none_accepts *= cdf_left(d, p);
    return p * (1.0 - none_accepts);
}

std::vector<double> standard_price_grid(const Instance& inst,
                                        const ToleranceConfig& cfg) {
    inst.validate();
    double top = 0.0;
    bool unbounded = false;
    std::vector<double> pts;
    for (const auto& d : inst.buyers) {
        double s = support_top(d);
        if (s == kInf)
            unbounded = true;
        else
            top = std::max(top, s);
        for (double b : breakpoints(d)) pts.push_back(b);
    }
    if (top == 0.0) top = 1.0;

    // Linear sweep at grid_resolution points per unit, capped so huge supports
    // (e.g. equal-revenue truncated at 1e6) stay tractable.
    constexpr std::size_t kMaxLinear = 200000;
    std::size_t n_lin = static_cast<std::size_t>(top * cfg.grid_resolution);
    n_lin = std::clamp<std::size_t>(n_lin, 16, kMaxLinear);
    for (std::size_t i = 1; i <= n_lin; ++i)
        pts.push_back(top * static_cast<double>(i) / static_cast<double>(n_lin));

    // Log sweep picks up structure near zero that the linear grid misses.
    double lo = std::max(1e-3, top * 1e-6);
    for (int i = 0; i <= 400; ++i)
        pts.push_back(lo * std::pow(top / lo, i / 400.0));

    if (unbounded) {
        // 1/z-spaced tail out to 1000x the largest finite support.
        double base = std::max(top, 1.0);
        double z_hi = 1.0 / base, z_lo = z_hi / 1000.0;
        for (int i = 0; i <= 1000; ++i)
            pts.push_back(1.0 / (z_hi + (z_lo - z_hi) * i / 1000.0));
    }

    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    while (!pts.empty() && pts.front() <= 0.0) pts.erase(pts.begin());
    return pts;
}

RevenueReport ap_optimal(const Instance& inst, const ToleranceConfig& cfg) {
    auto grid = standard_price_grid(inst, cfg);
    double best_p = grid.front(), best_v = -1.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double v = ap_revenue(inst, grid[i]);
        if (v > best_v) {
            best_v = v;
            best_p = grid[i];
            best_i = i;
        }
    }
    // Refine between the neighbors of the best grid point. Atoms are grid
    // members, so the refinement only has to polish a smooth piece.
    double lo = best_i > 0 ? grid[best_i - 1] : best_p;
    double hi = best_i + 1 < grid.size() ? grid[best_i + 1] : best_p;
    if (hi > lo) {
        double p_ref = golden_section_max(
            [&](double p) { return ap_revenue(inst, p); }, lo, hi, cfg.root_tol,
            cfg.max_iter);
        double v_ref = ap_revenue(inst, p_ref);
        if (v_ref > best_v) {
            best_v = v_ref;
            best_p = p_ref;
        }
    }
    RevenueReport rep;
    rep.mechanism = "AP";
    rep.revenue = best_v;
    rep.price = best_p;
    rep.numeric_error = hi > lo ? hi - lo : 0.0;
    rep.method = "grid_search";
    return rep;
}

double d1(const Instance& inst, double p) {
    inst.validate();
    double prod = 1.0;
    for (const auto& d : inst.buyers) prod *= cdf(d, p);
    return prod;
}

namespace {

double second_highest_cdf(const Instance& inst, double p, bool left_limit) {
    std::size_t n = inst.size();
    double prod_nonzero = 1.0;
    std::size_t zero_count = 0;
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = left_limit ? cdf_left(inst.buyers[i], p) : cdf(inst.buyers[i], p);
        if (f[i] == 0.0)
            ++zero_count;
        else
            prod_nonzero *= f[i];
    }
    if (zero_count >= 2) return 0.0;
    // With exactly one F_i(p) = 0, the only surviving sub-event is "buyer i
    // is the unique one above p", of probability prod_{j != i} F_j(p).
    if (zero_count == 1) return prod_nonzero;
    double sum = 1.0;
    for (std::size_t i = 0; i < n; ++i) sum += 1.0 / f[i] - 1.0;
    return prod_nonzero * sum;
}

}  // namespace

double d2(const Instance& inst, double p) {
    inst.validate();
    return second_highest_cdf(inst, p, false);
}

namespace {

struct ArDetail {
    double value;
    double error;
};

ArDetail ar_revenue_detail(const Instance& inst, double p,
                           const ToleranceConfig& cfg) {
    inst.validate();
    if (!(p >= 0.0)) throw std::domain_error("ar_revenue: reserve must be nonnegative");
    if (p == kInf) {
        // limit value: p (1 - prod F_i(p)) -> sum of the 1/p tail coefficients
        double limit = 0.0;
        for (const auto& d : inst.buyers) limit += tail_coefficient(d);
        return {limit, 0.0};
    }

    double none = 1.0;
    for (const auto& d : inst.buyers) none *= cdf_left(d, p);
    double head = p > 0.0 ? p * (1.0 - none) : 0.0;

    double finite_top = p;
    int unbounded = 0;
    std::vector<double> cuts;
    for (const auto& d : inst.buyers) {
        if (is_unbounded(d))
            ++unbounded;
        else
            finite_top = std::max(finite_top, support_top(d));
        for (double b : breakpoints(d))
            if (b > p) cuts.push_back(b);
    }

    double tail_start = std::max({p, finite_top, 1.0});
    cuts.push_back(tail_start);
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                              [&](double c) { return c > tail_start; }),
               cuts.end());
    cuts.push_back(p);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto integrand = [&](double x) { return 1.0 - d2(inst, x); };
    double total = head, err = 0.0;
    double span = std::max(tail_start - p, 1.0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (unbounded <= 1 && a >= finite_top) break;  // second-highest is bounded
        double tol = cfg.quad_tol * std::max((b - a) / span, 1e-3);
        // Within an open segment the integrand is smooth; atoms sit exactly at
        // the cuts, so the right endpoint must be read as a left limit.
        double fb = 1.0 - second_highest_cdf(inst, b, true);
        auto r = adaptive_simpson(integrand, a, b, integrand(a), fb, tol);
        if (!r.converged)
            throw ConvergenceError("ar_revenue: segment quadrature failed");
        total += r.value;
        err += r.error;
    }

    if (unbounded >= 2) {
        // int_T^inf (1 - D2) dx = int_0^{1/T} (1 - D2(1/z)) / z^2 dz with the
        // z = 0 limit equal to the pairwise sum of tail coefficients.
        double c0 = 0.0;
        {
            double s = 0.0, s2 = 0.0;
            for (const auto& d : inst.buyers) {
                double a = tail_coefficient(d);
                s += a;
                s2 += a * a;
            }
            c0 = 0.5 * (s * s - s2);
        }
        double z_hi = 1.0 / tail_start;
        auto g = [&](double z) {
            if (z <= 0.0) return c0;
            double x = 1.0 / z;
            return (1.0 - d2(inst, x)) / (z * z);
        };
        auto r = adaptive_simpson(g, 0.0, z_hi, c0, g(z_hi), cfg.quad_tol);
        if (!r.converged) throw ConvergenceError("ar_revenue: tail quadrature failed");
        total += r.value;
        err += r.error;
    }
    return {total, err};
}

}  // namespace

double ar_revenue(const Instance& inst, double p, const ToleranceConfig& cfg) {
    return ar_revenue_detail(inst, p, cfg).value;
}

RevenueReport ar_optimal(const Instance& inst, const ToleranceConfig& cfg) {
    inst.validate();
    RevenueReport rep;
    rep.mechanism = "AR";
    rep.method = "quadrature";

    if (auto view = triangular_view(inst)) {
        double best_v = -1.0, best_p = 0.0, best_err = 0.0;
        std::vector<double> candidates;
        for (const auto& b : view->finite) candidates.push_back(b.v);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()),
                         candidates.end());
        for (double v : candidates) {
            auto d = ar_revenue_detail(inst, v, cfg);
            if (d.value > best_v) {
                best_v = d.value;
                best_p = v;
                best_err = d.error;
            }
        }
        if (!view->limit_indices.empty()) {
            // reserve -> inf: only the Tri(inf) buyers can clear it, each
            // contributing its limit unit
            auto at_inf = ar_revenue_detail(inst, kInf, cfg);
            if (at_inf.value > best_v) {
                best_v = at_inf.value;
                best_p = kInf;
                best_err = at_inf.error;
            }
        }
        rep.revenue = best_v;
        rep.price = best_p;
        rep.numeric_error = best_err;
        return rep;
    }

    // General path: coarse log grid over the supports plus candidates.
    double top = 1.0;
    for (const auto& d : inst.buyers)
        if (!is_unbounded(d)) top = std::max(top, support_top(d));
    std::vector<double> candidates;
    for (const auto& d : inst.buyers)
        for (double c : monopoly_candidates(d)) candidates.push_back(c);
    double lo = 1e-3;
    for (int i = 0; i <= 256; ++i)
        candidates.push_back(lo * std::pow(2.0 * top / lo, i / 256.0));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());

    double best_v = -1.0, best_p = 0.0, best_err = 0.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        auto d = ar_revenue_detail(inst, candidates[i], cfg);
        if (d.value > best_v) {
            best_v = d.value;
            best_p = candidates[i];
            best_err = d.error;
            best_i = i;
        }
    }
    double rlo = best_i > 0 ? candidates[best_i - 1] : best_p;
    double rhi = best_i + 1 < candidates.size() ? candidates[best_i + 1] : best_p;
    if (rhi > rlo) {
        double p_ref = golden_section_max(
            [&](double p) { return ar_revenue(inst, p, cfg); }, rlo, rhi,
            std::max(cfg.root_tol, 1e-6 * (rhi - rlo)), cfg.max_iter);
        auto d = ar_revenue_detail(inst, p_ref, cfg);
        if (d.value > best_v) {
            best_v = d.value;
            best_p = p_ref;
            best_err = d.error;
        }
    }
    rep.revenue = best_v;
    rep.price = best_p;
    rep.numeric_error = best_err;
    return rep;
}

double spm_revenue(const Instance& inst, const SpmPolicy& policy) {
    inst.validate();
    policy.validate(inst);
    double unsold = 1.0, revenue = 0.0;
    for (std::size_t k = 0; k < policy.order.size(); ++k) {
        std::size_t i = policy.order[k];
        double price = policy.prices[i];
        double s = price == kInf ? 0.0 : survival(inst.buyers[i], price);
        if (s > 0.0) {
            revenue += price * s * unsold;
            unsold *= 1.0 - s;
        }
    }
    return revenue;
}

RevenueReport spm_opt_triangular(const Instance& inst) {
    inst.validate();
    auto view = triangular_view(inst);
    if (!view)
        throw UnsupportedError("spm_opt_triangular: instance is not triangular");

    double revenue = static_cast<double>(view->limit_indices.size());
    double unsold = 1.0;
    SpmPolicy policy;
    policy.prices.assign(inst.size(), kInf);
    for (std::size_t i : view->limit_indices) policy.order.push_back(i);
    for (const auto& b : view->finite) {
        revenue += b.v * b.q * unsold;
        unsold *= 1.0 - b.q;
        policy.order.push_back(b.index);
        policy.prices[b.index] = b.v;
    }

    RevenueReport rep;
    rep.mechanism = "OPT";
    rep.revenue = revenue;
    rep.policy = std::move(policy);
    rep.numeric_error = 0.0;
    rep.method = "closed_form";
    return rep;
}

RevenueReport myerson_mc(const Instance& inst, const MonteCarloConfig& mc) {
    inst.validate();
    mc.validate();

    double limit_units = 0.0;
    struct Finite {
        std::size_t index;
        double atom_value;   // value whose virtual value is the value itself
        double low_virtual;  // virtual value below the atom
    };
    std::vector<Finite> finite;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        const auto& var = inst.buyers[i].value();
        if (std::holds_alternative<TriangularLimit>(var)) {
            limit_units += 1.0;  // the limiting unit of Tri(inf)
        } else if (const auto* t = std::get_if<Triangular>(&var)) {
            double low = t->q == 1.0 ? t->v : -t->v * t->q / (1.0 - t->q);
            finite.push_back({i, t->v, low});
        } else if (const auto* e = std::get_if<EqualRevenueTruncated>(&var)) {
            finite.push_back({i, e->t, 0.0});
        } else if (const auto* r = std::get_if<RootIrregular>(&var)) {
            if (r->n >= 2)
                throw UnsupportedError(
                    "myerson_mc: irregular buyer (RootIrregular n >= 2)");
            finite.push_back({i, kInf, 0.0});  // equal-revenue: virtual value 0
        }
    }

    auto sample = [&](std::uint64_t s) {
        double best = 0.0;  // (max)+ starts at zero
        for (const auto& f : finite) {
            double b = quantile_sample(inst.buyers[f.index],
                                       rng::uniform(mc.seed, f.index, s));
            double phi = b == f.atom_value ? f.atom_value : f.low_virtual;
            if (phi > best) best = phi;
        }
        return best;
    };

    McEstimate est = finite.empty() ? McEstimate{0.0, 0.0}
                                    : run_mc(mc.num_samples, sample);
    RevenueReport rep;
    rep.mechanism = "OPT";
    rep.revenue = limit_units + est.mean;
    rep.numeric_error = est.std_error;
    rep.method = "monte_carlo";
    return rep;
}

RevenueReport mechanism_mc(const Instance& inst, const MechanismChoice& mech,
                           const MonteCarloConfig& mc) {
    inst.validate();
    mc.validate();
    if (const auto* sw = std::get_if<SpmWith>(&mech)) sw->policy.validate(inst);

    // The counter-based stream is random access, so each rule only has to
    // draw the values it actually inspects.
    auto sample = [&](std::uint64_t s) -> double {
        if (const auto* ap = std::get_if<ApAt>(&mech)) {
            for (std::size_t i = 0; i < inst.size(); ++i)
                if (sample_value(inst, i, mc.seed, s) >= ap->price) return ap->price;
            return 0.0;
        }
        if (const auto* ar = std::get_if<ArAt>(&mech)) {
            double top = -1.0, second = 0.0;
            for (std::size_t i = 0; i < inst.size(); ++i) {
                double b = sample_value(inst, i, mc.seed, s);
                if (b > top) {  // strict: the lowest index wins ties
                    second = top < 0.0 ? 0.0 : top;
                    top = b;
                } else if (b > second) {
                    second = b;
                }
            }
            if (top < ar->reserve) return 0.0;
            return std::max(second, ar->reserve);
        }
        const auto& policy = std::get<SpmWith>(mech).policy;
        for (std::size_t i : policy.order) {
            double price = policy.prices[i];
            if (price != kInf && sample_value(inst, i, mc.seed, s) >= price)
                return price;
        }
        return 0.0;
    };

    McEstimate est = run_mc(mc.num_samples, sample);
    RevenueReport rep;
    rep.mechanism = std::holds_alternative<ApAt>(mech)   ? "AP"
                    : std::holds_alternative<ArAt>(mech) ? "AR"
                                                         : "SPM";
    rep.revenue = est.mean;
    if (const auto* ap = std::get_if<ApAt>(&mech)) rep.price = ap->price;
    if (const auto* ar = std::get_if<ArAt>(&mech)) rep.price = ar->reserve;
    rep.numeric_error = est.std_error;
    rep.method = "monte_carlo";
    return rep;
}

}  // namespace mechgap
