#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "mechgap/instances.hpp"
#include "mechgap/mechanisms.hpp"
#include "mechgap/special_functions.hpp"

using namespace mechgap;

namespace {

const ToleranceConfig cfg{};

// Enumeration oracle for SPM: walk all 2^n acceptance patterns.
double spm_enumerate(const Instance& inst, const SpmPolicy& policy) {
    std::size_t n = inst.size();
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i)
        s[i] = policy.prices[i] == kPriceInf ? 0.0
                                             : survival(inst.buyers[i], policy.prices[i]);
    double total = 0.0;
    for (std::size_t mask = 0; mask < (1u << n); ++mask) {
        double prob = 1.0, revenue = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            prob *= (mask >> i) & 1 ? s[i] : 1.0 - s[i];
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t i = policy.order[k];
            if ((mask >> i) & 1) {
                revenue = policy.prices[i];
                break;
            }
        }
        total += prob * revenue;
    }
    return total;
}

Instance three_buyer_fixed() {
    Instance inst;
    inst.buyers = {tri_inf(), tri(1.5699, 1.0 / (1.5699 * 1.5699)), tri(0.8399, 1.0)};
    return inst;
}

}  // namespace

TEST_CASE("ap_revenue closed forms") {
    Instance det{{tri(1.0, 1.0)}};
    CHECK(ap_revenue(det, 1.0) == doctest::Approx(1.0));

    Instance er_pair = gen_opt_ar_two(1e6);
    CHECK(ap_revenue(er_pair, 1.0) == doctest::Approx(1.0));
    CHECK(ap_revenue(er_pair, 10.0) == doctest::Approx(1.0).epsilon(1e-12));

    Instance limit{{tri_inf()}};
    CHECK(ap_revenue(limit, 3.0) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("ap_optimal vs dense-grid oracle") {
    Instance inst{{tri(2.0, 0.5)}};
    double oracle = 0.0;
    for (int i = 1; i <= 30000; ++i) {
        double p = 3.0 * i / 30000.0;
        oracle = std::max(oracle, p * survival(inst.buyers[0], p));
    }
    auto rep = ap_optimal(inst, cfg);
    CHECK(rep.revenue == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.revenue >= oracle - 1e-9);
    CHECK(*rep.price == doctest::Approx(2.0).epsilon(1e-9));

    Instance det{{tri(1.0, 1.0)}};
    auto rep2 = ap_optimal(det, cfg);
    CHECK(rep2.revenue == doctest::Approx(1.0));
    CHECK(*rep2.price == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("order-statistic cdfs") {
    Instance one{{tri(2.0, 0.5)}};
    CHECK(d2(one, 5.0) == 1.0);
    CHECK(d2(one, 0.4) == 1.0);

    Instance two{{tri_inf(), tri(1.0, 1.0)}};
    CHECK(d1(two, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(d2(two, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d2(two, 0.5) == doctest::Approx(cdf(tri_inf(), 0.5)).epsilon(1e-15));

    // Monte Carlo frequency cross-check of d1/d2 at a few probes
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Instance mixed{{tri(2.0, 0.4), tri_inf(), equal_revenue(8.0)}};
    const int n = 200000;
    for (double probe : {0.8, 1.7, 3.0}) {
        int le1 = 0, le2 = 0;
        for (int i = 0; i < n; ++i) {
            double hi = 0.0, second = 0.0;
            for (const auto& d : mixed.buyers) {
                double b = quantile_sample(d, u(gen));
                if (b > hi) {
                    second = hi;
                    hi = b;
                } else if (b > second) {
                    second = b;
                }
            }
            le1 += hi <= probe;
            le2 += second <= probe;
        }
        CHECK(std::abs(le1 / double(n) - d1(mixed, probe)) < 0.01);
        CHECK(std::abs(le2 / double(n) - d2(mixed, probe)) < 0.01);
    }
}

TEST_CASE("ar_revenue single buyer collapses to ap") {
    // one buyer: the second-highest is 0, so the integral term vanishes and
    // AR(p) = p * survival(p) = AP(p); at p=1 that is 1/(0.5 + 1) = 2/3
    Instance inst{{tri(2.0, 0.5)}};
    CHECK(ar_revenue(inst, 1.0, cfg) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    for (double p : {0.3, 0.9, 1.7, 2.0, 2.5})
        CHECK(ar_revenue(inst, p, cfg) ==
              doctest::Approx(ap_revenue(inst, p)).epsilon(1e-13));
}

TEST_CASE("ar_revenue on the benchmark instances") {
    CHECK(ar_revenue(three_buyer_fixed(), 0.8399, cfg) ==
          doctest::Approx(1.0).epsilon(1e-3));
    CHECK(ar_revenue(gen_ar_ap_iid(2), 1.0, cfg) ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-3));
}

TEST_CASE("ar dominates ap pointwise") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> vd(0.3, 4.0), qd(0.05, 0.95);
    for (int t = 0; t < 5; ++t) {
        Instance inst;
        inst.buyers.push_back(tri_inf());
        int n = 1 + static_cast<int>(gen() % 3);
        for (int i = 0; i < n; ++i) inst.buyers.push_back(tri(vd(gen), qd(gen)));
        for (int g = 1; g <= 200; ++g) {
            double p = 5.0 * g / 200.0;
            CHECK(ar_revenue(inst, p, cfg) >= ap_revenue(inst, p) - cfg.quad_tol);
        }
    }
}

TEST_CASE("ar_optimal picks a monopoly price on triangular instances") {
    Instance det{{tri(1.0, 1.0)}};
    auto rep = ar_optimal(det, cfg);
    CHECK(rep.revenue == doctest::Approx(1.0));
    CHECK(*rep.price == doctest::Approx(1.0));

    auto rep3 = ar_optimal(three_buyer_fixed(), cfg);
    CHECK(rep3.revenue == doctest::Approx(1.0).epsilon(1e-3));

    auto er_pair = ar_optimal(gen_opt_ar_two(1e6), cfg);
    CHECK(er_pair.revenue == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("ar_optimal dominates a dense reserve grid") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> vd(0.3, 4.0), qd(0.05, 0.95);
    for (int t = 0; t < 5; ++t) {
        Instance inst;
        if (t % 2) inst.buyers.push_back(tri_inf());
        int n = 1 + static_cast<int>(gen() % 3);
        for (int i = 0; i < n; ++i) inst.buyers.push_back(tri(vd(gen), qd(gen)));
        double best = ar_optimal(inst, cfg).revenue;
        for (int g = 1; g <= 50; ++g)
            CHECK(best >= ar_revenue(inst, 8.0 * g / 50.0, cfg) - 1e-6);
    }
}

TEST_CASE("spm_revenue closed form vs enumeration") {
    Instance inst{{tri(2.0, 0.5), tri(1.0, 1.0)}};
    SpmPolicy policy{{0, 1}, {2.0, 1.0}};
    CHECK(spm_revenue(inst, policy) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(spm_revenue(inst, policy) ==
          doctest::Approx(spm_enumerate(inst, policy)).epsilon(1e-15));

    Instance det{{tri(1.0, 1.0)}};
    CHECK(spm_revenue(det, SpmPolicy{{0}, {1.0}}) == 1.0);

    const double t = 1e6;
    Instance er_pair = gen_opt_ar_two(t);
    SpmPolicy hr_policy{{0, 1}, {t, 1.0}};
    CHECK(spm_revenue(er_pair, hr_policy) == doctest::Approx(2.0 - 1.0 / t).epsilon(1e-15));

    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> vd(0.3, 4.0), qd(0.05, 0.95), pd(0.2, 3.5);
    for (int trial = 0; trial < 20; ++trial) {
        Instance rnd;
        SpmPolicy p;
        int n = 1 + static_cast<int>(gen() % 4);
        for (int i = 0; i < n; ++i) {
            rnd.buyers.push_back(tri(vd(gen), qd(gen)));
            p.order.push_back(i);
            p.prices.push_back(pd(gen));
        }
        std::shuffle(p.order.begin(), p.order.end(), gen);
        CHECK(spm_revenue(rnd, p) ==
              doctest::Approx(spm_enumerate(rnd, p)).epsilon(1e-13));
    }
}

TEST_CASE("spm policy validation") {
    Instance inst{{tri(2.0, 0.5), tri(1.0, 1.0)}};
    CHECK_THROWS_AS(spm_revenue(inst, SpmPolicy{{0}, {1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(spm_revenue(inst, SpmPolicy{{0, 0}, {1.0, 1.0}}),
                    std::invalid_argument);
}

TEST_CASE("spm_opt_triangular closed form") {
    Instance one{{tri(2.0, 0.5)}};
    CHECK(spm_opt_triangular(one).revenue == doctest::Approx(1.0));

    auto rep = spm_opt_triangular(three_buyer_fixed());
    double v1 = 1.5699, v2 = 0.8399;
    double expected = 1.0 + 1.0 / v1 + v2 * (1.0 - 1.0 / (v1 * v1));
    CHECK(rep.revenue == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rep.revenue == doctest::Approx(2.1361).epsilon(1e-3));

    // realizing policy reproduces the finite-buyer part of the sum
    REQUIRE(rep.policy.has_value());
    double finite_part = spm_revenue(three_buyer_fixed(), *rep.policy);
    CHECK(finite_part == doctest::Approx(expected - 1.0).epsilon(1e-12));

    Instance er{{equal_revenue(10.0)}};
    CHECK_THROWS_AS(spm_opt_triangular(er), UnsupportedError);
}

TEST_CASE("myerson_mc basics") {
    Instance det{{tri(1.0, 1.0)}};
    auto rep = myerson_mc(det, {100000, 1});
    CHECK(rep.revenue == 1.0);
    CHECK(rep.numeric_error == 0.0);

    Instance two{{tri(2.0, 0.5), tri(1.5, 0.3)}};
    auto mc = myerson_mc(two, {1000000, 2});
    double exact = spm_opt_triangular(two).revenue;
    CHECK(std::abs(mc.revenue - exact) <= 4.0 * mc.numeric_error);

    auto mc3 = myerson_mc(three_buyer_fixed(), {1000000, 3});
    CHECK(std::abs(mc3.revenue - 2.1361) <= 4.0 * mc3.numeric_error + 1e-3);

    Instance bad{{root_irregular(2)}};
    CHECK_THROWS_AS(myerson_mc(bad, {1000, 0}), UnsupportedError);
    Instance er1{{root_irregular(1)}};
    CHECK_NOTHROW(myerson_mc(er1, {1000, 0}));
}

TEST_CASE("mechanism_mc agrees with analytic paths") {
    Instance det{{tri(1.0, 1.0)}};
    auto ap = mechanism_mc(det, ApAt{1.0}, {10000, 4});
    CHECK(ap.revenue == 1.0);
    CHECK(ap.numeric_error == 0.0);

    Instance inst{{tri_inf(), tri(1.5, 0.4)}};
    auto ar = mechanism_mc(inst, ArAt{1.2}, {1000000, 5});
    double exact = ar_revenue(inst, 1.2, cfg);
    CHECK(std::abs(ar.revenue - exact) <= 4.0 * ar.numeric_error + 1e-7);

    SpmPolicy policy{{1, 0}, {kPriceInf, 1.5}};
    auto spm = mechanism_mc(inst, SpmWith{policy}, {1000000, 6});
    double spm_exact = spm_revenue(inst, policy);
    CHECK(std::abs(spm.revenue - spm_exact) <= 4.0 * spm.numeric_error);
}

TEST_CASE("monte carlo is deterministic and thread-count independent") {
    Instance inst{{tri_inf(), tri(2.0, 0.4), tri(1.2, 0.7)}};
    setenv("MECHGAP_THREADS", "1", 1);
    auto a = mechanism_mc(inst, ArAt{1.1}, {200000, 9});
    auto opt_a = myerson_mc(inst, {200000, 9});
    setenv("MECHGAP_THREADS", "7", 1);
    auto b = mechanism_mc(inst, ArAt{1.1}, {200000, 9});
    auto opt_b = myerson_mc(inst, {200000, 9});
    unsetenv("MECHGAP_THREADS");
    CHECK(a.revenue == b.revenue);
    CHECK(a.numeric_error == b.numeric_error);
    CHECK(opt_a.revenue == opt_b.revenue);

    auto c = mechanism_mc(inst, ArAt{1.1}, {200000, 10});
    CHECK(c.revenue != a.revenue);  // different seed, different stream
}

TEST_CASE("per-segment inequality for budget-recursion instances") {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> vd(std::log(1.05), std::log(30.0));
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + static_cast<int>(gen() % 4);
        std::vector<double> vs(n);
        for (auto& v : vs) v = std::exp(vd(gen));
        std::sort(vs.rbegin(), vs.rend());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());

        double prefix = 1.0, prev_v = kPriceInf, prev_R = 0.0;
        for (double v : vs) {
            double growth = std::expm1(fn_R(v) - prev_R);
            double q = growth / (v + growth);
            double lhs = (v - 1.0) * q * prefix;
            double rhs = q_segment_integral(v, prev_v, cfg);
            CHECK(lhs <= rhs + cfg.quad_tol);
            prefix *= 1.0 - q;
            prev_R = fn_R(v);
            prev_v = v;
        }
    }
}

TEST_CASE("d2 lower bound in terms of d1") {
    Instance inst{{tri_inf(), tri(2.5, 0.3), tri(1.2, 0.6)}};
    for (int g = 1; g <= 100; ++g) {
        double p = 6.0 * g / 100.0;
        double lo = d1(inst, p);
        if (lo <= 0.0) continue;
        CHECK(d2(inst, p) >= lo * (1.0 - std::log(lo)) - 1e-9);
    }
}
