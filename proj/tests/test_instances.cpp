#include <doctest.h>

#include <cmath>

#include "mechgap/instances.hpp"
#include "mechgap/mechanisms.hpp"
#include "mechgap/special_functions.hpp"
#include "mechgap/transforms.hpp"

using namespace mechgap;

namespace {
const ToleranceConfig cfg{};
}

TEST_CASE("gen_spm_ap_worst structure") {
    GenParams params;
    params.epsilon = 0.5;
    params.n = 2;
    PartitionInfo info;
    auto inst = gen_spm_ap_worst(params, cfg, &info);
    REQUIRE(inst.size() == 4);  // Tri(inf), two partition buyers, Tri(1,1)
    CHECK(std::holds_alternative<TriangularLimit>(inst.buyers[0].value()));
    CHECK(info.b == doctest::Approx(3.0));
    CHECK(info.a == doctest::Approx(1.22010001752823).epsilon(1e-8));
    const auto& first = std::get<Triangular>(inst.buyers[1].value());
    const auto& last = std::get<Triangular>(inst.buyers[2].value());
    CHECK(first.v == doctest::Approx(info.b));
    CHECK(last.v == doctest::Approx(info.a));
    CHECK(first.q > 0.0);
    CHECK(first.q < 1.0);
    const auto& det = std::get<Triangular>(inst.buyers[3].value());
    CHECK(det.v == 1.0);
    CHECK(det.q == 1.0);
    // a = 1 + epsilon branch when the inverse exceeds it
    params.epsilon = 0.9;
    gen_spm_ap_worst(params, cfg, &info);
    CHECK(info.a == doctest::Approx(std::min(1.9, info.a)));
}

TEST_CASE("gen_spm_ap_worst approaches the gap constant") {
    GenParams params;
    params.epsilon = 0.05;
    params.n = 500;
    auto inst = gen_spm_ap_worst(params, cfg);
    CHECK(price_constraint_excess(inst, 1000, cfg) <= 1e-9);
    CHECK(verify_feasibility(inst, cfg) <= 1.0 + 1e-6);
    CHECK(spm_opt_triangular(inst).revenue > 2.3202);
    // SPM nondecreasing in the partition size
    double prev = 0.0;
    for (int n : {100, 500, 2000, 4000}) {
        params.n = n;
        double spm = spm_opt_triangular(gen_spm_ap_worst(params, cfg)).revenue;
        CHECK(spm >= prev - 1e-9);
        prev = spm;
    }
}

TEST_CASE("gen_ar_ap_iid") {
    auto one = gen_ar_ap_iid(1);
    REQUIRE(one.size() == 1);
    CHECK(ar_revenue(one, 1.0, cfg) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ap_revenue(one, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(ar_revenue(gen_ar_ap_iid(2), 1.0, cfg) ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-3));
    CHECK(ar_revenue(gen_ar_ap_iid(4), 1.0, cfg) ==
          doctest::Approx(9.0 * std::log(2.0) - 1.5 * kPi).epsilon(1e-3));

    // AP(p) = p (1 - psi1(p)) <= 1 exactly for the i.i.d. family
    auto inst = gen_ar_ap_iid(3);
    for (double p : {0.5, 1.0, 1.5, 2.0, 5.0, 50.0})
        CHECK(ap_revenue(inst, p) <= 1.0 + 1e-12);
}

TEST_CASE("gen_ar_ap_regular structure and revenue") {
    GenParams params;
    params.epsilon = 0.05;
    params.n = 400;
    PartitionInfo info;
    auto inst = gen_ar_ap_regular(params, &info);
    CHECK(inst.size() == 800);  // exactly 2n buyers
    CHECK(info.a == doctest::Approx(1.05));
    CHECK(info.b == doctest::Approx(21.0));
    CHECK(verify_feasibility(inst, cfg) <= 1.0 + 1e-6);
    // at this scale the reserve-a revenue is already within epsilon-range
    CHECK(ar_revenue(inst, info.a, cfg) > kPi * kPi / 6.0 - 0.15);
}

TEST_CASE("gen_opt_ar_two equal-revenue pair") {
    const double t = 1e6;
    auto inst = gen_opt_ar_two(t);
    SpmPolicy policy{{0, 1}, {t, 1.0}};
    CHECK(spm_revenue(inst, policy) == doctest::Approx(2.0 - 1.0 / t).epsilon(1e-15));
    CHECK(ap_optimal(inst, cfg).revenue == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(ar_optimal(inst, cfg).revenue == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(spm_opt_triangular(to_triangular(inst, policy)).revenue ==
          doctest::Approx(2.0 - 1.0 / t).epsilon(1e-12));
}

TEST_CASE("three_buyer_v2_residual") {
    CHECK(std::abs(three_buyer_v2_residual(1.5699, 0.8399)) < 1e-3);
    // unique sign change on (0.5, 1) for v1 = 1.5
    double lo = 0.5, hi = 1.0;
    double flo = three_buyer_v2_residual(1.5, lo);
    double fhi = three_buyer_v2_residual(1.5, hi);
    CHECK(flo < 0.0);
    CHECK(fhi > 0.0);
    int sign_changes = 0;
    double prev = flo;
    for (int i = 1; i <= 200; ++i) {
        double x = lo + (hi - lo) * i / 200.0;
        double f = three_buyer_v2_residual(1.5, x);
        if ((f < 0) != (prev < 0)) ++sign_changes;
        prev = f;
    }
    CHECK(sign_changes == 1);
    // as v2 -> v1 the log argument tends to 1, leaving residual = v2 - 1
    CHECK(three_buyer_v2_residual(1.3, 1.3 - 1e-9) ==
          doctest::Approx(0.3).epsilon(1e-6));
    CHECK_THROWS_AS(three_buyer_v2_residual(1.7, 0.5), std::domain_error);
    CHECK_THROWS_AS(three_buyer_v2_residual(1.5, 1.6), std::domain_error);
}

TEST_CASE("gen_opt_ar_three optimizer") {
    ThreeBuyerDiagnostics diag;
    auto inst = gen_opt_ar_three(std::nullopt, cfg, &diag);
    REQUIRE(inst.size() == 3);
    CHECK(diag.v1 == doctest::Approx(1.5699).epsilon(0.01 / 1.5699));
    CHECK(diag.v2 == doctest::Approx(0.8399).epsilon(0.005 / 0.8399));
    CHECK(diag.opt == doctest::Approx(2.1361).epsilon(1e-3 / 2.1361));
    CHECK(diag.ar_closed_v2 == doctest::Approx(1.0).epsilon(1e-10));

    // fixed v1: both reserve levels give unit revenue
    ThreeBuyerDiagnostics d2;
    auto fixed = gen_opt_ar_three(1.5699, cfg, &d2);
    CHECK(ar_revenue(fixed, 1.5699, cfg) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(ar_revenue(fixed, d2.v2, cfg) == doctest::Approx(1.0).epsilon(1e-3));

    // the buyers carry q1 = 1/v1^2 and a deterministic smallest buyer
    const auto& b1 = std::get<Triangular>(fixed.buyers[1].value());
    CHECK(b1.q == doctest::Approx(1.0 / (1.5699 * 1.5699)).epsilon(1e-12));
    const auto& b2 = std::get<Triangular>(fixed.buyers[2].value());
    CHECK(b2.q == 1.0);
}

TEST_CASE("three-buyer revenue-quantile landmarks") {
    // the optimal instance's curves peak at (1/v1^2, 1/v1) and (1, v2)
    ThreeBuyerDiagnostics diag;
    auto inst = gen_opt_ar_three(std::nullopt, cfg, &diag);
    const auto& b1 = std::get<Triangular>(inst.buyers[1].value());
    CHECK(b1.q == doctest::Approx(0.4057).epsilon(5e-4));
    CHECK(b1.v * b1.q == doctest::Approx(0.6370).epsilon(5e-4));
    CHECK(revenue_quantile(inst.buyers[1], b1.q) ==
          doctest::Approx(0.6370).epsilon(5e-4));
    CHECK(revenue_quantile(inst.buyers[2], 1.0) ==
          doctest::Approx(0.8399).epsilon(1e-3));
}

TEST_CASE("three-buyer objective is unimodal on the search range") {
    auto opt_of = [&](double v1) {
        ThreeBuyerDiagnostics d;
        gen_opt_ar_three(v1, cfg, &d);
        return d.opt;
    };
    double prev = opt_of(1.05);
    bool rising = true;
    int direction_changes = 0;
    for (int i = 1; i <= 56; ++i) {
        double v1 = 1.05 + (1.61 - 1.05) * i / 56.0;
        double cur = opt_of(v1);
        if (rising && cur < prev - 1e-12) {
            rising = false;
            ++direction_changes;
        } else if (!rising && cur > prev + 1e-12) {
            ++direction_changes;
        }
        prev = cur;
    }
    CHECK(direction_changes == 1);  // one peak
}

TEST_CASE("gen_opt_ar_four verbatim values") {
    auto inst = gen_opt_ar_four();
    REQUIRE(inst.size() == 4);
    CHECK(spm_opt_triangular(inst).revenue == doctest::Approx(2.1596).epsilon(2e-3));
    for (double r : {1.8512, 0.9700, 0.7231})
        CHECK(ar_revenue(inst, r, cfg) == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(verify_feasibility(inst, cfg) <= 1.0 + 2e-3);
    CHECK(ar_optimal(inst, cfg).revenue == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("generator parameter validation") {
    GenParams bad;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(gen_spm_ap_worst(bad, cfg), std::invalid_argument);
    bad.epsilon = 0.5;
    bad.n = 1;
    CHECK_THROWS_AS(gen_spm_ap_worst(bad, cfg), std::invalid_argument);
    CHECK_THROWS_AS(gen_ar_ap_iid(0), std::invalid_argument);
    CHECK_THROWS_AS(gen_opt_ar_three(2.5, cfg), std::invalid_argument);
}
