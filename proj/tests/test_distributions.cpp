#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mechgap/distributions.hpp"
#include "mechgap/rng.hpp"

using namespace mechgap;

TEST_CASE("cdf values") {
    CHECK(cdf(tri_inf(), 1.0) == doctest::Approx(0.5));
    CHECK(cdf(tri(1.0, 1.0), 0.5) == 0.0);
    // (1-q) p / ((1-q) p + v q) at v=1.5, q=0.4, p=1: 0.6 / 1.2
    CHECK(cdf(tri(1.5, 0.4), 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cdf(tri(2.0, 0.5), 2.0) == 1.0);
    CHECK(cdf(equal_revenue(100.0), 0.5) == 0.0);
    CHECK(cdf(equal_revenue(100.0), 10.0) == doctest::Approx(0.9));
    CHECK(cdf(root_irregular(2), 2.0) == doctest::Approx(std::sqrt(0.5)));
    CHECK_THROWS_AS(cdf(tri_inf(), -1.0), std::domain_error);
}

TEST_CASE("survival convention at atoms") {
    CHECK(survival(tri(2.0, 0.3), 2.0) == doctest::Approx(0.3));
    CHECK(survival(tri(1.0, 1.0), 1.0) == 1.0);
    CHECK(survival(equal_revenue(100.0), 10.0) == doctest::Approx(0.1));
    CHECK(survival(equal_revenue(100.0), 100.0) == doctest::Approx(0.01));
    CHECK(survival(equal_revenue(100.0), 100.0001) == 0.0);
}

TEST_CASE("survival + left cdf = 1 exactly") {
    std::vector<DistributionSpec> ds = {tri(2.0, 0.5), tri(1.0, 1.0), tri_inf(),
                                        equal_revenue(50.0), root_irregular(3)};
    for (const auto& d : ds)
        for (double p : {0.0, 0.5, 1.0, 1.5, 2.0, 10.0, 50.0, 75.0})
            CHECK(survival(d, p) + cdf_left(d, p) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("cdf monotone, survival antitone") {
    std::vector<DistributionSpec> ds = {tri(2.7, 0.35), tri_inf(), equal_revenue(9.0),
                                        root_irregular(2)};
    for (const auto& d : ds) {
        double prev_c = -1.0, prev_s = 2.0;
        for (int i = 0; i <= 200; ++i) {
            double p = 12.0 * i / 200.0;
            double c = cdf(d, p), s = survival(d, p);
            CHECK(c >= prev_c);
            CHECK(s <= prev_s);
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
            prev_c = c;
            prev_s = s;
        }
    }
}

TEST_CASE("quantile_sample closed forms") {
    CHECK(quantile_sample(tri(1.0, 1.0), 0.7) == 1.0);
    CHECK(quantile_sample(tri_inf(), 0.5) == doctest::Approx(1.0));
    // u v q / ((1-q)(1-u)) at v=2, q=0.5, u=0.25
    double p = quantile_sample(tri(2.0, 0.5), 0.25);
    CHECK(p == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(cdf(tri(2.0, 0.5), p) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(quantile_sample(equal_revenue(100.0), 0.5) == doctest::Approx(2.0));
    CHECK(quantile_sample(equal_revenue(100.0), 0.9999) == 100.0);
    CHECK_THROWS_AS(quantile_sample(tri_inf(), 1.0), std::domain_error);
}

TEST_CASE("sampling matches the cdf (KS distance)") {
    const int n = 100000;
    std::vector<DistributionSpec> ds = {tri(2.0, 0.4), tri_inf(), equal_revenue(20.0),
                                        root_irregular(2)};
    for (std::size_t k = 0; k < ds.size(); ++k) {
        std::vector<double> samples(n);
        for (int i = 0; i < n; ++i)
            samples[i] = quantile_sample(ds[k], rng::uniform(42, k, i));
        std::sort(samples.begin(), samples.end());
        // compare empirical and true cdf at the sample points (right limits)
        double worst = 0.0;
        for (int i = 0; i < n; i += 37) {
            double x = samples[i];
            double emp = static_cast<double>(
                             std::upper_bound(samples.begin(), samples.end(), x) -
                             samples.begin()) /
                         n;
            worst = std::max(worst, std::abs(emp - cdf(ds[k], x)));
        }
        CHECK(worst < 0.01);
    }
}

TEST_CASE("revenue-quantile curves") {
    CHECK(revenue_quantile(tri(2.0, 0.5), 0.5) == doctest::Approx(1.0));
    CHECK(revenue_quantile(equal_revenue(1000.0), 0.3) == doctest::Approx(1.0));
    // q / (1 - (1-q)^n) at n=2, q=0.5
    CHECK(revenue_quantile(root_irregular(2), 0.5) == doctest::Approx(2.0 / 3.0));

    // triangular curve is the tent through (0,0), (q0, v q0), (1, 0)
    double v = 2.5, q0 = 0.3;
    auto d = tri(v, q0);
    for (int i = 1; i <= 100; ++i) {
        double q = i / 101.0;
        double expected = q <= q0 ? v * q : v * q0 * (1.0 - q) / (1.0 - q0);
        CHECK(revenue_quantile(d, q) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(revenue_quantile(d, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("virtual values") {
    CHECK(virtual_value(tri(2.0, 0.5), 1.0) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(virtual_value(tri(2.0, 0.5), 2.0) == 2.0);
    CHECK(virtual_value(equal_revenue(100.0), 5.0) == doctest::Approx(0.0));
    CHECK(virtual_value(equal_revenue(100.0), 100.0) == 100.0);
    CHECK(virtual_value(tri_inf(), 7.0) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(virtual_value(tri(2.0, 0.5), 2.5), std::domain_error);
    CHECK_THROWS_AS(virtual_value(equal_revenue(100.0), 0.5), std::domain_error);

    // constant below the monopoly price
    double expected = -2.0 * 0.5 / 0.5;
    for (int i = 1; i <= 10; ++i) {
        double p = 2.0 * i / 11.0;
        CHECK(virtual_value(tri(2.0, 0.5), p) == doctest::Approx(expected).epsilon(1e-12));
    }
    // equal-revenue limit: root_irregular(1) has flat zero virtual value
    CHECK(virtual_value(root_irregular(1), 3.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("numeric regularity scan") {
    CHECK(is_regular_numeric(tri(3.0, 0.2), 101));
    CHECK(!is_regular_numeric(root_irregular(2), 101));
    CHECK(is_regular_numeric(root_irregular(1), 101));
    CHECK(is_regular_numeric(tri_inf(), 101));
    CHECK(is_regular_numeric(equal_revenue(100.0), 101));
    CHECK_THROWS_AS(is_regular_numeric(tri(1.0, 0.5), 2), std::invalid_argument);
}

TEST_CASE("validation errors") {
    CHECK_THROWS_AS(tri(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(tri(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(tri(1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(equal_revenue(1.0), std::invalid_argument);
    CHECK_THROWS_AS(root_irregular(0), std::invalid_argument);
    CHECK_THROWS_AS(Instance{}.validate(), std::invalid_argument);
}

TEST_CASE("triangular view ordering") {
    Instance inst;
    inst.buyers = {tri(1.0, 1.0), tri_inf(), tri(2.0, 0.5), tri(1.5, 0.3)};
    auto view = triangular_view(inst);
    REQUIRE(view.has_value());
    CHECK(view->limit_indices == std::vector<std::size_t>{1});
    REQUIRE(view->finite.size() == 3);
    CHECK(view->finite[0].v == 2.0);
    CHECK(view->finite[1].v == 1.5);
    CHECK(view->finite[2].v == 1.0);
    CHECK(view->finite[0].index == 2);

    inst.buyers.push_back(equal_revenue(5.0));
    CHECK(!triangular_view(inst).has_value());
}
