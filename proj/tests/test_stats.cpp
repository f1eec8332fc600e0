#include <doctest.h>

#include <cmath>

#include "dss/stats.hpp"

using namespace dss;

TEST_CASE("binomial factor basics") {
    CHECK(binomial_factor(17, 0, 0.0) == 1.0);
    CHECK(binomial_factor(50, 0, 0.002) == doctest::Approx(0.9047).epsilon(1e-3));
    CHECK(binomial_factor(5, 2, 0.1) == doctest::Approx(0.0729).epsilon(1e-12));
    CHECK(binomial_factor(7, 7, 1.0) == 1.0);
    CHECK(binomial_factor(7, 3, 1.0) == 0.0);
    CHECK_THROWS(binomial_factor(4, 5, 0.1));
}

TEST_CASE("binomial factors stay finite for large N") {
    const double a = binomial_factor(10000, 17, 1e-3);
    CHECK(a > 0.0);
    CHECK(a < 1.0);
    CHECK(std::isfinite(a));
}

TEST_CASE("binomial normalization to 1e-12") {
    for (std::uint64_t n : {1, 2, 7, 23, 60}) {
        for (double p : {1e-4, 0.01, 0.3, 0.77}) {
            double sum = 0.0;
            for (std::uint64_t w = 0; w <= n; ++w) sum += binomial_factor(n, w, p);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("A0 > A1 exactly below p = 1/(N+1)") {
    for (std::uint64_t n = 1; n <= 100; n += 3) {
        const double boundary = 1.0 / (static_cast<double>(n) + 1.0);
        CHECK(binomial_factor(n, 0, 0.9 * boundary) > binomial_factor(n, 1, 0.9 * boundary));
        CHECK(binomial_factor(n, 0, 1.1 * boundary) < binomial_factor(n, 1, 1.1 * boundary));
        // At the boundary the first two factors coincide.
        CHECK(binomial_factor(n, 0, boundary) ==
              doctest::Approx(binomial_factor(n, 1, boundary)).epsilon(1e-10));
    }
}

TEST_CASE("A_w decreasing in w below the boundary") {
    for (std::uint64_t n : {3, 12, 40, 100}) {
        const double p = 0.5 / (static_cast<double>(n) + 1.0);
        double prev = binomial_factor(n, 0, p);
        for (std::uint64_t w = 1; w <= n; ++w) {
            const double cur = binomial_factor(n, w, p);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("multi binomial factor") {
    const std::uint64_t counts[] = {2, 1};
    const std::uint32_t w[] = {1, 1};
    const double p[] = {0.1, 0.2};
    CHECK(multi_binomial_factor(counts, w, p) == doctest::Approx(0.036).epsilon(1e-12));

    const std::uint64_t c0[] = {9};
    const std::uint32_t w0[] = {0};
    const double p0[] = {0.0};
    CHECK(multi_binomial_factor(c0, w0, p0) == 1.0);

    // K = 1 reduces to the plain factor.
    const std::uint64_t c1[] = {12};
    const std::uint32_t w1[] = {3};
    const double p1[] = {0.07};
    CHECK(multi_binomial_factor(c1, w1, p1) == doctest::Approx(binomial_factor(12, 3, 0.07)));
}

TEST_CASE("single circuit cutoff") {
    CHECK(std::abs(single_circuit_cutoff(14, 14, 0.3)) < 1e-12);
    CHECK(single_circuit_cutoff(14, 3, 0.0) == 0.0);
    const double expected = 1.0 - std::pow(0.998, 50) - 50 * 0.002 * std::pow(0.998, 49);
    CHECK(single_circuit_cutoff(50, 1, 0.002) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(single_circuit_cutoff(50, 1, 0.002) == doctest::Approx(0.00462).epsilon(2e-3));
}

TEST_CASE("wilson variance") {
    CHECK(wilson_variance({0, 0, true}) == 0.0);
    CHECK(wilson_variance({0, 1, false}) == doctest::Approx(0.0625).epsilon(1e-12));
    CHECK(wilson_variance({3, 5, false}) == doctest::Approx(0.040277777777777780).epsilon(1e-12));
    CHECK_THROWS(wilson_variance({0, 0, false}));
}

TEST_CASE("wilson interval boundaries and the m=5 N=10 example") {
    for (std::uint64_t n : {1, 5, 100}) {
        auto [lo, hi] = wilson_interval(0, n, 1.0);
        CHECK(lo == doctest::Approx(0.0).epsilon(1e-12));
        auto [lo2, hi2] = wilson_interval(n, n, 1.0);
        CHECK(hi2 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(lo2 >= 0.0);
        CHECK(hi <= 1.0);
    }
    auto [lo, hi] = wilson_interval(5, 10, 1.0);
    CHECK(0.5 * (lo + hi) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(0.5 * (hi - lo) == doctest::Approx(std::sqrt(0.025 + 0.0025) / 1.1).epsilon(1e-12));
    CHECK(0.5 * (hi - lo) == doctest::Approx(0.1508).epsilon(1e-3));
}

TEST_CASE("wilson variance close to wald variance") {
    for (std::uint64_t n : {10, 100, 1000}) {
        for (std::uint64_t m : {std::uint64_t{0}, n / 4, n / 2, n}) {
            const double q = static_cast<double>(m) / static_cast<double>(n);
            const double wald_var = q * (1 - q) / static_cast<double>(n);
            const double bound = wald_var + 0.25 / (static_cast<double>(n) * static_cast<double>(n));
            CHECK(wilson_variance({m, n, false}) <= bound + 1e-15);
        }
    }
}

TEST_CASE("wald error") {
    CHECK(wald_error(0.5, 100) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(wald_error(0.0, 17) == 0.0);
    CHECK(wald_error(1.0, 17) == 0.0);
}
