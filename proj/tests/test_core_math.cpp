#include <doctest.h>

#include "pinstop/core_math.hpp"
#include "pinstop/errors.hpp"

#include <chrono>
#include <cmath>

using namespace pinstop;

TEST_SUITE("core_math") {

TEST_CASE("norm_cdf matches high-precision reference values") {
    // references computed independently with 30-digit arithmetic
    CHECK(std::fabs(norm_cdf(0.0) - 0.5) < 1e-16);
    CHECK(std::fabs(norm_cdf(1.0) - 0.841344746068542949) < 1e-15);
    CHECK(std::fabs(norm_cdf(2.0) - 0.977249868051820793) < 1e-15);
    CHECK(std::fabs(norm_cdf(0.5) - 0.691462461274013104) < 1e-15);
    CHECK(std::fabs(norm_cdf(-1.96) - 0.0249978951482204341) < 1e-16);
    CHECK(norm_cdf(-8.0) == doctest::Approx(6.22096057427178412e-16).epsilon(1e-12));
}

TEST_CASE("norm_cdf symmetry and monotonicity") {
    for (double y = -6.0; y <= 6.0; y += 0.37)
        CHECK(std::fabs(norm_cdf(-y) - (1.0 - norm_cdf(y))) < 1e-15);
    double prev = 0.0;
    for (double y = -10.0; y <= 10.0; y += 0.1) {
        const double c = norm_cdf(y);
        CHECK(c >= prev);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        prev = c;
    }
}

TEST_CASE("norm_cdf agrees with Simpson quadrature of the density") {
    // composite Simpson of norm_pdf on [-3, b] vs norm_cdf(b) - norm_cdf(-3)
    const double lo = -3.0;
    for (double hi : {-1.0, 0.0, 0.8, 1.7, 2.9}) {
        const int n = 2000;  // even
        const double h = (hi - lo) / n;
        double s = norm_pdf(lo) + norm_pdf(hi);
        for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * norm_pdf(lo + i * h);
        s *= h / 3.0;
        CHECK(std::fabs(s - (norm_cdf(hi) - norm_cdf(lo))) < 1e-12);
    }
}

TEST_CASE("norm_pdf basics") {
    CHECK(std::fabs(norm_pdf(0.0) - 0.398942280401432678) < 1e-15);
    CHECK(std::fabs(norm_pdf(1.5) - norm_pdf(-1.5)) == 0.0);
}

TEST_CASE("erfcx reference values and identity") {
    CHECK(std::fabs(erfcx(0.0) - 1.0) < 1e-15);
    CHECK(std::fabs(erfcx(1.0) - 0.427583576155807004) < 1e-15);
    CHECK(erfcx(10.0) == doctest::Approx(0.0561409927438225859).epsilon(1e-13));
    // erfcx(x) = exp(x^2) erfc(x) where both factors are representable
    for (double x = -2.0; x <= 5.0; x += 0.31)
        CHECK(erfcx(x) == doctest::Approx(std::exp(x * x) * std::erfc(x)).epsilon(1e-12));
}

TEST_CASE("norm_cdf_scaled is exp(y^2/2) Phi(y) without under/overflow") {
    for (double y = -5.0; y <= 5.0; y += 0.43)
        CHECK(norm_cdf_scaled(y) ==
              doctest::Approx(std::exp(y * y / 2.0) * norm_cdf(y)).epsilon(1e-13));
    // far tails: exp(y^2/2) alone overflows, Phi alone underflows
    CHECK(std::isfinite(norm_cdf_scaled(-40.0)));
    CHECK(norm_cdf_scaled(-40.0) > 0.0);
    CHECK(std::isfinite(norm_cdf_scaled(25.0)));
    CHECK(norm_cdf_scaled(25.0) > 1e130);
}

TEST_CASE("find_root solves bracketed equations") {
    const double r = find_root([](double x) { return x * x - 2.0; }, {0.0, 2.0});
    CHECK(std::fabs(r - std::sqrt(2.0)) < 1e-11);
    const double c = find_root([](double x) { return std::cos(x); }, {0.0, 3.0});
    CHECK(std::fabs(c - 1.57079632679489662) < 1e-11);
}

TEST_CASE("find_root rejects brackets without a sign change") {
    CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, {-1.0, 1.0}),
                    NoSignChange);
}

TEST_CASE("minimize_golden locates a unimodal minimum") {
    const double m = minimize_golden([](double x) { return (x - 1.3) * (x - 1.3); }, 0.0, 3.0);
    CHECK(std::fabs(m - 1.3) < 1e-9);
}

TEST_CASE("alpha constant: value, residual, caching") {
    const double a = solve_alpha().value;
    CHECK(std::fabs(a - 0.8399236756923727) < 1e-12);
    const double sqrt2pi = 2.50662827463100050;
    const double resid = sqrt2pi * (1.0 - a * a) * std::exp(a * a / 2.0) * norm_cdf(a) - a;
    CHECK(std::fabs(resid) < 1e-10);

    // cached: repeated access is identical and fast
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 100; ++i) CHECK(alpha() == a);
    const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    CHECK(us < 100000);
}

}
