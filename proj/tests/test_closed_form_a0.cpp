#include <doctest.h>

#include "pinstop/closed_form_a0.hpp"
#include "pinstop/core_math.hpp"
#include "pinstop/errors.hpp"

#include <cmath>

using namespace pinstop;

TEST_SUITE("closed_form_a0") {

TEST_CASE("value reference and endpoint priors") {
    // reference computed independently with 30-digit arithmetic
    CHECK(std::fabs(value_a0(0.0, 0.0, 0.5).value - 0.18456819036268050) < 1e-14);
    // pi = 1 is the known-pinning value, pi = 0 the plain martingale
    CHECK(std::fabs(value_a0(0.0, 0.0, 1.0).value - 0.36913638072536099) < 1e-14);
    CHECK(value_a0(0.3, -0.7, 0.0).value == doctest::Approx(-0.7).epsilon(1e-15));
}

TEST_CASE("sandwich x <= V <= known-pinning value") {
    for (double t : {0.0, 0.25, 0.7, 0.97})
        for (double pi : {0.1, 0.5, 0.9})
            for (double x = -3.0; x <= 3.0; x += 0.23) {
                const double v = value_a0(t, x, pi).value;
                CHECK(v >= x - 1e-14);
                CHECK(v <= value_known_pinning({t, x}, 0.0) + 1e-14);
            }
}

TEST_CASE("value is nondecreasing in the prior") {
    for (double t : {0.1, 0.6})
        for (double x : {-1.5, -0.2, 0.4}) {
            double prev = -1e300;
            for (double pi = 0.0; pi <= 1.0; pi += 0.1) {
                const double v = value_a0(t, x, pi).value;
                CHECK(v >= prev - 1e-14);
                prev = v;
            }
        }
}

TEST_CASE("stopping rule is the known-pinning threshold, prior-free") {
    for (double t : {0.0, 0.5, 0.99}) {
        const double b = alpha() * std::sqrt(1.0 - t);
        CHECK(policy_a0(t, b + 1e-9));
        CHECK_FALSE(policy_a0(t, b - 1e-6));
        // in the stop region V = x for every prior
        for (double pi : {0.2, 0.8})
            CHECK(value_a0(t, b + 0.3, pi).value ==
                  doctest::Approx(b + 0.3).epsilon(1e-12));
    }
    CHECK(policy_a0(1.0, -5.0));
}

TEST_CASE("zero crossing: reference, root property, monotone in prior") {
    const double x_half = zero_crossing_a0(0.5);
    CHECK(std::fabs(x_half - (-0.28602783551299348)) < 1e-10);
    CHECK(std::fabs(value_a0(0.0, x_half, 0.5).value) < 1e-12);
    CHECK(value_a0(0.0, x_half - 1e-3, 0.5).value < 0.0);
    CHECK(value_a0(0.0, x_half + 1e-3, 0.5).value > 0.0);
    // heavier bridge weight pushes the crossing further left
    CHECK(zero_crossing_a0(0.9) < x_half);
    CHECK(zero_crossing_a0(0.1) > x_half);
}

TEST_CASE("no zero crossing at pi = 1") {
    // the known-pinning value is nonnegative everywhere at t = 0, a = 0
    CHECK_THROWS_AS(zero_crossing_a0(1.0), NotFound);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(value_a0(1.0, 0.0, 0.5), DomainError);
    CHECK_THROWS_AS(value_a0(0.5, 0.0, 1.5), DomainError);
    CHECK_THROWS_AS(zero_crossing_a0(0.0), DomainError);
}

}
