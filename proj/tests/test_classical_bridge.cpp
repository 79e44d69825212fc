#include <doctest.h>

#include "pinstop/classical_bridge.hpp"
#include "pinstop/core_math.hpp"
#include "pinstop/errors.hpp"

#include <cmath>

using namespace pinstop;

TEST_SUITE("classical_bridge") {

TEST_CASE("known-pinning value matches high-precision references") {
    // references computed independently with 30-digit arithmetic
    CHECK(std::fabs(value_known_pinning({0.0, 0.0}, 0.0) - 0.36913638072536099) < 1e-14);
    CHECK(std::fabs(value_known_pinning({0.3, 0.2}, 0.0) - 0.37783355275348748) < 1e-14);
    CHECK(std::fabs(value_known_pinning({0.25, 0.5}, 1.0) - 1.21288748661707059) < 1e-14);
}

TEST_CASE("translation covariance in the pin level") {
    for (double a : {-2.0, -0.5, 0.7, 3.0})
        for (double t : {0.0, 0.2, 0.6, 0.95})
            for (double x = a - 3.0; x <= a + 3.0; x += 0.41)
                CHECK(std::fabs(value_known_pinning({t, x}, a) - a -
                                value_known_pinning({t, x - a}, 0.0)) < 1e-12);
}

TEST_CASE("value matching on the boundary and dominance above the payoff") {
    for (double a : {-1.0, 0.0, 1.0}) {
        for (double t : {0.0, 0.3, 0.7, 0.99}) {
            const double b = boundary_b(t, a);
            CHECK(std::fabs(value_known_pinning({t, b}, a) - b) < 1e-9);
            // stop region: value equals x on and above the boundary
            CHECK(std::fabs(value_known_pinning({t, b + 0.8}, a) - (b + 0.8)) < 1e-12);
            // continuation: strictly above x
            CHECK(value_known_pinning({t, b - 0.5}, a) > b - 0.5);
        }
    }
}

TEST_CASE("value is nondecreasing in x") {
    for (double t : {0.1, 0.5, 0.9}) {
        double prev = -1e300;
        for (double x = -4.0; x <= 4.0; x += 0.05) {
            const double v = value_known_pinning({t, x}, 0.0);
            CHECK(v >= prev - 1e-12);
            CHECK(v >= x);
            prev = v;
        }
    }
}

TEST_CASE("boundary endpoints") {
    for (double a : {-1.5, 0.0, 2.0}) {
        CHECK(boundary_b(1.0, a) == a);
        CHECK(std::fabs(boundary_b(0.0, a) - (a + alpha())) < 1e-14);
        CHECK(boundary_b(0.5, a) > boundary_b(0.9, a));
    }
}

TEST_CASE("threshold rule agrees with the boundary") {
    for (double t : {0.0, 0.4, 0.99}) {
        const double b = boundary_b(t, 1.0);
        CHECK(policy_tau_b({t, b + 1e-9}, 1.0));
        CHECK(policy_tau_b({t, b}, 1.0));
        CHECK_FALSE(policy_tau_b({t, b - 1e-6}, 1.0));
    }
    CHECK(policy_tau_b({1.0, -100.0}, 1.0));  // horizon stop
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(value_known_pinning({1.0, 0.0}, 0.0), DomainError);
    CHECK_THROWS_AS(value_known_pinning({1.5, 0.0}, 0.0), DomainError);
    CHECK_THROWS_AS(boundary_b(-0.1, 0.0), DomainError);
    CHECK_THROWS_AS(boundary_b(1.1, 0.0), DomainError);
}

}
