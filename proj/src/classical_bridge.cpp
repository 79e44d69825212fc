#include "pinstop/classical_bridge.hpp"
#include "pinstop/core_math.hpp"
#include "pinstop/errors.hpp"

#include <cmath>

namespace pinstop {

namespace {
constexpr double kSqrt2Pi = 2.506628274631000502415765284811;
}

double boundary_b(double t, double a) {
    if (!(t >= 0.0 && t <= 1.0))
        throw DomainError("boundary_b: t must lie in [0,1]");
    return a + alpha() * std::sqrt(1.0 - t);
}

double value_known_pinning(TimeState s, double a) {
    if (!(s.t < 1.0))
        throw DomainError("value_known_pinning: requires t < 1");
    if (!(s.t >= 0.0))
        throw DomainError("value_known_pinning: requires t >= 0");
    const double al = alpha();
    const double sq = std::sqrt(1.0 - s.t);
    const double z = (s.x - a) / sq;
    if (z >= al) return s.x;
    // exp(z^2/2)*Phi(z) via the scaled complementary function, so the
    // product stays finite for arbitrarily negative z.
    return a + kSqrt2Pi * sq * (1.0 - al * al) * norm_cdf_scaled(z);
}

bool policy_tau_b(TimeState s, double a) {
    if (s.t >= 1.0) return true;
    return s.x >= boundary_b(s.t, a);
}

} // namespace pinstop
