#pragma once

#include "pinstop/classical_bridge.hpp"

namespace pinstop {

/// Value of the uncertain-pinning problem at a = 0, together with the point
/// it was evaluated at.  Always x <= value <= V_1^0(t,x).
struct UncertainValue {
    double t;
    double x;
    double pi;
    double value;
};

/// Explicit a = 0 solution: V = (1 - Pi) x + Pi V_1^0(t,x).
UncertainValue value_a0(double t, double x, double pi);

/// Optimal rule at a = 0: stop iff x >= alpha sqrt(1-t) or t = 1.
/// Identical to the known-pinning rule; independent of pi.
bool policy_a0(double t, double x);

/// The unique x* < 0 with value_a0(0, x*, pi) = 0, searched on [-5, -1e-9].
/// Throws NotFound when no crossing exists (e.g. pi = 1, where V >= 0).
double zero_crossing_a0(double pi);

} // namespace pinstop
