#include "pinstop/closed_form_a0.hpp"
#include "pinstop/belief.hpp"
#include "pinstop/core_math.hpp"
#include "pinstop/errors.hpp"

#include <cmath>

namespace pinstop {

UncertainValue value_a0(double t, double x, double pi) {
    if (!(t >= 0.0 && t < 1.0))
        throw DomainError("value_a0: requires 0 <= t < 1");
    if (!(pi >= 0.0 && pi <= 1.0))
        throw DomainError("value_a0: pi must lie in [0,1]");
    const double P = posterior(t, x, ModelParams{0.0, pi}).value;
    const double v1 = value_known_pinning(TimeState{t, x}, 0.0);
    return {t, x, pi, (1.0 - P) * x + P * v1};
}

bool policy_a0(double t, double x) {
    return policy_tau_b(TimeState{t, x}, 0.0);
}

double zero_crossing_a0(double pi) {
    if (!(pi > 0.0 && pi <= 1.0))
        throw DomainError("zero_crossing_a0: requires 0 < pi <= 1");
    const Bracket b{-5.0, -1e-9};
    auto f = [pi](double x) { return value_a0(0.0, x, pi).value; };
    const double f_lo = f(b.lo), f_hi = f(b.hi);
    if ((f_lo > 0.0) == (f_hi > 0.0))
        throw NotFound("zero_crossing_a0: no sign change on [" + std::to_string(b.lo) +
                       ", " + std::to_string(b.hi) + "]; f(lo)=" + std::to_string(f_lo) +
                       " f(hi)=" + std::to_string(f_hi));
    return find_root(f, b, 1e-12);
}

} // namespace pinstop
