#pragma once

namespace pinstop {

/// The problem instance: pin location / drift level a, and prior belief pi
/// that the process is a Brownian bridge (sampling without replacement).
struct ModelParams {
    double a = 0.0;
    double pi = 0.5;
};

/// A point of the embedded problem: time t in [0,1) and running-sum level x.
struct TimeState {
    double t = 0.0;
    double x = 0.0;
};

/// Optimal stopping boundary of the known-pinning problem,
/// b(t) = a + alpha * sqrt(1-t). Requires 0 <= t <= 1.
double boundary_b(double t, double a);

/// Closed-form value of the known-pinning (pi = 1) bridge stopping problem.
/// Requires s.t < 1; the t = 1 limit value a at the pin is owned by callers.
double value_known_pinning(TimeState s, double a);

/// Threshold rule tau_b: stop iff x >= b(t) or t = 1.
bool policy_tau_b(TimeState s, double a);

} // namespace pinstop
