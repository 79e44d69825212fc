#pragma once

#include "pinstop/classical_bridge.hpp"
#include "pinstop/mc_engine.hpp"

#include <utility>

namespace pinstop {

/// Upper/lower value bounds at a point.  lower_stderr is the Monte Carlo
/// error of the P0 first-passage term (zero when no simulation was needed).
struct BoundPair {
    double lower;
    double lower_stderr;
    double upper;
};

/// (1 - Pi)(x + max(a,0)) + Pi V_1^a(t,x).
double upper_bound(double t, double x, const ModelParams& p);

/// (estimate, stderr) of E0[X_{(t+tau_b) ^ 1}] = x + a E0[tau_b ^ (1-t)]:
/// driftless Brownian paths against the moving boundary
/// c(s) = a(1-s) - x + alpha sqrt(1-t-s), with a per-step Brownian-bridge
/// crossing correction and antithetic pairs.  Short-circuits to (x, 0) when
/// a = 0 or the passage is immediate.
std::pair<double, double> mean_stopped_value_p0(double t, double x, double a,
                                                const MCConfig& mc);

/// Both bounds assembled: lower = (1 - Pi) E0[X_{(t+tau_b) ^ 1}] + Pi V_1^a.
BoundPair lower_bound(double t, double x, const ModelParams& p, const MCConfig& mc);

} // namespace pinstop
