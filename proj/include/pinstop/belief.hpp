#pragma once

#include "pinstop/classical_bridge.hpp"

namespace pinstop {

/// Posterior belief in pinning after observing the process at (t, x),
/// starting from prior pi0 at the origin.
struct PosteriorPoint {
    double t;
    double x;
    double pi0;
    double value;
};

/// Likelihood ratio L^a(t,x) of the bridge law against the drifted-BM law,
/// (1-t)^{-1/2} * exp(-a^2/2 - (x - a t)^2 / (2(1-t))).  Requires 0 <= t < 1.
double likelihood_ratio(double t, double x, double a);

/// log L^a(t,x); the belief arithmetic works in log-odds space.
double log_likelihood_ratio(double t, double x, double a);

/// Bayes update: posterior odds = prior odds * L^a(t,x).  Exact at pi in {0,1}.
PosteriorPoint posterior(double t, double x, const ModelParams& p);

/// Drift gap between the bridge and drifted-BM hypotheses,
/// rho(t,x) = (a-x)/(1-t) - a.
double signal_to_noise(double t, double x, double a);

/// Reweighted payoff of the P0 reformulation,
/// G(t,x) = x * (1 + pi/(1-pi) * L^a(t,x)).  Requires pi < 1 and t < 1.
double payoff_G(double t, double x, const ModelParams& p);

/// Drift of the reweighted payoff under P0,
/// H(t,x) = a - pi (x-a) L^a(t,x) / ((1-pi)(1-t)).
/// Stopping is never optimal where H > 0.
double indicator_H(double t, double x, const ModelParams& p);

/// For a > 0: the smallest t at which inf_x H(t,x) reaches 0; for a < 0 the
/// smallest t at which sup_x H(t,x) reaches 0.  The inner extremum is located
/// by golden-section search on the bracket a +/- 6 sqrt(1-t).
/// Requires a != 0 and 0 < pi < 1; throws NotFound if no sign change in (0,1).
double critical_time(const ModelParams& p, double tol = 1e-10);

} // namespace pinstop
