#pragma once

#include "pinstop/classical_bridge.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pinstop {

/// Monte Carlo run configuration.  With antithetic set, n_paths counts
/// antithetic PAIRS and each pair contributes one sample.
struct MCConfig {
    std::int64_t n_paths = 200000;
    int n_steps = 10000;
    std::uint64_t seed = 1;
    bool antithetic = true;
};

/// One simulated trajectory of the filtering system.
struct PathRecord {
    int theta;                    // 0 = drifted BM, 1 = bridge
    std::vector<double> times;
    std::vector<double> x;
    std::vector<double> belief;   // closed-form posterior at (times[k], x[k])
};

/// A stopping rule as a predicate over (t, x); the horizon stop at t = 1 is
/// always enforced.  When the rule is a threshold "stop iff x >= boundary(t)"
/// the boundary can be supplied so the engine applies a within-step
/// bridge-crossing correction (removes the O(sqrt(h)) monitoring bias).
struct PolicyRule {
    std::function<bool(double t, double x)> fires;
    std::function<double(double t)> boundary;   // optional, may be null
    std::string name = "custom";
};

/// Mean, standard error and sample count of a policy evaluation.
struct EvalResult {
    double mean;
    double stderr_;
    std::int64_t n;
};

/// Result of the Euler-vs-closed-form filtering consistency check.
struct EulerFilterReport {
    double max_gap;              // max over paths and times
    double median_path_max_gap;  // median over paths of the per-path max
    std::int64_t n_paths;
    int n_steps;
};

PolicyRule make_policy_tau_b(double a);
PolicyRule make_policy_a0();
PolicyRule make_policy_stop_now();
PolicyRule make_policy_never_stop();
PolicyRule make_policy_from_boundary(std::function<double(double)> b, std::string name);

/// Exact-law simulation under P_pi from (start.t, start.x): theta is drawn
/// Bernoulli(Pi(start.t, start.x, pi)), then X advances by exact Gaussian
/// (theta = 0) or exact bridge-conditional (theta = 1) increments.
std::vector<PathRecord> simulate(const ModelParams& p, TimeState start, const MCConfig& mc);

/// Mean stopped value of a policy, estimated path-by-path with exact
/// transition sampling.  Deterministic for a fixed seed under any thread count.
EvalResult evaluate_policy(const PolicyRule& rule, const ModelParams& p, TimeState start,
                           const MCConfig& mc);

/// Euler-integrates the innovation-driven (X, Pi) pair on common noise and
/// reports the gap to the closed-form belief mapping.
EulerFilterReport euler_filter_check(const ModelParams& p, const MCConfig& mc);

/// Order-independent pairwise sum (used for deterministic accumulation).
double pairwise_sum(const std::vector<double>& v);

} // namespace pinstop
