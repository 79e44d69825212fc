#include "pinstop/bounds.hpp"
#include "pinstop/belief.hpp"
#include "pinstop/core_math.hpp"
#include "pinstop/errors.hpp"
#include "pinstop/rng.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace pinstop {

namespace {

// First-passage time of a driftless Brownian path (from 0) over
// c(s) = a(1-s) - x + alpha sqrt(1-t-s), capped at 1-t.  Euler grid with the
// exponential bridge-crossing correction between grid times; plain Euler
// systematically underestimates passage.
double passage_time_capped(double t, double x, double a, int n_steps, PathRng& rng,
                           bool negate) {
    const double horizon = 1.0 - t;
    const double al = alpha();
    auto c = [&](double s) {
        const double rem = horizon - s;
        return a * (1.0 - s) - x + al * std::sqrt(std::max(rem, 0.0));
    };
    double w = 0.0;
    double s0 = 0.0;
    double c0 = c(0.0);
    if (c0 <= 0.0) return 0.0;
    // sqrt-spaced grid (uniform in sqrt(horizon - s)) so the boundary's
    // terminal square-root singularity is piecewise linear over each step
    for (int k = 0; k < n_steps; ++k) {
        const double frac = 1.0 - static_cast<double>(k + 1) / n_steps;
        const double s1 = (k + 1 == n_steps) ? horizon : horizon * (1.0 - frac * frac);
        const double h = s1 - s0;
        double z = rng.next_normal();
        if (negate) z = -z;
        const double w1 = w + std::sqrt(h) * z;
        const double c1 = c(s1);
        const double d0 = c0 - w, d1 = c1 - w1;
        if (d1 <= 0.0) return s1;
        // both endpoints below the boundary: bridge crossing probability for
        // the linear-in-step local boundary approximation
        const double p_cross = std::exp(-2.0 * d0 * d1 / h);
        if (rng.next_uniform() < p_cross) return s0 + h * d0 / (d0 + d1);
        w = w1;
        s0 = s1;
        c0 = c1;
    }
    return horizon;
}

} // namespace

double upper_bound(double t, double x, const ModelParams& p) {
    if (!(t < 1.0)) throw DomainError("upper_bound: requires t < 1");
    const double P = posterior(t, x, p).value;
    return (1.0 - P) * (x + std::max(p.a, 0.0)) + P * value_known_pinning(TimeState{t, x}, p.a);
}

std::pair<double, double> mean_stopped_value_p0(double t, double x, double a,
                                                const MCConfig& mc) {
    if (!(t < 1.0)) throw DomainError("mean_stopped_value_p0: requires t < 1");
    if (mc.n_paths < 1 || mc.n_steps < 1)
        throw ConfigError("mean_stopped_value_p0: invalid MCConfig");
    if (a == 0.0) return {x, 0.0};                       // X is a P0-martingale
    if (x >= boundary_b(t, a)) return {x, 0.0};          // passage at s = 0

    std::vector<double> taus(static_cast<std::size_t>(mc.n_paths));
    const int nthreads = std::min<std::int64_t>(worker_threads(), mc.n_paths);
    std::vector<std::thread> pool;
    const std::int64_t chunk = (mc.n_paths + nthreads - 1) / nthreads;
    auto work = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            PathRng rng(mc.seed, static_cast<std::uint64_t>(i));
            double tau = passage_time_capped(t, x, a, mc.n_steps, rng, false);
            if (mc.antithetic) {
                PathRng rng2(mc.seed, static_cast<std::uint64_t>(i));
                tau = 0.5 * (tau + passage_time_capped(t, x, a, mc.n_steps, rng2, true));
            }
            taus[static_cast<std::size_t>(i)] = tau;
        }
    };
    if (nthreads <= 1) {
        work(0, mc.n_paths);
    } else {
        for (int wk = 0; wk < nthreads; ++wk) {
            const std::int64_t lo = wk * chunk;
            const std::int64_t hi = std::min<std::int64_t>(mc.n_paths, lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    const auto n = static_cast<double>(mc.n_paths);
    const double mean_tau = pairwise_sum(taus) / n;
    std::vector<double> sq(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double d = taus[i] - mean_tau;
        sq[i] = d * d;
    }
    const double var = mc.n_paths > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
    const double se_tau = std::sqrt(var / n);
    return {x + a * mean_tau, std::fabs(a) * se_tau};
}

BoundPair lower_bound(double t, double x, const ModelParams& p, const MCConfig& mc) {
    if (!(t < 1.0)) throw DomainError("lower_bound: requires t < 1");
    const double v1 = value_known_pinning(TimeState{t, x}, p.a);
    if (p.pi == 1.0) return {v1, 0.0, v1};
    const double P = posterior(t, x, p).value;
    const auto [e0, se] = mean_stopped_value_p0(t, x, p.a, mc);
    const double lower = (1.0 - P) * e0 + P * v1;
    return {lower, (1.0 - P) * se, upper_bound(t, x, p)};
}

} // namespace pinstop
