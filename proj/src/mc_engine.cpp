#include "pinstop/mc_engine.hpp"
#include "pinstop/belief.hpp"
#include "pinstop/core_math.hpp"
#include "pinstop/errors.hpp"
#include "pinstop/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace pinstop {

int worker_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("PINSTOP_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

double pairwise_sum(const std::vector<double>& v) {
    std::function<double(std::size_t, std::size_t)> rec =
        [&](std::size_t lo, std::size_t hi) -> double {
        if (hi - lo <= 8) {
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += v[i];
            return s;
        }
        std::size_t mid = lo + (hi - lo) / 2;
        return rec(lo, mid) + rec(mid, hi);
    };
    return v.empty() ? 0.0 : rec(0, v.size());
}

namespace {

void validate(const MCConfig& mc) {
    if (mc.n_paths < 1) throw ConfigError("MCConfig: n_paths must be >= 1");
    if (mc.n_steps < 1) throw ConfigError("MCConfig: n_steps must be >= 1");
}

// Fill out[i] = fn(i) for i in [0, n), split across worker threads.
// Results land at fixed indices, so the partitioning cannot affect them.
template <typename Fn>
void parallel_fill(std::int64_t n, std::vector<double>& out, Fn fn) {
    out.resize(static_cast<std::size_t>(n));
    const int nthreads = std::min<std::int64_t>(worker_threads(), n);
    if (nthreads <= 1) {
        for (std::int64_t i = 0; i < n; ++i) out[i] = fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    const std::int64_t chunk = (n + nthreads - 1) / nthreads;
    for (int w = 0; w < nthreads; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::int64_t i = lo; i < hi; ++i) out[i] = fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

EvalResult summarize(const std::vector<double>& samples) {
    const auto n = static_cast<std::int64_t>(samples.size());
    const double mean = pairwise_sum(samples) / static_cast<double>(n);
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double d = samples[i] - mean;
        sq[i] = d * d;
    }
    const double var = n > 1 ? pairwise_sum(sq) / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

// One exact transition.  theta = 0: Gaussian increment with drift a.
// theta = 1: bridge-conditional increment toward the pin at t = 1.
double step_exact(int theta, double a, double t0, double t1, double x, double z) {
    const double h = t1 - t0;
    if (theta == 0) return x + a * h + std::sqrt(h) * z;
    if (t1 >= 1.0) return a;  // the bridge pins exactly
    const double frac = h / (1.0 - t0);
    const double mean = x + (a - x) * frac;
    const double var = h * (1.0 - t1) / (1.0 - t0);
    return var > 0.0 ? mean + std::sqrt(var) * z : mean;
}

// Stopped value of one trajectory under the rule, exact transitions.
// The within-step crossing correction applies only to threshold rules that
// expose their boundary and only while both endpoints sit strictly below it.
double run_policy_path(const PolicyRule& rule, const ModelParams& p, TimeState start,
                       int n_steps, PathRng& rng, bool negate) {
    const double u_theta = rng.next_uniform();
    const double pi_start = posterior(start.t, start.x, p).value;
    const int theta = u_theta < pi_start ? 1 : 0;

    double t = start.t, x = start.x;
    if (rule.fires && rule.fires(t, x)) return x;

    // sqrt-spaced grid: uniform in sqrt(1-t), so the terminal boundary
    // singularity ~ sqrt(1-t) is piecewise linear over each step and the
    // bridge-crossing formula stays accurate up to t = 1
    const double span = 1.0 - start.t;
    for (int k = 0; k < n_steps; ++k) {
        const double frac = 1.0 - static_cast<double>(k + 1) / n_steps;
        const double t1 = (k + 1 == n_steps) ? 1.0 : 1.0 - span * frac * frac;
        double z = rng.next_normal();
        if (negate) z = -z;
        const double x1 = step_exact(theta, p.a, t, t1, x, z);

        if (rule.boundary) {
            // continuous-passage semantics: every stopped path is awarded a
            // boundary value, whether the crossing shows at a grid point or
            // is recovered by the bridge-crossing correction.  Awarding the
            // raw overshoot x1 at grid firings would bias the estimate up.
            const double b0 = rule.boundary(t);
            const double b1 = rule.boundary(std::min(t1, 1.0));
            const double d0 = b0 - x, d1 = b1 - x1;
            if (d1 <= 0.0) {
                const double denom = (x1 - x) - (b1 - b0);
                const double u = denom > 0.0 ? std::min(d0 / denom, 1.0) : 1.0;
                return b0 + u * (b1 - b0);
            }
            const double h = t1 - t;
            const double p_cross = std::exp(-2.0 * d0 * d1 / h);
            if (rng.next_uniform() < p_cross)
                return b0 + (b1 - b0) * (d0 / (d0 + d1));
            if (t1 >= 1.0) return x1;  // horizon reached below the boundary
        } else {
            if (t1 >= 1.0) return x1;  // forced stop at the horizon
            if (rule.fires && rule.fires(t1, x1)) return x1;
        }
        t = t1;
        x = x1;
    }
    return x;
}

} // namespace

PolicyRule make_policy_tau_b(double a) {
    return {[a](double t, double x) { return policy_tau_b(TimeState{t, x}, a); },
            [a](double t) { return boundary_b(std::min(t, 1.0), a); },
            "tau-b"};
}

PolicyRule make_policy_a0() {
    return make_policy_tau_b(0.0);
}

PolicyRule make_policy_stop_now() {
    return {[](double, double) { return true; }, nullptr, "now"};
}

PolicyRule make_policy_never_stop() {
    return {[](double, double) { return false; }, nullptr, "never"};
}

PolicyRule make_policy_from_boundary(std::function<double(double)> b, std::string name) {
    auto fires = [b](double t, double x) { return t >= 1.0 || x >= b(t); };
    return {fires, b, std::move(name)};
}

std::vector<PathRecord> simulate(const ModelParams& p, TimeState start, const MCConfig& mc) {
    validate(mc);
    if (!(start.t < 1.0)) throw ConfigError("simulate: start.t must be < 1");

    const double pi_start = posterior(start.t, start.x, p).value;
    const double h = (1.0 - start.t) / mc.n_steps;

    std::vector<PathRecord> out(static_cast<std::size_t>(mc.n_paths));
    std::vector<double> dummy;
    parallel_fill(mc.n_paths, dummy, [&](std::int64_t i) {
        PathRng rng(mc.seed, static_cast<std::uint64_t>(i));
        PathRecord rec;
        rec.theta = rng.next_uniform() < pi_start ? 1 : 0;
        rec.times.reserve(mc.n_steps + 1);
        rec.x.reserve(mc.n_steps + 1);
        rec.belief.reserve(mc.n_steps + 1);

        double t = start.t, x = start.x;
        rec.times.push_back(t);
        rec.x.push_back(x);
        rec.belief.push_back(posterior(t, x, p).value);
        for (int k = 0; k < mc.n_steps; ++k) {
            const double t1 = (k + 1 == mc.n_steps) ? 1.0 : start.t + (k + 1) * h;
            x = step_exact(rec.theta, p.a, t, t1, x, rng.next_normal());
            t = t1;
            rec.times.push_back(t);
            rec.x.push_back(x);
            if (t < 1.0) {
                rec.belief.push_back(posterior(t, x, p).value);
            } else {
                // t = 1 limit of the mapping: 1 on the pin, 0 elsewhere
                rec.belief.push_back(x == p.a ? 1.0 : 0.0);
            }
        }
        out[static_cast<std::size_t>(i)] = std::move(rec);
        return 0.0;
    });
    return out;
}

EvalResult evaluate_policy(const PolicyRule& rule, const ModelParams& p, TimeState start,
                           const MCConfig& mc) {
    validate(mc);
    if (!(start.t < 1.0)) throw ConfigError("evaluate_policy: start.t must be < 1");

    std::vector<double> samples;
    parallel_fill(mc.n_paths, samples, [&](std::int64_t i) {
        const auto stream = static_cast<std::uint64_t>(i);
        PathRng rng(mc.seed, stream);
        double v = run_policy_path(rule, p, start, mc.n_steps, rng, false);
        if (mc.antithetic) {
            PathRng rng2(mc.seed, stream);
            v = 0.5 * (v + run_policy_path(rule, p, start, mc.n_steps, rng2, true));
        }
        return v;
    });
    return summarize(samples);
}

EulerFilterReport euler_filter_check(const ModelParams& p, const MCConfig& mc) {
    validate(mc);
    // Euler on the innovation representation, integrated on [0, 0.99]; the
    // drift of the bridge hypothesis is singular at t = 1.
    const double t_end = 0.99;
    const double h = t_end / mc.n_steps;
    const double sqh = std::sqrt(h);

    std::vector<double> path_max;
    parallel_fill(mc.n_paths, path_max, [&](std::int64_t i) {
        PathRng rng(mc.seed, static_cast<std::uint64_t>(i));
        double x = 0.0, belief = p.pi, gap = 0.0;
        for (int k = 0; k < mc.n_steps; ++k) {
            const double t = k * h;
            const double rho = signal_to_noise(t, x, p.a);
            const double db = sqh * rng.next_normal();
            const double x1 = x + (p.a + belief * rho) * h + db;
            double b1 = belief + rho * belief * (1.0 - belief) * db;
            b1 = std::clamp(b1, 0.0, 1.0);
            x = x1;
            belief = b1;
            gap = std::max(gap, std::fabs(belief - posterior(t + h, x, p).value));
        }
        return gap;
    });

    std::vector<double> sorted = path_max;
    std::sort(sorted.begin(), sorted.end());
    const double max_gap = sorted.back();
    const std::size_t n = sorted.size();
    const double median = (n % 2 == 1) ? sorted[n / 2]
                                       : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    return {max_gap, median, mc.n_paths, mc.n_steps};
}

} // namespace pinstop
