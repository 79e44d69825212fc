#include "pinstop/belief.hpp"
#include "pinstop/core_math.hpp"
#include "pinstop/errors.hpp"

#include <cmath>

namespace pinstop {

namespace {

void require_time(double t, const char* who) {
    if (!(t >= 0.0 && t < 1.0))
        throw DomainError(std::string(who) + ": requires 0 <= t < 1");
}

void require_prior_below_one(double pi, const char* who) {
    if (!(pi >= 0.0 && pi < 1.0))
        throw DomainError(std::string(who) + ": the P0 reformulation requires pi in [0,1)");
}

} // namespace

double log_likelihood_ratio(double t, double x, double a) {
    require_time(t, "likelihood_ratio");
    const double omt = 1.0 - t;
    const double d = x - a * t;
    return -0.5 * std::log(omt) - 0.5 * a * a - d * d / (2.0 * omt);
}

double likelihood_ratio(double t, double x, double a) {
    return std::exp(log_likelihood_ratio(t, x, a));
}

PosteriorPoint posterior(double t, double x, const ModelParams& p) {
    require_time(t, "posterior");
    if (!(p.pi >= 0.0 && p.pi <= 1.0))
        throw DomainError("posterior: pi must lie in [0,1]");
    if (p.pi == 0.0) return {t, x, p.pi, 0.0};
    if (p.pi == 1.0) return {t, x, p.pi, 1.0};
    // log-odds keeps the update well-conditioned when L is denormal (t near 1)
    // or pi is near an endpoint.
    const double log_odds = std::log(p.pi / (1.0 - p.pi)) + log_likelihood_ratio(t, x, p.a);
    double value;
    if (log_odds >= 0.0)
        value = 1.0 / (1.0 + std::exp(-log_odds));
    else {
        const double e = std::exp(log_odds);
        value = e / (1.0 + e);
    }
    return {t, x, p.pi, value};
}

double signal_to_noise(double t, double x, double a) {
    require_time(t, "signal_to_noise");
    return (a - x) / (1.0 - t) - a;
}

double payoff_G(double t, double x, const ModelParams& p) {
    require_time(t, "payoff_G");
    require_prior_below_one(p.pi, "payoff_G");
    const double odds = p.pi / (1.0 - p.pi);
    return x * (1.0 + odds * likelihood_ratio(t, x, p.a));
}

double indicator_H(double t, double x, const ModelParams& p) {
    require_time(t, "indicator_H");
    require_prior_below_one(p.pi, "indicator_H");
    const double odds = p.pi / (1.0 - p.pi);
    return p.a - odds * (x - p.a) * likelihood_ratio(t, x, p.a) / (1.0 - t);
}

double critical_time(const ModelParams& p, double tol) {
    if (p.a == 0.0)
        throw DomainError("critical_time: requires a != 0");
    if (!(p.pi > 0.0 && p.pi < 1.0))
        throw DomainError("critical_time: requires 0 < pi < 1");

    // inf_x H for a > 0 (sup_x H for a < 0), located by golden section over
    // the bracket a +/- 6 sqrt(1-t); the extremum of (x-a)L^a lies within a
    // few bridge standard deviations of a.
    const bool positive_drift = p.a > 0.0;
    auto extremum = [&](double t) {
        const double w = 6.0 * std::sqrt(1.0 - t);
        if (positive_drift) {
            // H dips below a only for x > a
            double xs = minimize_golden([&](double x) { return indicator_H(t, x, p); },
                                        p.a, p.a + w, 1e-13);
            return indicator_H(t, xs, p);
        }
        double xs = minimize_golden([&](double x) { return -indicator_H(t, x, p); },
                                    p.a - w, p.a, 1e-13);
        return -indicator_H(t, xs, p);
    };

    const double t_lo = 1e-9, t_hi = 1.0 - 1e-9;
    const double f_lo = extremum(t_lo);
    const double f_hi = extremum(t_hi);
    if ((f_lo > 0.0) == (f_hi > 0.0))
        throw NotFound("critical_time: extremal H does not change sign on (0,1)");
    return find_root(extremum, Bracket{t_lo, t_hi}, tol);
}

} // namespace pinstop
