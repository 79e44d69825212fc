#include "pinstop/vi_solver.hpp"
#include "pinstop/belief.hpp"
#include "pinstop/core_math.hpp"
#include "pinstop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pinstop {

namespace {

void validate_grid(const GridSpec& g, double a) {
    if (!(g.x_min < g.x_max)) throw ConfigError("GridSpec: x_min must be < x_max");
    if (g.nx < 3) throw ConfigError("GridSpec: nx must be >= 3");
    if (g.nt < 2) throw ConfigError("GridSpec: nt must be >= 2");
    if (!(g.t_cutoff > 0.0 && g.t_cutoff < 1.0))
        throw ConfigError("GridSpec: t_cutoff must lie in (0,1)");
    if (g.x_min > a - 4.0 || g.x_max < a + 4.0)
        throw ConfigError("GridSpec: grid must contain [a-4, a+4]");
}

// nt steps on [0, t_cutoff]: uniform body, geometrically shrinking steps
// toward the cutoff (the obstacle develops an O(sqrt(1-t)) spike there).
std::vector<double> build_time_grid(int nt, double t_cutoff) {
    const double dt_uniform_guess = t_cutoff / nt;
    const double dt_min = std::min(1.0 - t_cutoff, dt_uniform_guess);
    const double ratio = 1.35;

    std::vector<double> tail_dts;  // backward from the cutoff
    double dt = dt_min;
    double tail_len = 0.0;
    while (dt < dt_uniform_guess && static_cast<int>(tail_dts.size()) < nt / 2) {
        tail_dts.push_back(dt);
        tail_len += dt;
        dt *= ratio;
    }
    const int n_uniform = nt - static_cast<int>(tail_dts.size());
    const double body = t_cutoff - tail_len;

    std::vector<double> times;
    times.reserve(nt + 1);
    for (int k = 0; k <= n_uniform; ++k)
        times.push_back(body * k / n_uniform);
    double t = body;
    for (auto it = tail_dts.rbegin(); it != tail_dts.rend(); ++it) {
        t += *it;
        times.push_back(t);
    }
    times.back() = t_cutoff;
    return times;
}

} // namespace

GridSpec default_grid(double a) {
    GridSpec g;
    g.x_min = -(std::fabs(a) + 6.0);
    g.x_max = std::fabs(a) + 6.0;
    return g;
}

double ValueSurface::value_at(double t, double x) const {
    const int nx = static_cast<int>(xs.size());
    const auto kt = static_cast<int>(
        std::upper_bound(times.begin(), times.end(), t) - times.begin());
    const int k1 = std::clamp(kt, 1, static_cast<int>(times.size()) - 1);
    const int k0 = k1 - 1;
    const double dx = xs[1] - xs[0];
    const int i0 = std::clamp(static_cast<int>((x - xs[0]) / dx), 0, nx - 2);
    const double fx = std::clamp((x - xs[i0]) / dx, 0.0, 1.0);
    const double ft =
        std::clamp((t - times[k0]) / (times[k1] - times[k0]), 0.0, 1.0);
    const double v0 = (1.0 - fx) * at_v(k0, i0) + fx * at_v(k0, i0 + 1);
    const double v1 = (1.0 - fx) * at_v(k1, i0) + fx * at_v(k1, i0 + 1);
    return (1.0 - ft) * v0 + ft * v1;
}

ValueSurface solve(const ModelParams& p, const GridSpec& g, double psor_tol, double omega) {
    if (!(p.pi > 0.0 && p.pi < 1.0))
        throw ConfigError("vi_solver::solve: requires pi in (0,1)");
    validate_grid(g, p.a);
    if (!(omega > 0.0 && omega < 2.0))
        throw ConfigError("vi_solver::solve: omega must lie in (0,2)");

    constexpr int kPsorCap = 10000;

    ValueSurface s;
    s.grid = g;
    s.params = p;
    s.times = build_time_grid(g.nt, g.t_cutoff);
    s.xs.resize(g.nx);
    const double dx = (g.x_max - g.x_min) / (g.nx - 1);
    for (int i = 0; i < g.nx; ++i) s.xs[i] = g.x_min + i * dx;

    const int nt = static_cast<int>(s.times.size()) - 1;
    const std::size_t total = static_cast<std::size_t>(nt + 1) * g.nx;
    s.w.assign(total, 0.0);
    s.v.assign(total, 0.0);
    s.obstacle.assign(total, 0.0);
    s.contact.assign(total, 0);

    // obstacle on the whole grid
    for (int k = 0; k <= nt; ++k) {
        const double t = s.times[k];
        for (int i = 0; i < g.nx; ++i)
            s.obstacle[static_cast<std::size_t>(k) * g.nx + i] = payoff_G(t, s.xs[i], p);
    }

    // terminal slice
    for (int i = 0; i < g.nx; ++i)
        s.w[static_cast<std::size_t>(nt) * g.nx + i] =
            s.obstacle[static_cast<std::size_t>(nt) * g.nx + i];

    // spatial operator coefficients, L = 1/2 dxx + a dx (central differences)
    const double diff = 0.5 / (dx * dx);
    const double adv = p.a / (2.0 * dx);
    const double c_lo = diff - adv;
    const double c_mid = -2.0 * diff;
    const double c_hi = diff + adv;

    std::vector<double> rhs(g.nx), wk(g.nx);

    for (int k = nt - 1; k >= 0; --k) {
        const double dt = s.times[k + 1] - s.times[k];
        // Rannacher start-up: the two steps next to the cutoff run fully implicit
        const double theta = (k >= nt - 2) ? 1.0 : 0.5;

        const double* wprev = &s.w[static_cast<std::size_t>(k + 1) * g.nx];
        const double* gk = &s.obstacle[static_cast<std::size_t>(k) * g.nx];
        double* wout = &s.w[static_cast<std::size_t>(k) * g.nx];

        for (int i = 1; i < g.nx - 1; ++i) {
            const double lw =
                c_lo * wprev[i - 1] + c_mid * wprev[i] + c_hi * wprev[i + 1];
            rhs[i] = wprev[i] + (1.0 - theta) * dt * lw;
        }

        // implicit side: (I - theta dt L) w = rhs, w >= g
        const double m_lo = -theta * dt * c_lo;
        const double m_mid = 1.0 - theta * dt * c_mid;
        const double m_hi = -theta * dt * c_hi;

        for (int i = 0; i < g.nx; ++i) wk[i] = std::max(wprev[i], gk[i]);
        wk[0] = gk[0];
        wk[g.nx - 1] = gk[g.nx - 1];

        int iter = 0;
        for (; iter < kPsorCap; ++iter) {
            double err = 0.0;
            for (int i = 1; i < g.nx - 1; ++i) {
                const double y = (rhs[i] - m_lo * wk[i - 1] - m_hi * wk[i + 1]) / m_mid;
                const double relaxed = wk[i] + omega * (y - wk[i]);
                const double proj = std::max(relaxed, gk[i]);
                err = std::max(err, std::fabs(proj - wk[i]));
                wk[i] = proj;
            }
            if (err < psor_tol) break;
        }
        if (iter == kPsorCap)
            throw NonConvergence("vi_solver::solve: PSOR exceeded iteration cap at slice " +
                                 std::to_string(k));
        std::copy(wk.begin(), wk.end(), wout);
    }

    // contact mask and assembled value.  A bare gap test would also flag
    // continuation nodes whose true gap is below the solver tolerance (deep
    // out-of-the-money zones near the terminal time), so the degenerate set
    // is classified by the sign of H: the stopping region is contained in
    // {H <= 0}, and where the gap is resolvable the two tests agree.
    for (int k = 0; k <= nt; ++k) {
        const double t = s.times[k];
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t idx = static_cast<std::size_t>(k) * g.nx + i;
            const double gap = s.w[idx] - s.obstacle[idx];
            // the gap is only meaningful above the scheme's own error level
            const double gap_tol =
                std::max(psor_tol, 1e-7 * (1.0 + std::fabs(s.obstacle[idx])));
            s.contact[idx] =
                (k == nt || (gap <= gap_tol && indicator_H(t, s.xs[i], p) <= 0.0))
                    ? 1
                    : 0;
            const double P = posterior(t, s.xs[i], p).value;
            s.v[idx] = (1.0 - P) * s.w[idx];
        }
    }
    return s;
}

StoppingRegion extract_region(const ValueSurface& s) {
    const int nx = static_cast<int>(s.xs.size());
    const int nslices = static_cast<int>(s.times.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    // short contact runs attached to a lateral edge come from the W = G clamp
    // there, not from the obstacle; genuine regions reaching the edge are wide
    const int edge_margin = std::max(4, nx / 20);

    StoppingRegion r;
    r.times = s.times;
    r.intervals.resize(nslices);
    r.too_good_boundary.assign(nslices, nan);
    r.stop_loss_boundary.assign(nslices, nan);

    // slices next to the cutoff sit in the implicit start-up zone against the
    // singular terminal data; contact there is unreliable (islands and holes
    // that shrink under refinement), so slices whose remaining time is within
    // an order of magnitude of the cutoff gap are not reported
    int k_last = std::max(0, nslices - 4);
    const double t_cut = s.times.back();
    while (k_last > 0 && 1.0 - s.times[k_last] < 10.0 * (1.0 - t_cut)) --k_last;

    for (int k = 0; k <= k_last; ++k) {
        auto in_contact = [&](int i) { return s.at_contact(k, i); };
        // refine an interval edge between contact node ic and free node
        // ifree by interpolating the W - G excess
        auto refine = [&](int ic, int ifree) {
            const double fc = s.at_w(k, ic) - s.at_g(k, ic);
            const double ff = s.at_w(k, ifree) - s.at_g(k, ifree);
            if (ff <= fc) return s.xs[ic];
            const double frac = std::clamp((0.0 - fc) / (ff - fc), 0.0, 1.0);
            return s.xs[ic] + frac * (s.xs[ifree] - s.xs[ic]);
        };

        // maximal contact runs as node index ranges, edge-clamp runs dropped
        std::vector<std::pair<int, int>> runs;
        int i = 0;
        while (i < nx) {
            if (!in_contact(i)) { ++i; continue; }
            int j = i;
            while (j + 1 < nx && in_contact(j + 1)) ++j;
            const bool touches_edge = (i == 0) || (j == nx - 1);
            bool artifact = touches_edge && j - i + 1 < edge_margin;
            if (touches_edge && !artifact) {
                // a numerically-zero posterior throughout an edge-touching run
                // means the pinning hypothesis carries no weight there: the
                // value and the payoff agree only to roundoff, while the true
                // continuation premium is strictly positive off the terminal
                // slice, so such runs are not part of the stopping region
                double p_max = 0.0;
                for (int m = i; m <= j; ++m)
                    p_max = std::max(p_max,
                                     posterior(s.times[k], s.xs[m], s.params).value);
                artifact = p_max < 1e-12;
            }
            if (!artifact) runs.emplace_back(i, j);
            i = j + 1;
        }

        // merge runs across holes the scheme cannot resolve: every node of the
        // hole shows a W - G excess at discretization-error scale and lies in
        // {H <= 0}; such holes appear near the terminal time where the scheme
        // error on the singular obstacle exceeds the true (zero) gap
        auto unresolvable = [&](int lo, int hi) {
            for (int m = lo; m <= hi; ++m) {
                const double g = s.at_g(k, m);
                if (s.at_w(k, m) - g > 5e-4 * (1.0 + std::fabs(g))) return false;
                if (indicator_H(s.times[k], s.xs[m], s.params) > 0.0) return false;
            }
            return true;
        };
        std::vector<std::pair<int, int>> merged;
        for (const auto& run : runs) {
            if (!merged.empty() && unresolvable(merged.back().second + 1, run.first - 1))
                merged.back().second = run.second;
            else
                merged.push_back(run);
        }

        std::vector<StopInterval> ivals;
        for (const auto& [lo, hi] : merged) {
            StopInterval iv;
            iv.lo = (lo > 0) ? refine(lo, lo - 1) : s.xs[0];
            iv.hi = (hi < nx - 1) ? refine(hi, hi + 1) : s.xs[nx - 1];
            ivals.push_back(iv);
        }
        if (!ivals.empty()) {
            r.too_good_boundary[k] = ivals.back().lo;
            if (ivals.size() >= 2)
                r.stop_loss_boundary[k] = ivals[ivals.size() - 2].lo;
        }
        r.intervals[k] = std::move(ivals);
    }
    return r;
}

std::vector<std::uint8_t> never_stop_mask(const ModelParams& p, const GridSpec& g) {
    if (!(p.pi > 0.0 && p.pi < 1.0))
        throw ConfigError("never_stop_mask: requires pi in (0,1)");
    validate_grid(g, p.a);
    const auto times = build_time_grid(g.nt, g.t_cutoff);
    const double dx = (g.x_max - g.x_min) / (g.nx - 1);
    std::vector<std::uint8_t> mask(times.size() * g.nx, 0);
    for (std::size_t k = 0; k < times.size(); ++k)
        for (int i = 0; i < g.nx; ++i)
            mask[k * g.nx + i] =
                indicator_H(times[k], g.x_min + i * dx, p) > 0.0 ? 1 : 0;
    return mask;
}

} // namespace pinstop
