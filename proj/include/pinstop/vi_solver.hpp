#pragma once

#include "pinstop/classical_bridge.hpp"

#include <cstdint>
#include <vector>

namespace pinstop {

/// Space-time grid for the finite-difference solve.  Time runs on [0,
/// t_cutoff] with geometric step refinement toward the cutoff; space is
/// uniform on [x_min, x_max].
struct GridSpec {
    double x_min = -6.0;
    double x_max = 6.0;
    int nx = 800;
    int nt = 800;
    double t_cutoff = 1.0 - 1e-4;
};

/// Default grid for a given pin level: x in +/-(|a| + 6), 800 x 800.
GridSpec default_grid(double a);

/// Solved surface.  w is the P0-weighted value W of the reformulated
/// problem, v = (1 - Pi) * w the assembled value, obstacle the payoff G.
/// Slices are row-major: index k * nx + i for time node k, space node i.
struct ValueSurface {
    GridSpec grid;
    ModelParams params;
    std::vector<double> times;     // nt+1 ascending time nodes, last = t_cutoff
    std::vector<double> xs;        // nx space nodes
    std::vector<double> w;
    std::vector<double> v;
    std::vector<double> obstacle;
    std::vector<std::uint8_t> contact;

    double at_w(int k, int i) const { return w[static_cast<std::size_t>(k) * xs.size() + i]; }
    double at_v(int k, int i) const { return v[static_cast<std::size_t>(k) * xs.size() + i]; }
    double at_g(int k, int i) const { return obstacle[static_cast<std::size_t>(k) * xs.size() + i]; }
    bool at_contact(int k, int i) const {
        return contact[static_cast<std::size_t>(k) * xs.size() + i] != 0;
    }
    /// v interpolated bilinearly at (t, x).
    double value_at(double t, double x) const;
};

/// A closed stop interval in x on one time slice.
struct StopInterval {
    double lo;
    double hi;
};

/// Per-slice stop intervals and the derived boundary curves.  The upper
/// curve (lower edge of the topmost interval) is the too-good-to-persist
/// boundary; when a second interval exists below it, its lower edge is the
/// stop-loss boundary.  Absent curve values are NaN.
struct StoppingRegion {
    std::vector<double> times;
    std::vector<std::vector<StopInterval>> intervals;
    std::vector<double> too_good_boundary;
    std::vector<double> stop_loss_boundary;
};

/// Backward theta-scheme (Crank-Nicolson with a two-step implicit-Euler
/// Rannacher start-up from the cutoff) for the linear complementarity problem
/// with generator dt + 1/2 dxx + a dx and obstacle payoff_G, solved slice by
/// slice with projected SOR.  Lateral condition W = G; terminal slice
/// W(t_cutoff, .) = G(t_cutoff, .).
ValueSurface solve(const ModelParams& p, const GridSpec& g, double psor_tol = 1e-9,
                   double omega = 1.5);

/// Scans the contact mask into maximal intervals per slice and refines the
/// interval edges by linear interpolation of the W - G sign change.
/// Contact islands confined to the few cells adjacent to a lateral edge are
/// artifacts of the W = G clamp and are dropped.
StoppingRegion extract_region(const ValueSurface& s);

/// Mask of grid nodes where H > 0 (stopping never optimal); row-major like
/// ValueSurface slices.
std::vector<std::uint8_t> never_stop_mask(const ModelParams& p, const GridSpec& g);

} // namespace pinstop
