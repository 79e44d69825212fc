#pragma once

#include <functional>

namespace pinstop {

/// Root bracket. Callers guarantee lo < hi and a sign change of the target
/// function across [lo, hi] at call time.
struct Bracket {
    double lo;
    double hi;
};

/// The threshold constant of the classical Brownian bridge stopping problem,
/// the unique positive solution of sqrt(2*pi)*(1-a^2)*exp(a^2/2)*Phi(a) = a.
struct AlphaConstant {
    double value;
};

/// Standard normal density.
double norm_pdf(double y);

/// Standard normal distribution function Phi(y), accurate to ~1e-15
/// (Cody's rational erfc approximation).
double norm_cdf(double y);

/// exp(y*y/2) * Phi(y), evaluated without overflow/underflow for any y.
/// Equals 0.5 * erfcx(-y/sqrt(2)).
double norm_cdf_scaled(double y);

/// Scaled complementary error function exp(x^2) * erfc(x).
double erfcx(double x);

/// Bracketing hybrid root finder (bisection with secant/inverse-quadratic
/// acceleration). Returns r with |f(r)| <= tol or bracket width <= tol.
/// Throws NoSignChange if f(lo) and f(hi) agree in sign, MaxIterations if
/// the iteration cap (200) is exceeded.
double find_root(const std::function<double(double)>& f, Bracket b, double tol = 1e-12);

/// Golden-section minimiser on [lo, hi] for a unimodal function.
/// Returns the abscissa of the minimum to absolute tolerance xtol.
double minimize_golden(const std::function<double(double)>& f, double lo, double hi,
                       double xtol = 1e-12);

/// The alpha constant (~0.839924). Computed once, thread-safe, then cached.
AlphaConstant solve_alpha();

/// Convenience accessor for solve_alpha().value.
double alpha();

} // namespace pinstop
