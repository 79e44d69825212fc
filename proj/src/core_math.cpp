#include "pinstop/core_math.hpp"
#include "pinstop/errors.hpp"

#include <cmath>
#include <limits>
#include <mutex>

namespace pinstop {

namespace {

constexpr double kSqrt2Pi = 2.506628274631000502415765284811;
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

// W. J. Cody's rational Chebyshev approximation of erf/erfc/erfcx
// (netlib SPECFUN). Max relative error ~1e-16 in double precision.
// jint: 0 -> erf(x), 1 -> erfc(x), 2 -> exp(x*x)*erfc(x).
double calerf(double x, int jint) {
    static const double a[5] = {3.16112374387056560e0, 1.13864154151050156e2,
                                3.77485237685302021e2, 3.20937758913846947e3,
                                1.85777706184603153e-1};
    static const double b[4] = {2.36012909523441209e1, 2.44024637934444173e2,
                                1.28261652607737228e3, 2.84423683343917062e3};
    static const double c[9] = {5.64188496988670089e-1, 8.88314979438837594e0,
                                6.61191906371416295e1,  2.98635138197400131e2,
                                8.81952221241769090e2,  1.71204761263407058e3,
                                2.05107837782607147e3,  1.23033935479799725e3,
                                2.15311535474403846e-8};
    static const double d[8] = {1.57449261107098347e1, 1.17693950891312499e2,
                                5.37181101862009858e2, 1.62138957456669019e3,
                                3.29079923573345963e3, 4.36261909014324716e3,
                                3.43936767414372164e3, 1.23033935480374942e3};
    static const double p[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                                1.25781726111229246e-1, 1.60837851487422766e-2,
                                6.58749161529837803e-4, 1.63153871373020978e-2};
    static const double q[5] = {2.56852019228982242e0,  1.87295284992346047e0,
                                5.27905102951428412e-1, 6.05183413124413191e-2,
                                2.33520497626869185e-3};

    const double sqrpi = 5.6418958354775628695e-1;
    const double thresh = 0.46875;
    const double xbig = 26.543;
    const double xhuge = 6.71e7;
    const double xmax = 2.53e307;

    double y = std::fabs(x);
    double result;

    if (y <= thresh) {
        // erf for |x| <= 0.46875
        double ysq = (y > 1.11e-16) ? y * y : 0.0;
        double xnum = a[4] * ysq;
        double xden = ysq;
        for (int i = 0; i < 3; ++i) {
            xnum = (xnum + a[i]) * ysq;
            xden = (xden + b[i]) * ysq;
        }
        result = x * (xnum + a[3]) / (xden + b[3]);
        if (jint != 0) result = 1.0 - result;
        if (jint == 2) result *= std::exp(ysq);
        return result;
    }

    if (y <= 4.0) {
        // erfc for 0.46875 < |x| <= 4
        double xnum = c[8] * y;
        double xden = y;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + c[i]) * y;
            xden = (xden + d[i]) * y;
        }
        result = (xnum + c[7]) / (xden + d[7]);
        if (jint != 2) {
            double ysq = std::trunc(y * 16.0) / 16.0;
            double del = (y - ysq) * (y + ysq);
            result *= std::exp(-ysq * ysq) * std::exp(-del);
        }
    } else {
        // erfc for |x| > 4
        result = 0.0;
        if (y >= xbig) {
            if (jint != 2 || y >= xmax) {
                result = 0.0;
                goto fixup;
            }
            if (y >= xhuge) {
                result = sqrpi / y;
                goto fixup;
            }
        }
        {
            double ysq = 1.0 / (y * y);
            double xnum = p[5] * ysq;
            double xden = ysq;
            for (int i = 0; i < 4; ++i) {
                xnum = (xnum + p[i]) * ysq;
                xden = (xden + q[i]) * ysq;
            }
            result = ysq * (xnum + p[4]) / (xden + q[4]);
            result = (sqrpi - result) / y;
            if (jint != 2) {
                double ysq2 = std::trunc(y * 16.0) / 16.0;
                double del = (y - ysq2) * (y + ysq2);
                result *= std::exp(-ysq2 * ysq2) * std::exp(-del);
            }
        }
    }

fixup:
    if (jint == 0) {
        result = (0.5 - result) + 0.5;
        if (x < 0.0) result = -result;
    } else if (jint == 1) {
        if (x < 0.0) result = 2.0 - result;
    } else {
        if (x < 0.0) {
            if (x < -xbig) return std::numeric_limits<double>::infinity();
            double ysq = std::trunc(x * 16.0) / 16.0;
            double del = (x - ysq) * (x + ysq);
            y = std::exp(ysq * ysq) * std::exp(del);
            result = (y + y) - result;
        }
    }
    return result;
}

} // namespace

double norm_pdf(double y) {
    return std::exp(-0.5 * y * y) / kSqrt2Pi;
}

double norm_cdf(double y) {
    return 0.5 * calerf(-y * kInvSqrt2, 1);
}

double erfcx(double x) {
    return calerf(x, 2);
}

double norm_cdf_scaled(double y) {
    return 0.5 * calerf(-y * kInvSqrt2, 2);
}

double find_root(const std::function<double(double)>& f, Bracket b, double tol) {
    // Brent's method.
    constexpr int kMaxIter = 200;
    double a = b.lo, bb = b.hi;
    double fa = f(a), fb = f(bb);
    if (fa == 0.0) return a;
    if (fb == 0.0) return bb;
    if ((fa > 0.0) == (fb > 0.0))
        throw NoSignChange("find_root: f has the same sign at both bracket endpoints");

    double c = a, fc = fa;
    double d = bb - a, e = d;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa;
            d = bb - a; e = d;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = bb; bb = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(bb) + 0.5 * tol;
        double xm = 0.5 * (c - bb);
        if (std::fabs(xm) <= tol1 || fb == 0.0 || std::fabs(fb) <= tol) return bb;

        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double s = fb / fa;
            double pp, qq;
            if (a == c) {
                pp = 2.0 * xm * s;
                qq = 1.0 - s;
            } else {
                double q0 = fa / fc, r0 = fb / fc;
                pp = s * (2.0 * xm * q0 * (q0 - r0) - (bb - a) * (r0 - 1.0));
                qq = (q0 - 1.0) * (r0 - 1.0) * (s - 1.0);
            }
            if (pp > 0.0) qq = -qq;
            pp = std::fabs(pp);
            if (2.0 * pp < std::min(3.0 * xm * qq - std::fabs(tol1 * qq), std::fabs(e * qq))) {
                e = d; d = pp / qq;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = bb; fa = fb;
        bb += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(bb);
    }
    throw MaxIterations("find_root: not converged in 200 iterations");
}

double minimize_golden(const std::function<double(double)>& f, double lo, double hi,
                       double xtol) {
    constexpr double kInvPhi = 0.61803398874989484820;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

AlphaConstant solve_alpha() {
    static std::once_flag flag;
    static double cached = 0.0;
    std::call_once(flag, [] {
        auto g = [](double al) {
            return kSqrt2Pi * (1.0 - al * al) * std::exp(0.5 * al * al) * norm_cdf(al) - al;
        };
        cached = find_root(g, Bracket{0.0, 1.0}, 1e-14);
    });
    return AlphaConstant{cached};
}

double alpha() {
    return solve_alpha().value;
}

} // namespace pinstop
