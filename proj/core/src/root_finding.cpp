#include "dpnls/root_finding.hpp"

#include <cmath>

#include "dpnls/errors.hpp"

namespace dpnls {

double find_root(const std::function<double(double)>& f,
                 double lo, double hi, double tol) {
    if (!(lo < hi)) throw DomainError("find_root: need lo < hi");
    if (!(tol > 0.0)) throw DomainError("find_root: tol must be positive");

    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb)) {
        throw NumericError("find_root: non-finite function value at a bracket endpoint");
    }
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        throw NumericError("find_root: no sign change over the bracket");
    }

    // Brent: b is the best iterate, a the previous one, c keeps the bracket
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = tol * (1.0 + std::abs(b)) * 0.5;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // try inverse quadratic interpolation (secant when a == c)
            double s = fb / fa, p, r;
            if (a == c) {
                p = 2.0 * xm * s;
                r = 1.0 - s;
            } else {
                double u = fa / fc, v = fb / fc;
                p = s * (2.0 * xm * u * (u - v) - (b - a) * (v - 1.0));
                r = (u - 1.0) * (v - 1.0) * (s - 1.0);
            }
            if (p > 0.0) r = -r;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * r - std::abs(tol1 * r), std::abs(e * r))) {
                e = d;
                d = p / r;
            } else {
                d = xm; e = d;  // interpolation rejected: bisect
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if (!std::isfinite(fb)) throw NumericError("find_root: non-finite function value");
    }
    throw NumericError("find_root: iteration cap reached");
}

}  // namespace dpnls
