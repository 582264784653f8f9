#pragma once

// Independent reference computations for the test suites.  The profile
// oracle integrates the wave equation as an initial-value problem from the
// peak, which shares no code with the library's first-integral inversion.

#include <cmath>
#include <cstddef>
#include <vector>

#include "dpnls/model.hpp"

namespace oracles {

// phi'' = omega*phi + |phi|^{p-1}phi - |phi|^{q-1}phi, phi(0) = peak,
// phi'(0) = 0, integrated with classical RK4 at step dx.  Returns phi at
// the requested increasing x >= 0.  Only trustworthy while the growing
// mode exp(+sqrt(omega) x) has not amplified rounding above the target
// accuracy, i.e. for moderate x.
inline std::vector<double> shoot_profile(const dpnls::Nonlinearity& nl, double omega,
                                         double peak, const std::vector<double>& xs,
                                         double dx = 1e-4) {
    auto acc = [&](double y) {
        const double ay = std::abs(y);
        return omega * y + std::copysign(std::pow(ay, nl.p), y) -
               std::copysign(std::pow(ay, nl.q), y);
    };
    std::vector<double> out;
    out.reserve(xs.size());
    double x = 0.0, y = peak, v = 0.0;
    auto step = [&](double h) {
        const double k1y = v, k1v = acc(y);
        const double k2y = v + 0.5 * h * k1v, k2v = acc(y + 0.5 * h * k1y);
        const double k3y = v + 0.5 * h * k2v, k3v = acc(y + 0.5 * h * k2y);
        const double k4y = v + h * k3v, k4v = acc(y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        x += h;
    };
    for (double target : xs) {
        while (x + dx <= target) step(dx);
        if (target > x) step(target - x);
        out.push_back(y);
    }
    return out;
}

// Trapezoid rule on a uniform grid.
inline double trapezoid(const std::vector<double>& f, double dx) {
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * dx;
}

}  // namespace oracles
