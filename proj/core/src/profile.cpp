#include "dpnls/profile.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dpnls/errors.hpp"
#include "dpnls/quadrature.hpp"

namespace dpnls {

namespace {

// 15-point Gauss-Legendre on [-1,1]
constexpr int kGLn = 8;  // center + 7 symmetric pairs
constexpr double kGLx[kGLn] = {
    0.0,
    0.2011940939974345, 0.3941513470775634, 0.5709721726085388,
    0.7244177313601701, 0.8482065834104272, 0.9372733924007060,
    0.9879925180204854,
};
constexpr double kGLw[kGLn] = {
    0.2025782419255613,
    0.1984314853271116, 0.1861610000155622, 0.1662692058169939,
    0.1395706779261543, 0.1071592204671719, 0.0703660474881081,
    0.0307532419961173,
};

template <class F>
double gl15(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    double s = kGLw[0] * f(mid);
    for (int i = 1; i < kGLn; ++i) {
        s += kGLw[i] * (f(mid + rad * kGLx[i]) + f(mid - rad * kGLx[i]));
    }
    return s * rad;
}

struct ProfileContext {
    Nonlinearity nl;
    CoefficientSet cs;
    double omega;
    double h;     // squared peak
    double peak;

    // sqrt(W(psi^2)) = psi * sqrt(L(h) - L(psi^2)), kept positive all the
    // way into psi -> peak by the cancellation-free difference
    double sqrtW(double psi) const {
        return psi * std::sqrt(eval_L_diff(nl, h, psi * psi));
    }
    // dx/dv of the peak-regularized parametrization psi = peak - v^2
    double dxdv(double v) const {
        const double psi = peak - v * v;
        return 2.0 * v / sqrtW(psi);
    }
    // dx/dpsi away from the peak
    double dxdpsi(double psi) const { return 1.0 / sqrtW(psi); }
};

}  // namespace

double auto_x_max(double omega) {
    if (omega > 0.0) return std::max(20.0, 24.0 / std::sqrt(omega));
    return 60.0;
}

SolitonProfile build_profile(const Nonlinearity& nl, double omega,
                             int n_samples, double x_max, double quad_tol) {
    (void)quad_tol;  // construction is fixed-order panel quadrature (~1e-12)
    if (!(omega >= 0.0)) throw DomainError("build_profile: omega must be >= 0");
    if (omega == 0.0 && !(nl.q < 5.0)) {
        throw DomainError("build_profile: the zero-frequency soliton needs q < 5");
    }
    if (n_samples < 8) throw DomainError("build_profile: n_samples too small");
    if (x_max <= 0.0) x_max = auto_x_max(omega);

    ProfileContext ctx;
    ctx.nl = nl;
    ctx.cs = coefficients(nl);
    ctx.omega = omega;
    ctx.h = (omega == 0.0) ? h_zero(nl) : h_of_omega(nl, omega);
    ctx.peak = std::sqrt(ctx.h);

    // --- knot ladder for x(phi) ---
    // upper section phi in [peak/2, peak], uniform in v = sqrt(peak - phi)
    // (clusters phi-knots quadratically into the peak, where x(phi) has a
    // square-root flattening); lower section geometric in phi down to
    // 1e-9 * peak (clusters toward phi = 0)
    const int m_up = 80, m_low = 120;
    const double V = std::sqrt(0.5 * ctx.peak);
    std::vector<double> vk(m_up + 1), xk_up(m_up + 1);
    xk_up[0] = 0.0;
    vk[0] = 0.0;
    for (int j = 1; j <= m_up; ++j) {
        vk[j] = V * j / m_up;
        xk_up[j] = xk_up[j - 1] + gl15([&](double v) { return ctx.dxdv(v); }, vk[j - 1], vk[j]);
    }

    const double phi_min = 1e-9 * ctx.peak;
    const double rho = std::pow(2e-9, 1.0 / m_low);  // (phi_min / (peak/2))^(1/m_low)
    std::vector<double> pk, xk_low;
    pk.push_back(0.5 * ctx.peak);
    xk_low.push_back(xk_up[m_up]);
    for (int k = 1; k <= m_low; ++k) {
        const double ph = 0.5 * ctx.peak * std::pow(rho, k);
        const double x_next = xk_low.back() +
            gl15([&](double psi) { return ctx.dxdpsi(psi); }, ph, pk.back());
        pk.push_back(ph);
        xk_low.push_back(x_next);
        if (x_next > x_max + 1.0) break;  // ladder already covers the grid
    }

    // --- invert onto the uniform x-grid ---
    SolitonProfile out;
    out.omega = omega;
    out.peak = ctx.peak;
    out.x.resize(n_samples);
    out.phi.resize(n_samples);
    const double dx = x_max / (n_samples - 1);
    const double x_up_end = xk_up[m_up];
    const double x_low_end = xk_low.back();

    for (int i = 0; i < n_samples; ++i) {
        const double xi = i * dx;
        out.x[i] = xi;
        if (xi == 0.0) {
            out.phi[i] = ctx.peak;
            continue;
        }
        if (xi <= x_up_end) {
            // bracket in the v-knots, then Newton on x(v) - xi
            const auto it = std::upper_bound(xk_up.begin(), xk_up.end(), xi);
            const int j = std::max<int>(1, static_cast<int>(it - xk_up.begin()));
            const int jl = std::min(j, m_up) - 1;
            double v = vk[jl] + (vk[jl + 1] - vk[jl]) *
                       (xi - xk_up[jl]) / (xk_up[jl + 1] - xk_up[jl]);
            for (int it2 = 0; it2 < 4; ++it2) {
                const double xv = xk_up[jl] + gl15([&](double w) { return ctx.dxdv(w); }, vk[jl], v);
                const double step = (xi - xv) / ctx.dxdv(v);
                v += step;
                v = std::clamp(v, vk[jl], vk[jl + 1]);
                if (std::abs(step) < 1e-14 * std::max(1.0, v)) break;
            }
            out.phi[i] = ctx.peak - v * v;
        } else if (xi <= x_low_end) {
            const auto it = std::upper_bound(xk_low.begin(), xk_low.end(), xi);
            const int k = std::max<int>(1, static_cast<int>(it - xk_low.begin()));
            const int kl = std::min<int>(k, static_cast<int>(xk_low.size()) - 1) - 1;
            // phi decreases across [xk_low[kl], xk_low[kl+1]]
            double lo = pk[kl + 1], hi = pk[kl];
            double ph = hi + (lo - hi) * (xi - xk_low[kl]) / (xk_low[kl + 1] - xk_low[kl]);
            for (int it2 = 0; it2 < 4; ++it2) {
                const double xp = xk_low[kl] + gl15([&](double psi) { return ctx.dxdpsi(psi); }, ph, pk[kl]);
                const double step = (xp - xi) * ctx.sqrtW(ph);  // dphi/dx = -sqrtW
                ph += step;
                ph = std::clamp(ph, lo, hi);
                if (std::abs(step) < 1e-15 * ctx.peak) break;
            }
            out.phi[i] = ph;
        } else {
            // beyond the last knot: the known far-field law takes over
            const double phi_end = pk.back();
            if (omega > 0.0) {
                out.phi[i] = phi_end * std::exp(-std::sqrt(omega) * (xi - x_low_end));
            } else {
                out.phi[i] = phi_end * std::pow(xi / x_low_end, -2.0 / (nl.p - 1.0));
            }
        }
    }
    return out;
}

namespace {

// Shared plumbing for the s = h(1-v^2) substitution in the norm integrals:
// the square-root endpoint at s = h becomes a finite value at v = 0, and
// the drop r = v^2 is differenced exactly through log1p.
struct NormIntegrals {
    Nonlinearity nl;
    CoefficientSet cs;
    double omega, h, lp;  // lp = h * L'(h), the leading drop coefficient

    NormIntegrals(const Nonlinearity& nl_, double omega_)
        : nl(nl_), cs(coefficients(nl_)), omega(omega_) {
        h = (omega == 0.0) ? h_zero(nl) : h_of_omega(nl, omega);
        lp = cs.alpha * cs.d1 * std::pow(h, cs.alpha) +
             cs.beta * cs.d2 * std::pow(h, cs.beta);
    }
    double drop(double r) const {  // omega - L(s) = L(h) - L(s) at s = h(1-r)
        return (omega == 0.0) ? eval_L_from_zero(nl, r) : eval_L_drop(nl, h, r);
    }
    // integral of s^{(r-1)/2} / sqrt(omega - L(s)) over s in (0, h)
    double weighted_inverse(double r, double quad_tol) const {
        const double e = 0.5 * (r - 1.0);
        const double he = std::pow(h, e);
        const double at_peak = 2.0 * h * he / std::sqrt(lp);
        auto f = [&](double v) {
            if (v < 1e-40) return at_peak;
            const double rr = v * v;
            const double se = he * std::exp(e * std::log1p(-rr));
            return 2.0 * h * v * se / std::sqrt(drop(rr));
        };
        SingularityHint hint;
        if (omega == 0.0) {
            const double right = 0.5 * cs.alpha - e;
            if (right > 0.0) hint.right_exponent = right;
        }
        return integrate(f, 0.0, 1.0, hint, quad_tol).value;
    }
    double gradient_sq(double quad_tol) const {
        auto f = [&](double v) { return 2.0 * h * v * std::sqrt(drop(v * v)); };
        return integrate(f, 0.0, 1.0, {}, quad_tol).value;
    }
};

}  // namespace

double mass(const Nonlinearity& nl, double omega, double quad_tol) {
    if (!(omega >= 0.0)) throw DomainError("mass: omega must be >= 0");
    if (omega == 0.0 && !(nl.q < 5.0)) throw DomainError("mass: omega = 0 needs q < 5");
    NormIntegrals ni(nl, omega);
    return 0.5 * ni.weighted_inverse(1.0, quad_tol);
}

ProfileNorms norms_and_energy(const Nonlinearity& nl, double omega, double quad_tol) {
    if (!(omega >= 0.0)) throw DomainError("norms_and_energy: omega must be >= 0");
    if (omega == 0.0 && !(nl.q < 5.0)) {
        throw DomainError("norms_and_energy: omega = 0 needs q < 5");
    }
    NormIntegrals ni(nl, omega);
    ProfileNorms n;
    n.grad_sq = ni.gradient_sq(quad_tol);
    n.mass2 = ni.weighted_inverse(1.0, quad_tol);
    n.lp_norm = ni.weighted_inverse(nl.p, quad_tol);
    n.lq_norm = ni.weighted_inverse(nl.q, quad_tol);
    n.energy = 0.5 * n.grad_sq + n.lp_norm / (nl.p + 1.0) - n.lq_norm / (nl.q + 1.0);
    return n;
}

double scaling_second_derivative_at_zero(const Nonlinearity& nl, double quad_tol) {
    if (!(nl.q < 5.0)) {
        throw DomainError("scaling_second_derivative_at_zero: requires q < 5");
    }
    const CoefficientSet cs = coefficients(nl);
    const ProfileNorms n = norms_and_energy(nl, 0.0, quad_tol);
    return n.grad_sq + cs.alpha * (cs.alpha - 1.0) * n.lp_norm / (nl.p + 1.0)
                     - cs.beta * (cs.beta - 1.0) * n.lq_norm / (nl.q + 1.0);
}

}  // namespace dpnls
