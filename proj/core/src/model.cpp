#include "dpnls/model.hpp"

#include <cmath>

#include "dpnls/errors.hpp"
#include "dpnls/root_finding.hpp"

namespace dpnls {

namespace {

void require_valid(const Nonlinearity& nl) {
    if (!(nl.p > 1.0) || !(nl.q > nl.p)) {
        throw DomainError("model: exponents must satisfy 1 < p < q");
    }
}

void require_positive(double s) {
    if (!(s > 0.0)) throw DomainError("model: s must be positive");
}

}  // namespace

CoefficientSet coefficients(const Nonlinearity& nl) {
    require_valid(nl);
    const double p = nl.p, q = nl.q;
    CoefficientSet cs;
    cs.alpha = (p - 1.0) / 2.0;
    cs.beta = (q - 1.0) / 2.0;
    cs.c1 = -(5.0 - p) / (p + 1.0);
    cs.c2 = (5.0 - q) / (q + 1.0);
    cs.d1 = -2.0 / (p + 1.0);
    cs.d2 = 2.0 / (q + 1.0);
    cs.r1 = cs.c1 + cs.d1 * (q - p);
    cs.r2 = cs.c1 + 2.0 * cs.d1 * (q - p);
    return cs;
}

double pow_diff(double a, double b, double e) {
    if (a == b) return 0.0;
    if (b == 0.0) return std::pow(a, e);
    if (a == 0.0) return -std::pow(b, e);
    if (a < b) return -pow_diff(b, a, e);
    // a^e - b^e = a^e * (1 - (b/a)^e) = a^e * (-expm1(e*log(b/a)))
    const double ratio = b / a;
    double elog = (ratio > 0.5) ? e * std::log1p((b - a) / a) : e * std::log(ratio);
    return std::pow(a, e) * (-std::expm1(elog));
}

double eval_K(const Nonlinearity& nl, double s) {
    require_positive(s);
    const CoefficientSet c = coefficients(nl);
    return c.c1 * std::pow(s, c.alpha) + c.c2 * std::pow(s, c.beta);
}

double eval_L(const Nonlinearity& nl, double s) {
    require_positive(s);
    const CoefficientSet c = coefficients(nl);
    return c.d1 * std::pow(s, c.alpha) + c.d2 * std::pow(s, c.beta);
}

double eval_W(const Nonlinearity& nl, double s, double omega) {
    return omega * s - eval_L(nl, s) * s;
}

double eval_Wprime(const Nonlinearity& nl, double s, double omega) {
    require_positive(s);
    const CoefficientSet c = coefficients(nl);
    return omega - c.d1 * (1.0 + c.alpha) * std::pow(s, c.alpha)
                 - c.d2 * (1.0 + c.beta) * std::pow(s, c.beta);
}

double eval_K1(const Nonlinearity& nl, double s) {
    require_positive(s);
    const CoefficientSet c = coefficients(nl);
    return -c.r1 * std::pow(s, c.alpha) - c.c2 * std::pow(s, c.beta);
}

double eval_K2(const Nonlinearity& nl, double s) {
    require_positive(s);
    const CoefficientSet c = coefficients(nl);
    return c.r2 * std::pow(s, c.alpha) + c.c2 * std::pow(s, c.beta);
}

double eval_K_diff(const Nonlinearity& nl, double h, double s) {
    const CoefficientSet c = coefficients(nl);
    return c.c1 * pow_diff(h, s, c.alpha) + c.c2 * pow_diff(h, s, c.beta);
}

double eval_L_diff(const Nonlinearity& nl, double h, double s) {
    const CoefficientSet c = coefficients(nl);
    return c.d1 * pow_diff(h, s, c.alpha) + c.d2 * pow_diff(h, s, c.beta);
}

namespace {

// h^e - (h*(1-r))^e = h^e * (-expm1(e*log1p(-r))), exact in r
double pow_drop(double h, double r, double e) {
    return std::pow(h, e) * (-std::expm1(e * std::log1p(-r)));
}

}  // namespace

double eval_K_drop(const Nonlinearity& nl, double h, double r) {
    require_positive(h);
    const CoefficientSet c = coefficients(nl);
    return c.c1 * pow_drop(h, r, c.alpha) + c.c2 * pow_drop(h, r, c.beta);
}

double eval_L_drop(const Nonlinearity& nl, double h, double r) {
    require_positive(h);
    const CoefficientSet c = coefficients(nl);
    return c.d1 * pow_drop(h, r, c.alpha) + c.d2 * pow_drop(h, r, c.beta);
}

double eval_L_from_zero(const Nonlinearity& nl, double r) {
    const CoefficientSet c = coefficients(nl);
    const double h0 = h_zero(nl);
    // -L(s) = |d1| s^alpha (1 - (s/h0)^{beta-alpha}) with s = h0*(1-r)
    const double s_alpha = std::pow(h0, c.alpha) *
                           std::exp(c.alpha * std::log1p(-r));
    return -c.d1 * s_alpha * (-std::expm1((c.beta - c.alpha) * std::log1p(-r)));
}

double h_zero(const Nonlinearity& nl) {
    require_valid(nl);
    const double ba = (nl.q - nl.p) / 2.0;  // beta - alpha
    return std::pow((nl.q + 1.0) / (nl.p + 1.0), 1.0 / ba);
}

CriticalPoints critical_points(const Nonlinearity& nl) {
    require_valid(nl);
    if (!(nl.q < 5.0)) {
        throw DomainError("critical_points: requires q < 5");
    }
    const CoefficientSet c = coefficients(nl);
    const double ba = c.beta - c.alpha;
    const double ab = c.alpha / c.beta;
    CriticalPoints cp;
    cp.h0 = h_zero(nl);
    cp.s0 = std::pow(-c.c1 / c.c2, 1.0 / ba);
    cp.s1 = std::pow(-c.r1 / c.c2, 1.0 / ba);
    cp.s2 = std::pow(-c.r2 / c.c2, 1.0 / ba);
    cp.t0 = std::pow(-c.c1 / c.c2 * ab, 1.0 / ba);
    cp.t1 = std::pow(-c.r1 / c.c2 * ab, 1.0 / ba);
    cp.t2 = std::pow(-c.r2 / c.c2 * ab, 1.0 / ba);
    cp.omega0 = eval_L(nl, cp.s0);
    return cp;
}

double h_of_omega(const Nonlinearity& nl, double omega, double root_tol) {
    require_valid(nl);
    if (!(omega >= 0.0)) throw DomainError("h_of_omega: omega must be >= 0");
    const double h0 = h_zero(nl);
    if (omega == 0.0) return h0;

    double upper = 2.0 * h0;
    for (int i = 0; i < 2048 && eval_L(nl, upper) <= omega; ++i) upper *= 2.0;
    if (eval_L(nl, upper) <= omega) {
        throw NumericError("h_of_omega: bracket growth failed");
    }
    auto g = [&](double s) { return eval_L(nl, s) - omega; };
    double h = find_root(g, h0, upper, root_tol);
    // polish with one Newton step so the residual meets the contract even
    // when the bracket tolerance stopped early in h
    const CoefficientSet c = coefficients(nl);
    double lp = c.d1 * c.alpha * std::pow(h, c.alpha - 1.0)
              + c.d2 * c.beta * std::pow(h, c.beta - 1.0);
    if (lp > 0.0) h -= g(h) / lp;
    return h;
}

OrderingFlags ordering_flags(const Nonlinearity& nl) {
    require_valid(nl);
    if (!(nl.q < 5.0)) throw DomainError("ordering_flags: requires q < 5");
    const double p = nl.p, q = nl.q;
    const CriticalPoints cp = critical_points(nl);

    // exponent side of each equivalence
    const bool ineq[4] = {p + q > 6.0, q > -3.0 * p + 8.0, p >= 7.0 / 3.0, p >= 9.0 / 5.0};
    // point-comparison side; margin() flags comparisons too close to rounding
    const double pts[4][2] = {{cp.h0, cp.t0}, {cp.h0, cp.t1}, {cp.t1, cp.s0}, {cp.t2, cp.s0}};
    const bool strict[4] = {true, true, false, false};  // h0<t_j strict; s0<=t_j closed

    bool flags[4];
    for (int i = 0; i < 4; ++i) {
        const double x = pts[i][0], y = pts[i][1];
        const bool from_points = strict[i] ? (x < y) : (y <= x);
        const double band = 1e-12 * std::max({std::abs(x), std::abs(y), 1.0});
        if (std::abs(x - y) <= band) {
            // boundary within rounding: the exponent inequality is exact
            flags[i] = ineq[i];
        } else if (from_points != ineq[i]) {
            throw InternalError("ordering_flags: point comparison disagrees with exponent inequality");
        } else {
            flags[i] = from_points;
        }
    }
    return OrderingFlags{flags[0], flags[1], flags[2], flags[3]};
}

}  // namespace dpnls
