#include "dpnls/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "dpnls/errors.hpp"
#include "dpnls/quadrature.hpp"
#include "dpnls/root_finding.hpp"
#include "dpnls/special_functions.hpp"

namespace dpnls {

namespace {

constexpr double kBand = 1e-12;  // absolute tolerance on regime-boundary expressions

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

// 1 - sigma^e without cancellation as sigma -> 1
double one_minus_pow(double sigma, double e) {
    return -std::expm1(e * std::log(sigma));
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(15);
    os << x;
    return os.str();
}

}  // namespace

double dmass(const Nonlinearity& nl, double omega, double quad_tol, double root_tol) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw DomainError("dmass: omega must be positive and finite");
    }
    const double h = h_of_omega(nl, omega, root_tol);
    const double wp = eval_Wprime(nl, h, omega);
    if (!(wp < 0.0)) {
        throw InternalError("dmass: W'(h) >= 0 at h = " + fmt(h));
    }
    // split the integral at s = h/2.  The lower part is evaluated straight in
    // s, so the boundary layer where L(h) - L(s) saturates to omega sits
    // against the zero endpoint (node offsets there are exact);
    // omega + |L(s)| is an addition of positive terms for s below the zero of
    // L, so the denominator carries no cancellation noise.  The upper part
    // uses s = h(1 - v^2), which turns the square-root endpoint at s = h into
    // a finite limit at v = 0.
    const CoefficientSet cs = coefficients(nl);
    const double Kh = eval_K(nl, h);
    auto tail = [&](double sigma) {
        const double s = h * sigma;
        const double ld = omega - eval_L(nl, s);
        return h * (Kh - eval_K(nl, s)) / (ld * std::sqrt(ld));
    };
    const double lower = integrate(tail, 0.0, 0.5, {}, quad_tol).value;

    const double ha = std::pow(h, cs.alpha), hb = std::pow(h, cs.beta);
    const double kp = cs.alpha * cs.c1 * ha + cs.beta * cs.c2 * hb;  // h K'(h)
    const double lp = cs.alpha * cs.d1 * ha + cs.beta * cs.d2 * hb;  // h L'(h)
    const double at_peak = 2.0 * h * kp / (lp * std::sqrt(lp));
    auto peak = [&](double v) {
        if (v < 1e-40) return at_peak;
        const double r = v * v;
        const double kd = eval_K_drop(nl, h, r);
        const double ld = eval_L_drop(nl, h, r);
        return 2.0 * h * v * kd / (ld * std::sqrt(ld));
    };
    const double upper = integrate(peak, 0.0, std::sqrt(0.5), {}, quad_tol).value;
    return -(lower + upper) / (4.0 * wp);
}

double f_family(const Nonlinearity& nl, double h, int j, double quad_tol) {
    const CoefficientSet cs = coefficients(nl);
    if (!(nl.q < 5.0)) throw DomainError("f_family: requires q < 5");
    const double h0 = h_zero(nl);
    if (!(h > h0)) throw DomainError("f_family: h must exceed the degenerate point");
    if (j < 0 || j > 2) throw DomainError("f_family: index must be 0, 1, or 2");
    const double H = std::pow(h, cs.beta - cs.alpha);

    // integrand core num_j/den^(j+3/2) with A = 1-sigma^alpha, B = 1-sigma^beta;
    // shared by both halves of the split below
    auto value_at = [&](double A, double B, double den) {
        const double sq = std::sqrt(den);
        switch (j) {
            case 0:
                return (cs.c1 * A + cs.c2 * H * B) / (den * sq);
            case 1:
                return B * (-cs.r1 * A - cs.c2 * H * B) / (den * den * sq);
            default:
                return B * B * (cs.r2 * A + cs.c2 * H * B) / (den * den * den * sq);
        }
    };

    // Tail half, sigma in (0, 1/2), evaluated straight from sigma: close to
    // the degenerate point the denominator flattens to den0 = d1 + d2 H -> 0+
    // inside a layer at sigma ~ (den0/|d1|)^(1/alpha), and putting that layer
    // against the zero endpoint keeps the node offsets exact.  den0 B +
    // |d1| (sigma^alpha - sigma^beta) adds non-negative terms only, so the
    // flat region carries no per-node cancellation noise.
    const double den0 = cs.d1 + cs.d2 * H;
    auto tail = [&](double sigma) {
        const double ls = std::log(sigma);
        const double A = -std::expm1(cs.alpha * ls);
        const double B = -std::expm1(cs.beta * ls);
        const double gap =  // sigma^alpha - sigma^beta >= 0
            std::exp(cs.alpha * ls) * (-std::expm1((cs.beta - cs.alpha) * ls));
        const double den = den0 * B - cs.d1 * gap;
        return value_at(A, B, den);
    };
    const double lower = integrate(tail, 0.0, 0.5, {}, quad_tol).value;

    // Peak half via sigma = 1 - v^2, which regularizes the square-root
    // endpoint at sigma -> 1 into a finite limit at v = 0.
    const double D = cs.d1 * cs.alpha + cs.d2 * H * cs.beta;
    double at_peak;  // limit of the substituted integrand at v -> 0
    switch (j) {
        case 0:
            at_peak = 2.0 * (cs.c1 * cs.alpha + cs.c2 * H * cs.beta) / (D * std::sqrt(D));
            break;
        case 1:
            at_peak = 2.0 * cs.beta * (-cs.r1 * cs.alpha - cs.c2 * H * cs.beta) /
                      (D * D * std::sqrt(D));
            break;
        default:
            at_peak = 2.0 * cs.beta * cs.beta * (cs.r2 * cs.alpha + cs.c2 * H * cs.beta) /
                      (D * D * D * std::sqrt(D));
            break;
    }
    auto peak = [&](double v) {
        if (v < 1e-40) return at_peak;
        const double ls = std::log1p(-v * v);  // log sigma
        const double A = -std::expm1(cs.alpha * ls);
        const double B = -std::expm1(cs.beta * ls);
        const double den = cs.d1 * A + cs.d2 * H * B;
        return 2.0 * v * value_at(A, B, den);
    };
    const double upper = integrate(peak, 0.0, std::sqrt(0.5), {}, quad_tol).value;
    return lower + upper;
}

ZeroFrequencyLimit zero_frequency_limit(const Nonlinearity& nl) {
    const CoefficientSet cs = coefficients(nl);
    (void)cs;
    if (!(nl.q < 5.0)) throw DomainError("zero_frequency_limit: requires q < 5");
    const double p = nl.p, q = nl.q;
    ZeroFrequencyLimit out;
    if (p > 7.0 / 3.0 - kBand) {
        out.kind = LimitKind::negative_infinity;
        out.value = -std::numeric_limits<double>::infinity();
        out.sign = -1;
        out.c_pq = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    const double delta = (7.0 - 3.0 * p) / (2.0 * (q - p));
    const double c_pq = std::sqrt(2.0 * M_PI) *
                        std::pow((q + 1.0) / (p + 1.0), delta) *
                        std::pow(p + 1.0, 1.5) / (q - p) / 4.0;
    out.kind = LimitKind::finite;
    out.c_pq = c_pq;
    out.value = c_pq * gamma_ratio(delta, delta - 0.5);
    const double b = 2.0 * p + q - 7.0;
    out.sign = (std::abs(b) <= kBand) ? 0 : (b > 0.0 ? -1 : 1);
    return out;
}

bool h_limit_divergent(const Nonlinearity& nl) {
    coefficients(nl);  // validate 1 < p < q
    return nl.p > 7.0 / 3.0 - kBand;
}

double h_limit_closed_form(const Nonlinearity& nl) {
    if (h_limit_divergent(nl)) {
        throw DomainError("h_limit_closed_form: integral diverges for this exponent pair");
    }
    const double p = nl.p, q = nl.q;
    const double delta = (7.0 - 3.0 * p) / (2.0 * (q - p));
    return 2.0 * std::sqrt(M_PI) * gamma_ratio(delta, delta - 0.5);
}

double h_limit_integral(const Nonlinearity& nl, double quad_tol) {
    if (!(nl.q < 5.0)) throw DomainError("h_limit_integral: requires q < 5");
    if (h_limit_divergent(nl)) {
        throw DomainError("h_limit_integral: integral diverges for this exponent pair");
    }
    const CoefficientSet cs = coefficients(nl);
    const double a = cs.alpha, b = cs.beta;

    // lower half in s: the strong s^(-3a/2) singularity sits at s = 0,
    // where nodes can approach to within denormal range
    auto f_low = [&](double s) {
        const double sa = one_minus_pow(s, a);
        const double sb = one_minus_pow(s, b);
        const double diff = std::exp(a * std::log(s)) * one_minus_pow(s, b - a);
        return (-(2.0 - a) * sa + (2.0 - b) * sb) / (diff * std::sqrt(diff));
    };
    SingularityHint hint_low;
    hint_low.left_exponent = 1.5 * a;
    const double low = integrate(f_low, 0.0, 0.5, hint_low, quad_tol).value;

    // upper half with s = 1 - v^2: the square-root endpoint becomes regular
    const double at_one = 2.0 * (2.0 - a - b) / std::sqrt(b - a);
    auto f_up = [&](double v) {
        if (v < 1e-40) return at_one;
        const double ls = std::log1p(-v * v);  // log s
        const double sa = -std::expm1(a * ls);
        const double sb = -std::expm1(b * ls);
        const double diff = std::exp(a * ls) * (-std::expm1((b - a) * ls));
        return 2.0 * v * (-(2.0 - a) * sa + (2.0 - b) * sb) / (diff * std::sqrt(diff));
    };
    const double up = integrate(f_up, 0.0, std::sqrt(0.5), {}, quad_tol).value;
    return low + up;
}

Regime decide_regime(const Nonlinearity& nl) {
    coefficients(nl);  // validate 1 < p < q
    const double p = nl.p, q = nl.q;
    if (q > 5.0 - kBand) return Regime::q_ge_5_unstable_all;
    const bool p_ge_73 = p > 7.0 / 3.0 - kBand;
    const bool p_ge_95 = p > 9.0 / 5.0 - kBand;
    const bool sum_gt_7 = 2.0 * p + q > 7.0 + kBand;
    if (p_ge_73) return Regime::sharp_threshold;
    if (p_ge_95) return sum_gt_7 ? Regime::sharp_threshold : Regime::stable_all;
    return sum_gt_7 ? Regime::unstable_small_with_gap : Regime::stable_small_with_gap;
}

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

std::optional<Threshold> threshold(const Nonlinearity& nl, const Tolerances& tols) {
    coefficients(nl);  // validate 1 < p < q
    if (decide_regime(nl) != Regime::sharp_threshold) return std::nullopt;

    const CriticalPoints cp = critical_points(nl);
    const double eps_b = 1e-6 * (cp.s0 - cp.h0);
    const double lo = cp.h0 * (1.0 + eps_b);
    const double hi = cp.s0;
    auto f0 = [&](double h) { return f_family(nl, h, 0, tols.quad_tol); };
    const double flo = f0(lo), fhi = f0(hi);
    if (!(flo < 0.0 && fhi > 0.0)) {
        throw NumericError("threshold: bracket [" + fmt(lo) + ", " + fmt(hi) +
                           "] does not straddle a sign change (" + fmt(flo) +
                           ", " + fmt(fhi) + ")");
    }
    Threshold th;
    th.z_star = find_root(f0, lo, hi, tols.root_tol);
    th.omega_star = eval_L(nl, th.z_star);
    const double d = 1e-4 * th.omega_star;
    th.curvature_estimate =
        (dmass(nl, th.omega_star + d, tols.quad_tol, tols.root_tol) -
         dmass(nl, th.omega_star - d, tols.quad_tol, tols.root_tol)) / (2.0 * d);
    return th;
}

StabilityReport classify(const Nonlinearity& nl, const Tolerances& tols) {
    StabilityReport rep;
    rep.regime = decide_regime(nl);

    const bool sub5 = (rep.regime != Regime::q_ge_5_unstable_all);
    double omega_scale;
    if (sub5) {
        const CriticalPoints cp = critical_points(nl);
        rep.omega0 = cp.omega0;
        omega_scale = cp.omega0;
    } else {
        omega_scale = eval_L(nl, 4.0 * h_zero(nl));
    }

    // log-spaced frequency scan from 1e-3 to 10^0.5 times the scale
    const int n_scan = 24;
    rep.numeric_sign_scan.reserve(n_scan);
    for (int i = 0; i < n_scan; ++i) {
        const double e = -3.0 + 3.5 * i / (n_scan - 1);
        const double w = omega_scale * std::pow(10.0, e);
        ScanPoint pt;
        pt.omega = w;
        pt.sign = sgn(dmass(nl, w, tols.quad_tol, tols.root_tol));
        rep.numeric_sign_scan.push_back(pt);
    }

    switch (rep.regime) {
        case Regime::q_ge_5_unstable_all:
            rep.theory_intervals.push_back({0.0, kInf, Verdict::unstable});
            return rep;
        case Regime::stable_all:
            rep.theory_intervals.push_back({0.0, kInf, Verdict::stable});
            return rep;
        case Regime::sharp_threshold: {
            const CriticalPoints cp = critical_points(nl);
            const double eps_b = 1e-6 * (cp.s0 - cp.h0);
            auto f0 = [&](double h) { return f_family(nl, h, 0, tols.quad_tol); };
            const double lo = cp.h0 * (1.0 + eps_b);
            const double flo = f0(lo), fhi = f0(cp.s0);
            if (!(flo < 0.0 && fhi > 0.0)) {
                throw NumericError("classify: threshold bracket failed (" +
                                   fmt(flo) + ", " + fmt(fhi) + ")");
            }
            const double z = find_root(f0, lo, cp.s0, tols.root_tol);
            rep.omega_star = eval_L(nl, z);
            rep.theory_intervals.push_back({0.0, *rep.omega_star, Verdict::unstable_incl_endpoint});
            rep.theory_intervals.push_back({*rep.omega_star, kInf, Verdict::stable});
            return rep;
        }
        default:
            break;
    }

    // gap regimes: locate the frequency where the numeric sign first changes
    const double omega0 = *rep.omega0;
    const int near_zero_sign =
        (rep.regime == Regime::unstable_small_with_gap) ? -1 : 1;
    auto dm = [&](double w) { return dmass(nl, w, tols.quad_tol, tols.root_tol); };

    int flip = -1;  // first index with a sign differing from its predecessor
    for (int i = 1; i < n_scan; ++i) {
        if (rep.numeric_sign_scan[i].sign != rep.numeric_sign_scan[i - 1].sign) {
            flip = i;
            break;
        }
    }

    double mu;
    if (rep.numeric_sign_scan[0].sign != near_zero_sign) {
        // the whole scan starts on the far side: bracket from a frequency
        // small enough that the asymptotic sign must hold
        const double tiny = omega0 * 1e-9;
        const double d_tiny = dm(tiny);
        if (sgn(d_tiny) != near_zero_sign) {
            throw InternalError("classify: near-zero slope sign " + fmt(d_tiny) +
                                " contradicts the regime prediction");
        }
        mu = find_root(dm, tiny, rep.numeric_sign_scan[0].omega, tols.root_tol);
    } else if (flip >= 0) {
        mu = find_root(dm, rep.numeric_sign_scan[flip - 1].omega,
                       rep.numeric_sign_scan[flip].omega, tols.root_tol);
    } else {
        if (rep.regime == Regime::unstable_small_with_gap) {
            throw InternalError("classify: no sign change found although the "
                                "slope must turn positive beyond omega0");
        }
        // all scanned slopes already match the stable sign: report the last
        // scan frequency below omega0 (a lower bound, not a root)
        mu = 0.0;
        for (const ScanPoint& pt : rep.numeric_sign_scan) {
            if (pt.omega < omega0) mu = pt.omega;
        }
    }
    if (mu > omega0) mu = omega0;
    rep.mu_estimate = mu;

    const Verdict small_side = (rep.regime == Regime::unstable_small_with_gap)
                                   ? Verdict::unstable
                                   : Verdict::stable;
    rep.theory_intervals.push_back({0.0, mu, small_side});
    rep.theory_intervals.push_back({mu, omega0, Verdict::theory_silent});
    rep.theory_intervals.push_back({omega0, kInf, Verdict::stable});
    return rep;
}

AuditRecord sign_pattern_audit(const Nonlinearity& nl, double quad_tol) {
    const double p = nl.p, q = nl.q;
    if (!(q < 5.0)) throw DomainError("sign_pattern_audit: requires q < 5");
    if (!(p >= 9.0 / 5.0 - kBand) || !(p < 7.0 / 3.0 - kBand)) {
        throw DomainError("sign_pattern_audit: p must lie in the transitional window [9/5, 7/3)");
    }
    const CriticalPoints cp = critical_points(nl);
    const double span = cp.s0 - cp.h0;
    auto f0 = [&](double h) { return f_family(nl, h, 0, quad_tol); };
    auto f1 = [&](double h) { return f_family(nl, h, 1, quad_tol); };

    AuditRecord rec;

    {  // the limiting sign at the degenerate endpoint follows 2p+q vs 7
        const double b = 2.0 * p + q - 7.0;
        const int want = (std::abs(b) <= kBand) ? 0 : (b > 0.0 ? -1 : 1);
        const double v = f0(cp.h0 + 1e-4 * span);
        const bool pass = (want == 0) ? true : (sgn(v) == want);
        rec.items.push_back({"near_h0_sign",
                             pass,
                             "F0(h0 + 1e-4 span) = " + fmt(v) +
                                 ", expected sign " + fmt(want)});
    }

    {  // derivative blow-up at the endpoint: divided differences must grow
        bool pass = true;
        std::string wit;
        double prev = -kInf;
        for (int k = 0; k <= 6; ++k) {
            const double eps = 1e-2 * span * std::pow(2.0, -k);
            const double d = (f0(cp.h0 + 2.0 * eps) - f0(cp.h0 + eps)) / eps;
            if (!(d > prev)) pass = false;
            wit += (k ? ", " : "") + fmt(d);
            prev = d;
        }
        rec.items.push_back({"divided_difference_growth", pass, "D_k = " + wit});
    }

    {  // the slope proxy F1 changes sign at most once, and only + to -
        const int n = 200;
        int changes = 0;
        bool order_ok = true;
        int last = 0;
        for (int k = 0; k < n; ++k) {
            const double h = cp.h0 + (k + 0.5) * span / n;
            const int s = sgn(f1(h));
            if (s == 0) continue;
            if (last != 0 && s != last) {
                ++changes;
                if (!(last > 0 && s < 0)) order_ok = false;
            }
            last = s;
        }
        const bool pass = (changes <= 1) && order_ok;
        rec.items.push_back({"f0prime_single_sign_change", pass,
                             fmt(changes) + " sign change(s) in F1 on (h0, s0)"});
    }

    {  // once F0 turns positive it stays positive out to 3 s0
        const int n = 400;
        int first_pos = -1;
        bool pass = true;
        double bad_h = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double h = cp.h0 + k * (3.0 * cp.s0 - cp.h0) / n;
            const double v = f0(h);
            if (first_pos < 0) {
                if (v > 0.0) first_pos = k;
            } else if (!(v > 0.0)) {
                pass = false;
                bad_h = h;
                break;
            }
        }
        if (first_pos < 0) pass = false;
        rec.items.push_back({"positivity_persists", pass,
                             pass ? "no relapse after first positive value"
                                  : "F0 relapsed at h = " + fmt(bad_h)});
    }

    rec.all_pass = true;
    for (const AuditItem& it : rec.items) rec.all_pass = rec.all_pass && it.pass;
    return rec;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::q_ge_5_unstable_all: return "q_ge_5_unstable_all";
        case Regime::sharp_threshold: return "sharp_threshold";
        case Regime::stable_all: return "stable_all";
        case Regime::unstable_small_with_gap: return "unstable_small_with_gap";
        case Regime::stable_small_with_gap: return "stable_small_with_gap";
    }
    return "unknown";
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::stable: return "stable";
        case Verdict::unstable: return "unstable";
        case Verdict::unstable_incl_endpoint: return "unstable_incl_endpoint";
        case Verdict::theory_silent: return "theory_silent";
    }
    return "unknown";
}

}  // namespace dpnls
