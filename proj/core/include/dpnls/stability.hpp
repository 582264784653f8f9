#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpnls/model.hpp"

namespace dpnls {

struct Tolerances {
    double quad_tol = 1e-10;
    double root_tol = 1e-12;
    double series_tol = 1e-12;
};

enum class LimitKind { finite, negative_infinity };

// lim_{omega->0} M'(omega).  Divergent (to -inf) exactly when p >= 7/3;
// otherwise finite with sign -1/0/+1 tied to 2p+q vs 7, value
// c_pq * Gamma(delta)/Gamma(delta - 1/2), delta = (7-3p)/(2(q-p)).
struct ZeroFrequencyLimit {
    LimitKind kind;
    double value;  // meaningful when finite
    int sign;      // -1 / 0 / +1 when finite
    double c_pq;   // positive prefactor when finite
};

enum class Regime {
    q_ge_5_unstable_all,
    sharp_threshold,
    stable_all,
    unstable_small_with_gap,
    stable_small_with_gap,
};

enum class Verdict { stable, unstable, unstable_incl_endpoint, theory_silent };

// Half-open decomposition of (0, inf); hi = +infinity on the last piece.
struct TheoryInterval {
    double lo;
    double hi;
    Verdict verdict;
};

struct ScanPoint {
    double omega;
    int sign;  // sign of M'(omega)
};

struct StabilityReport {
    Regime regime;
    std::optional<double> omega_star;   // sharp threshold (theorem-backed)
    std::optional<double> mu_estimate;  // scan/bisection estimate only, not theorem-backed
    std::optional<double> omega0;       // L(s0); absent when q >= 5
    std::vector<TheoryInterval> theory_intervals;
    std::vector<ScanPoint> numeric_sign_scan;
};

struct Threshold {
    double z_star;
    double omega_star;           // L(z_star)
    double curvature_estimate;   // d(M')/domega at omega_star, central difference
};

struct AuditItem {
    std::string name;
    bool pass;
    std::string witness;
};

struct AuditRecord {
    std::vector<AuditItem> items;
    bool all_pass;
};

// M'(omega) = -(1/(4 W'(h))) int_0^h (K(h)-K(s))/(L(h)-L(s))^{3/2} ds,
// h = h(omega).  Valid for omega > 0 and any 1 < p < q.
double dmass(const Nonlinearity& nl, double omega,
             double quad_tol = 1e-10, double root_tol = 1e-12);

// F_j(h), j in {0,1,2}: the rescaled unit-interval integrals whose signs
// and derivatives encode sgn M' and its monotonicity.  Requires q < 5 and
// h strictly above h0 (F1 diverges at h0+ when p >= 9/5, so the boundary
// itself is rejected as a domain error).
double f_family(const Nonlinearity& nl, double h, int j, double quad_tol = 1e-10);

ZeroFrequencyLimit zero_frequency_limit(const Nonlinearity& nl);

// H(alpha,beta) = int_0^1 [-(2-alpha)(1-s^alpha) + (2-beta)(1-s^beta)]
//                 / (s^alpha - s^beta)^{3/2} ds,
// integrable only for p < 7/3 (left exponent 3*alpha/2 < 1).
double h_limit_integral(const Nonlinearity& nl, double quad_tol = 1e-10);

// 2*sqrt(pi) * Gamma(delta)/Gamma(delta - 1/2); equals h_limit_integral
// when the latter converges (0 at 2p+q = 7 via the Gamma pole).
double h_limit_closed_form(const Nonlinearity& nl);

// detect_divergence on the H integrand; true exactly when p >= 7/3.
bool h_limit_divergent(const Nonlinearity& nl);

// The regime decision alone: pure exponent arithmetic, no quadrature.
// Boundary expressions (q vs 5, p vs 7/3 and 9/5, 2p+q vs 7) are compared
// with a 1e-12 absolute band, the boundary counting toward the first case.
Regime decide_regime(const Nonlinearity& nl);

// Unique zero z_star of F0 on (h0, s0) and omega_star = L(z_star).
// Returns nullopt when the regime does not admit a sharp threshold
// (needs p >= 7/3, or 9/5 <= p < 7/3 with 2p+q > 7).  NumericError if
// the bracket [h0*(1+eps_b), s0] shows no sign change.
std::optional<Threshold> threshold(const Nonlinearity& nl, const Tolerances& tols = {});

// Full classification per the five regimes, with a 24-point log-grid
// sign scan of M' and theory intervals.  In the two gap regimes the
// inner boundary mu is only known to exist; it is estimated as the
// refined first sign change of the scan (mu_estimate) and the interval
// between the estimate and omega0 is reported as theory_silent.  When
// the scan shows no sign change below omega0 the estimate saturates at
// the last scan point below omega0.
StabilityReport classify(const Nonlinearity& nl, const Tolerances& tols = {});

// Numerical verification of the F0/F1 sign-pattern structure on
// (h0, 3*s0] for 9/5 <= p < 7/3, q < 5.  Items:
//   near_h0_sign               sign of F0 just above h0 vs the 2p+q trichotomy
//   divided_difference_growth  forward differences of F0 at h0+ grow (slope -> +inf)
//   f0prime_single_sign_change F0' (through F1) flips at most once on (h0,s0), + to -
//   positivity_persists        once F0 > 0 on the grid it stays positive
AuditRecord sign_pattern_audit(const Nonlinearity& nl, double quad_tol = 1e-10);

const char* regime_name(Regime r);
const char* verdict_name(Verdict v);

}  // namespace dpnls
