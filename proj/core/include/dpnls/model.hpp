#pragma once

namespace dpnls {

// Exponent pair of the double-power nonlinearity -|u|^{p-1}u + |u|^{q-1}u.
// Valid whenever 1 < p < q; the classification layer additionally needs
// q < 5 for most of its statements and says so per operation.
struct Nonlinearity {
    double p;
    double q;
};

struct CoefficientSet {
    double alpha;  // (p-1)/2
    double beta;   // (q-1)/2
    double c1;     // -(5-p)/(p+1)
    double c2;     // (5-q)/(q+1)
    double d1;     // -2/(p+1)
    double d2;     // 2/(q+1)
    double r1;     // c1 + d1*(q-p)
    double r2;     // c1 + 2*d1*(q-p)
};

// Landmarks of the sign analysis: h0 is the positive zero of L, s_j the
// positive zero of K (j=0), K1 (j=1), K2 (j=2), t_j the corresponding
// positive critical point, omega0 = L(s0).
struct CriticalPoints {
    double h0, s0, s1, s2, t0, t1, t2, omega0;
};

// The four ordering relations h0<t0, h0<t1, s0<=t1, s0<=t2, each
// equivalent to an explicit exponent inequality (p+q>6, q>-3p+8,
// p>=7/3, p>=9/5 respectively).
struct OrderingFlags {
    bool h0_lt_t0;
    bool h0_lt_t1;
    bool s0_le_t1;
    bool s0_le_t2;
};

CoefficientSet coefficients(const Nonlinearity& nl);

// a^e - b^e for a,b > 0 without catastrophic cancellation when a ~ b.
double pow_diff(double a, double b, double e);

// Scalar model functions on s > 0.
double eval_K(const Nonlinearity& nl, double s);        // c1 s^a + c2 s^b
double eval_L(const Nonlinearity& nl, double s);        // d1 s^a + d2 s^b
double eval_W(const Nonlinearity& nl, double s, double omega);       // omega*s - L(s)*s
double eval_Wprime(const Nonlinearity& nl, double s, double omega);  // d/ds of W
double eval_K1(const Nonlinearity& nl, double s);       // -r1 s^a - c2 s^b
double eval_K2(const Nonlinearity& nl, double s);       //  r2 s^a + c2 s^b

// K(h)-K(s) and L(h)-L(s) assembled from pow_diff so the values stay
// accurate (and L's stays structurally positive for h0 <= s < h) all the
// way into s -> h, where the naive differences cancel to noise.
double eval_K_diff(const Nonlinearity& nl, double h, double s);
double eval_L_diff(const Nonlinearity& nl, double h, double s);

// Same differences parametrized by the relative drop r in (0,1], i.e.
// against s = h*(1-r).  Forming the power differences directly from
// log1p(-r) keeps them exact even when h*(1-r) is not representable,
// which the s=h(1-v^2) substitutions in the integral layer rely on.
double eval_K_drop(const Nonlinearity& nl, double h, double r);
double eval_L_drop(const Nonlinearity& nl, double h, double r);

// -L(h0*(1-r)) for r in (0,1]: the well depth of the zero-frequency
// wave, evaluated in factored form so it stays positive although
// L(h0) - L(s) itself drowns in rounding noise at both ends.
double eval_L_from_zero(const Nonlinearity& nl, double r);

// Positive zero of L: ((q+1)/(p+1))^{1/(beta-alpha)}.  Defined for every
// 1 < p < q; equals the squared zero-frequency peak when q < 5.
double h_zero(const Nonlinearity& nl);

// All seven landmark points plus omega0, from the closed-form power
// relations.  Requires q < 5 so that every point exists and is positive.
CriticalPoints critical_points(const Nonlinearity& nl);

// Unique h >= h0 with L(h) = omega, by bracketed root-finding on
// [h0, upper] with upper grown geometrically.  |L(h)-omega| <
// root_tol*max(1,omega).  Works for any q > p since d2 > 0 makes L
// strictly increasing on [h0, inf).
double h_of_omega(const Nonlinearity& nl, double omega, double root_tol = 1e-12);

// Each flag computed both from the point comparison and from the
// exponent inequality; a genuine disagreement (outside a 1e-12 rounding
// band on the points) throws InternalError.
OrderingFlags ordering_flags(const Nonlinearity& nl);

}  // namespace dpnls
