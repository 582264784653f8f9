#pragma once

namespace dpnls {

struct HypergeometricParams {
    double a;
    double b;
    double c;
};

// Gamma function for real non-pole arguments; negative non-integer
// arguments go through the standard reflection machinery of the libm
// implementation.  Throws DomainError at 0, -1, -2, ...
double gamma_fn(double x);

// Gamma(num)/Gamma(den) evaluated in log space so the ratio survives
// arguments whose individual Gamma values overflow.  A denominator at
// (or within 1e-12 of) a non-positive integer is a Gamma pole, so the
// ratio is returned as exactly 0.
double gamma_ratio(double num, double den);

// B(x,y) = Gamma(x)Gamma(y)/Gamma(x+y).
double beta_fn(double x, double y);

// Rising factorial (a)_n = a(a+1)...(a+n-1); (a)_0 = 1.
double pochhammer(double a, int n);

// 2F1(a,b;c;1) by direct series summation.  Requires c - a - b > 0 and
// c not a non-positive integer; the Gauss closed form
// Gamma(c)Gamma(c-a-b)/(Gamma(c-a)Gamma(c-b)) is evaluated alongside as
// an independent cross-check and a discrepancy beyond 10*tol is an
// internal error.  Terminating series (a or b a non-positive integer)
// are summed exactly.
double gauss_2f1_at_one(const HypergeometricParams& params, double tol = 1e-12);

// (a+b-c)*F(a,b,c;1) + (c-a)*F(a-1,b,c;1); identically zero for
// admissible parameters, exposed so tests can assert the contiguous
// relation numerically.
double recursion_residual(const HypergeometricParams& params, double tol = 1e-12);

}  // namespace dpnls
