#pragma once

#include <vector>

#include "dpnls/model.hpp"

namespace dpnls {

// Standing-wave profile sampled on a uniform half-line grid x >= 0;
// the even extension phi(-x) = phi(x) is understood.  phi is strictly
// decreasing with phi(0) = peak = sqrt(h(omega)).
struct SolitonProfile {
    double omega;
    double peak;
    std::vector<double> x;
    std::vector<double> phi;
};

struct ProfileNorms {
    double grad_sq;  // ||phi'||_2^2
    double lp_norm;  // ||phi||_{p+1}^{p+1}
    double lq_norm;  // ||phi||_{q+1}^{q+1}
    double mass2;    // ||phi||_2^2
    double energy;   // grad_sq/2 + lp_norm/(p+1) - lq_norm/(q+1)
};

// Domain auto-sizing from the far-field decay exp(-sqrt(omega)*x).
// 24/sqrt(omega) puts the boundary value near e^-24 ~ 4e-11 of the peak,
// comfortably under the 1e-8 tail contract (12/sqrt(omega) would leave
// ~6e-6 and break it).  omega = 0 has only an algebraic x^{-2/(p-1)}
// tail, for which no fixed x_max meets 1e-8; 60 is used and the tail
// bound does not apply there.
double auto_x_max(double omega);

// Inverts x(phi) = int_phi^peak dpsi/sqrt(W(psi^2;omega)) onto a uniform
// x-grid of n_samples points over [0, x_max] (x_max <= 0 means auto).
// Knots of x(phi) are accumulated on a phi-ladder clustered at both the
// peak (via the substitution psi = peak - v^2, which flattens the
// square-root singularity) and phi -> 0 (geometric spacing); each grid
// sample is then Newton-polished against the integral itself, so the
// returned samples solve x(phi) = x_i to near machine precision.
// Beyond the last knot the known tail law fills in: exponential for
// omega > 0, power for omega = 0.
SolitonProfile build_profile(const Nonlinearity& nl, double omega,
                             int n_samples = 2049, double x_max = 0.0,
                             double quad_tol = 1e-10);

// M(omega) = (1/2) int_0^h (omega - L(s))^{-1/2} ds with h = h(omega).
double mass(const Nonlinearity& nl, double omega, double quad_tol = 1e-10);

// All norms from the first integral:
//   ||phi'||^2        = int_0^h sqrt(W(s))/sqrt(s) ds
//   ||phi||_{r+1}^{r+1} = int_0^h s^{r/2}/sqrt(W(s)) ds,  r in {1, p, q}.
ProfileNorms norms_and_energy(const Nonlinearity& nl, double omega,
                              double quad_tol = 1e-10);

// d^2/dlambda^2 of  lambda^2/2 * grad_sq + lambda^alpha * lp/(p+1)
// - lambda^beta * lq/(q+1)  at lambda = 1, from the omega = 0 norms:
//   grad_sq + alpha(alpha-1) lp/(p+1) - beta(beta-1) lq/(q+1).
// Negative exactly when q > (23-3p)/(3+p).
double scaling_second_derivative_at_zero(const Nonlinearity& nl,
                                         double quad_tol = 1e-10);

}  // namespace dpnls
