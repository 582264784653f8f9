#pragma once

#include <complex>
#include <vector>

#include "dpnls/profile.hpp"

namespace dpnls {

// Periodic complex field on a uniform grid of N points (N a power of
// two) over [-L_dom/2, L_dom/2), x_i = -L_dom/2 + i*L_dom/N.
struct FieldState {
    double L_dom;
    std::vector<std::complex<double>> values;
    double time = 0.0;
    bool blew_up = false;  // max|u| exceeded 1e3 x the initial peak; run truncated
};

struct OrbitalDistance {
    double value;  // inf over (theta, y) of ||u - e^{i theta} phi(.-y)||_{H^1}
    double theta;
    double y;
};

enum class PerturbationKind { scale, gaussian_bump };

enum class VerdictHint { consistent_with_stable, consistent_with_unstable, inconclusive };

struct ExperimentRecord {
    double t;
    double distance;
    double mass;
    double energy;
};

// verdict_hint bands (5x / 20x of eps*||phi||_H1) are heuristic: the
// simulation corroborates a classification, it cannot decide one.
struct ExperimentResult {
    double max_distance;
    VerdictHint verdict_hint;
    double profile_h1_norm;
    bool blew_up;
    std::vector<ExperimentRecord> series;
};

// Samples the even extension of the profile onto an N-point periodic
// grid with L_dom = 2*x_max.  Exact when the profile was built with
// n_samples = N/2 + 1 (grid points then map 1:1 onto profile samples);
// this is what profile_on_grid below arranges.
FieldState make_state(const SolitonProfile& profile, int N);

// Profile + grid field in one step: builds phi_omega with x_max = L/2
// where L = 2*auto_x_max(omega), n_samples = N/2+1.
FieldState profile_on_grid(const Nonlinearity& nl, double omega, int N,
                           double quad_tol = 1e-10);

// Strang split-step: half nonlinear phase rotation
// exp(i dt/2 (|u|^{q-1} - |u|^{p-1})), full linear spectral step
// exp(-i k^2 dt), half nonlinear.  Accuracy bound dt*k_max^2 <= pi
// (phase per linear step below half a turn) enforced as a domain error.
// Blow-up (max|u| > 1e3 x initial peak) truncates the run and sets the
// flag.  Deterministic: plans are FFTW_ESTIMATE, wisdom-independent.
FieldState evolve(const Nonlinearity& nl, FieldState state, double dt, double t_end);

// y by cross-correlation over all grid shifts (one inverse FFT of the
// H^1-weighted cross spectrum), then Newton-refined off-grid; theta is
// the phase of the correlation at the optimum; norms are spectral.
OrbitalDistance orbital_distance(const FieldState& state, const Nonlinearity& nl,
                                 double omega, double quad_tol = 1e-10);

// u0 = (1+eps)*phi (scale) or phi + eps*exp(-x^2) (gaussian_bump),
// evolved to t_end with the orbital distance tracked every ~0.25 time
// units.  Blow-up counts as consistent_with_unstable.
ExperimentResult stability_experiment(const Nonlinearity& nl, double omega,
                                      double eps = 1e-3, double t_end = 30.0,
                                      int N = 1024, double dt = 1e-3,
                                      PerturbationKind kind = PerturbationKind::scale,
                                      double quad_tol = 1e-10);

double discrete_mass(const FieldState& state);                          // sum |u|^2 dx
double discrete_energy(const Nonlinearity& nl, const FieldState& state);  // spectral |u_x|^2

const char* verdict_hint_name(VerdictHint v);

}  // namespace dpnls
