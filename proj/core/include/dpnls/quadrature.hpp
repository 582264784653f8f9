#pragma once

#include <functional>
#include <optional>

namespace dpnls {

struct QuadratureResult {
    double value;
    double error_estimate;  // absolute
    long evaluations;
};

// Known power-law blowup rates |f| ~ dist^{-exponent} at either endpoint.
// Exponents must lie in [0,1) (integrable).  The tanh-sinh rule absorbs
// any integrable power singularity without case analysis, so the hint is
// advisory; integrate() only validates it.
struct SingularityHint {
    std::optional<double> left_exponent;
    std::optional<double> right_exponent;
};

// Tanh-sinh (double-exponential) quadrature of f over the open interval
// (a,b) with level-wise refinement.  Never evaluates f exactly at a or b:
// nodes are clamped to a tiny distance from the endpoints (far below any
// hinted singularity's resolution scale) and nodes whose true weight
// underflows are skipped.  Converged when the level-to-level change falls
// below max(tol*|value|, tol); throws NumericError when the refinement
// stalls or the transformed terms never decay (non-integrable endpoint).
QuadratureResult integrate(const std::function<double(double)>& f,
                           double a, double b,
                           const SingularityHint& hint = {},
                           double tol = 1e-10);

// True iff the partial integrals over growing central windows of the
// transformed axis keep growing geometrically (factor > 1.5 over four
// successive windows) or overflow -- the finite surrogate for an
// endpoint exponent >= 1.
bool detect_divergence(const std::function<double(double)>& f,
                       double a, double b,
                       const SingularityHint& hint = {});

}  // namespace dpnls
