#pragma once

#include <functional>

namespace dpnls {

// Bracketed hybrid root-finder (bisection-safeguarded secant / inverse
// quadratic interpolation, i.e. Brent's method).  Requires f(lo) and
// f(hi) of opposite sign, else NumericError.  Stops when the bracket
// shrinks below tol*(1+|root|) (mixed absolute/relative tolerance) or
// f hits zero exactly.
double find_root(const std::function<double(double)>& f,
                 double lo, double hi, double tol = 1e-12);

}  // namespace dpnls
