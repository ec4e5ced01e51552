#pragma once

#include <functional>

namespace latlab {

// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a,b].
// Splits intervals until the local error estimate is below abs_tol
// (scaled by interval share); throws std::runtime_error if the depth
// limit is hit before converging.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-8, int max_depth = 30);

}  // namespace latlab
