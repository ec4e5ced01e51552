#pragma once

// Gaussian tail function Q and its inverse, double precision end to end.

namespace latlab {

inline constexpr double kLog2E  = 1.4426950408889634074;  // log2(e)
inline constexpr double kSqrt2  = 1.4142135623730950488;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// standard normal pdf
double normal_pdf(double x);

// Q(x) = P(N(0,1) > x), accurate into the deep tail.
double qfunc(double x);

// Inverse of Q on (0,1). Rational seed plus Halley refinement against
// erfc; relative error below 1e-14 for eps in [1e-300, 1-1e-16].
// Throws std::domain_error outside (0,1).
double qfunc_inv(double eps);

}  // namespace latlab
