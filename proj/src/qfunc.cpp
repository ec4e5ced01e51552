#include "latlab/qfunc.hpp"

#include <cmath>
#include <stdexcept>

namespace latlab {

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double qfunc(double x) { return 0.5 * std::erfc(x / kSqrt2); }

namespace {

// Acklam's rational approximation to the inverse normal CDF. Absolute
// error of the seed is ~1.15e-9; refinement below brings it to machine
// precision.
double inv_normal_cdf_seed(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;

  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double qfunc_inv(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::domain_error("qfunc_inv: eps must be in (0,1)");
  if (eps == 0.5) return 0.0;
  // Q(x) loses absolute precision near 1; reflect into the lower half where
  // the refinement below reaches machine accuracy (1 - eps is exact here).
  if (eps > 0.5) return -qfunc_inv(1.0 - eps);

  // Q^{-1}(eps) = -Phi^{-1}(eps); seed in the lower tail keeps the
  // sqrt(-2 log p) branch active for tiny eps.
  double x = -inv_normal_cdf_seed(eps);

  // Two Halley steps on f(x) = Q(x) - eps; f'(x) = -pdf(x), f''/f' = x.
  for (int it = 0; it < 2; ++it) {
    double r = qfunc(x) - eps;
    double pdf = normal_pdf(x);
    if (pdf == 0.0) break;
    double u = r / pdf;
    x += u / (1.0 - 0.5 * x * u);  // Halley correction
  }
  return x;
}

}  // namespace latlab
