#include "latlab/fbl_bounds.hpp"

#include <cmath>
#include <limits>

#include "latlab/qfunc.hpp"

namespace latlab {

namespace {

void check_snr(double snr) {
  if (!(snr >= 0.0) || !std::isfinite(snr))
    throw std::domain_error("snr must be finite and >= 0");
}

double log_size_correction(PowerConstraint pc) {
  return pc == PowerConstraint::kAverage ? 1.5 : 0.5;
}

}  // namespace

double capacity(double snr) {
  check_snr(snr);
  return 0.5 * std::log2(1.0 + snr);
}

double dispersion(double snr) {
  check_snr(snr);
  // (rho/2) * (rho+2)/(rho+1)^2 * log2(e)^2, monotone up to log2(e)^2/2.
  double r1 = 1.0 + snr;
  return 0.5 * snr * (snr + 2.0) / (r1 * r1) * kLog2E * kLog2E;
}

double max_log_code_size(double n, double eps, double snr, PowerConstraint pc) {
  if (!(n > 0.0)) throw std::domain_error("n must be > 0");
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::domain_error("eps must be in (0,1)");
  check_snr(snr);
  double c = capacity(snr);
  double v = dispersion(snr);
  return n * c - std::sqrt(n * v) * qfunc_inv(eps) +
         log_size_correction(pc) * std::log2(n);
}

double block_error_rate(double snr, double rate, double n) {
  if (!(n > 0.0)) throw std::domain_error("n must be > 0");
  check_snr(snr);
  double c = capacity(snr);
  double v = dispersion(snr);
  double num = c - rate + std::log2(n) / (2.0 * n);
  if (v <= 0.0) {
    // zero SNR carries no information: error -> 1 for any positive rate
    return rate > 0.0 ? 1.0 : 0.5;
  }
  return qfunc(num / std::sqrt(v / n));
}

double achievable_rate(double n, double eps, double snr) {
  if (!(n > 0.0)) throw std::domain_error("n must be > 0");
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::domain_error("eps must be in (0,1)");
  check_snr(snr);
  return capacity(snr) - std::sqrt(dispersion(snr) / n) * qfunc_inv(eps) +
         std::log2(n) / (2.0 * n);
}

double min_blocklength(double eps, double eta, double snr) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::domain_error("eps must be in (0,1)");
  if (!(eta >= 0.0) || !(eta < 1.0)) throw std::domain_error("eta must be in [0,1)");
  check_snr(snr);
  if (snr == 0.0) throw std::domain_error("snr must be > 0 for min_blocklength");
  double z = qfunc_inv(eps) / (1.0 - eta);
  double c = capacity(snr);
  return z * z * dispersion(snr) / (c * c);
}

MinLatencyResult min_latency(double k, double power, double symbol_time,
                             double eps, PowerConstraint pc, double n_max) {
  if (!(k > 0.0)) throw std::domain_error("k must be > 0");
  if (!(power > 0.0)) throw std::domain_error("power must be > 0");
  if (!(symbol_time > 0.0)) throw std::domain_error("symbol_time must be > 0");
  double snr = power * symbol_time;

  auto deficit = [&](double n) { return max_log_code_size(n, eps, snr, pc) - k; };

  double lo = 1.0;
  if (deficit(lo) >= 0.0)
    return {1.0, 1, symbol_time};

  double hi = 2.0;
  while (deficit(hi) < 0.0) {
    hi *= 2.0;
    if (hi > n_max) {
      if (deficit(n_max) < 0.0)
        throw InfeasibleError("min_latency: no blocklength <= n_max achieves k bits");
      hi = n_max;
      break;
    }
  }
  lo = hi / 2.0;

  for (int it = 0; it < 200 && (hi - lo) > 1e-9 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (deficit(mid) < 0.0 ? lo : hi) = mid;
  }

  MinLatencyResult out;
  out.n_real = hi;
  out.n_symbols = static_cast<long long>(std::ceil(hi - 1e-9));
  out.latency = out.n_real * symbol_time;
  return out;
}

double marginal_rate(double n, double eps, double snr) {
  if (!(n > 0.0)) throw std::domain_error("n must be > 0");
  check_snr(snr);
  // exact derivative of max_log_code_size in n (equal/maximal power)
  return capacity(snr) -
         std::sqrt(dispersion(snr)) * qfunc_inv(eps) / (2.0 * std::sqrt(n)) +
         kLog2E / (2.0 * n);
}

double solve_snr_for_error(double rate, double n, double eps) {
  if (!(rate > 0.0)) throw std::domain_error("rate must be > 0");
  if (!(n > 0.0)) throw std::domain_error("n must be > 0");
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::domain_error("eps must be in (0,1)");

  // block_error_rate decreases in snr; bracket then bisect.
  double lo = 0.0, hi = 1.0;
  while (block_error_rate(hi, rate, n) > eps) {
    hi *= 2.0;
    if (hi > 1e12)
      throw InfeasibleError("solve_snr_for_error: no snr <= 1e12 reaches eps");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (block_error_rate(mid, rate, n) > eps ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace latlab
