#pragma once

#include <stdexcept>

namespace latlab {

// How the codeword power budget is constrained. Equal/maximal power both
// carry a +1/2 log2(n) correction in the normal approximation; an average
// power constraint earns +3/2 log2(n).
enum class PowerConstraint { kEqualOrMaximal, kAverage };

// AWGN channel operating point: snr is linear receive SNR per channel use
// (rho = P*T for a transmitter of power P and symbol duration T).
struct ChannelParams {
  double snr = 0.0;
};

// (n, k, eps) code target: n channel uses carrying k information bits at
// block error probability eps.
struct CodeSpec {
  double n = 0.0;
  double k = 0.0;
  double eps = 0.0;
};

// Thrown when a latency/blocklength request cannot be met within limits.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shannon capacity of the real AWGN channel, bits per channel use.
double capacity(double snr);

// Channel dispersion V(rho) in bits^2 per channel use.
double dispersion(double snr);

// Normal-approximation bound on log2 of the maximal code size:
//   n*C - sqrt(n*V)*Qinv(eps) + c*log2(n), c = 1/2 or 3/2.
double max_log_code_size(double n, double eps, double snr,
                         PowerConstraint pc = PowerConstraint::kEqualOrMaximal);

// Error probability of the best rate-R code of length n on an AWGN channel
// at the given SNR (normal approximation, inverse of achievable_rate).
double block_error_rate(double snr, double rate, double n);

// Largest achievable rate at (n, eps): C - sqrt(V/n)*Qinv(eps) + log2(n)/(2n).
double achievable_rate(double n, double eps, double snr);

// Blocklength needed to operate at a fraction eta of capacity with error
// eps: (Qinv(eps)/(1-eta))^2 * V/C^2.
double min_blocklength(double eps, double eta, double snr);

struct MinLatencyResult {
  double n_real = 0.0;     // real-valued blocklength solving the bound
  long long n_symbols = 0; // ceil(n_real)
  double latency = 0.0;    // n_real * T, seconds
};

// Smallest blocklength n (and latency L = n*T) such that
// max_log_code_size(n, eps, P*T) >= k. Throws InfeasibleError when no
// n <= n_max works.
MinLatencyResult min_latency(double k, double power, double symbol_time,
                             double eps,
                             PowerConstraint pc = PowerConstraint::kEqualOrMaximal,
                             double n_max = 1e8);

// d(log2 M*)/dn: marginal information gain of one extra channel use.
double marginal_rate(double n, double eps, double snr);

// SNR that makes block_error_rate(snr, rate, n) equal eps (bisection).
double solve_snr_for_error(double rate, double n, double eps);

}  // namespace latlab
