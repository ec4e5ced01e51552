#pragma once

#include <vector>

#include "latlab/fbl_bounds.hpp"

namespace latlab {

// Early-detection model for a length-n rate-R code whose receive SNR grows
// linearly in time: after listening for tau seconds the decoder sees an
// effective SNR of P*tau, reaching P*T at the full symbol duration T.
struct EarlyDetectModel {
  double power = 0.0;   // P
  double rate = 0.0;    // R, bits per channel use
  double n = 0.0;       // blocklength
  double T = 1.0;       // full observation window, seconds
  std::vector<double> tau_grid;  // evaluation grid (tau_min..T]
  double tail_mass = 0.0;        // residual error mass parked at T
};

// Stopping-time distribution of the earliest correct decision: a density on
// (0,T) plus a point mass at T (the still-undecoded fraction).
struct StoppingDensity {
  std::vector<double> tau;
  std::vector<double> pdf;
  double point_mass_at_T = 0.0;
  double mass_below_first = 0.0;  // CDF at tau.front(), tiny by construction
};

// Normalized decision statistic gamma(tau); block_error_rate(P*tau, R, n)
// equals Q(gamma(tau)). Strictly increasing in tau; tau <= 0 is a domain
// error.
double gamma_of_tau(double tau, double power, double rate, double n);

// d(gamma)/d(tau), analytic.
double gamma_derivative(double tau, double power, double rate, double n);

// P(stop <= tau) = 1 - block_error_rate(P*tau, R, n).
double stopping_cdf(double tau, double power, double rate, double n);

EarlyDetectModel make_model(double power, double rate, double n, double T,
                            int grid_points = 1024);

StoppingDensity stopping_density(const EarlyDetectModel& model);

// E[tau]/T via the CDF-complement integral (1/T) * int_0^T eps*(P t) dt.
double average_latency(double power, double rate, double n, double T);

// Same quantity from the density + point mass; used as a cross-check.
double average_latency_density_form(double power, double rate, double n,
                                    double T);

// Capacity lower bound on the stopping time: tau > (2^{2R} - 1)/P for
// reliable decoding in the large-n limit.
double min_tau_bound(double rate, double power);

// Coarse checkpointed receiver: decisions only at the given increasing
// checkpoint times (last one = T). Success mass at tau_j is the formula
// value eps*(P tau_{j-1}) - eps*(P tau_j); returns E[tau]/T including the
// residual error mass at T.
double checkpoint_latency(const std::vector<double>& checkpoints, double power,
                          double rate, double n);

// Same pipeline with caller-supplied error probabilities per checkpoint
// (eps_values[j] is the residual error after checkpoint j).
double checkpoint_latency_with_eps(const std::vector<double>& checkpoints,
                                   const std::vector<double>& eps_values);

// P such that the full-window error eps*(P*T, R, n) equals eps.
double solve_power_for_final_error(double rate, double n, double eps, double T);

}  // namespace latlab
