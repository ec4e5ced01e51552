#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latlab/fbl_bounds.hpp"
#include "latlab/seq_detect.hpp"

namespace latlab {

// Serial relay chain: h hops at equal per-hop transmit power P over
// unit-variance AWGN. The amplify gain G = P/(P+1) restores the output
// power to P when the received power is P+1 (signal plus noise).
struct HopSpec {
  int hops = 1;
  double power = 0.0;

  double gain() const { return power / (power + 1.0); }
};

// Relay amplify gain G = P/(P+1), in (0,1) for P > 0.
double af_gain(double power);

// End-to-end SNR of an h-hop amplify-and-forward chain at per-hop SNR P:
// G^{h-1} P (1-G) / (1-G^h). Each relay rescales signal and accumulated
// noise by G and adds fresh unit noise, so the signal arrives with gain
// G^{h-1} P over noise 1 + G + ... + G^{h-1}. Strictly decreasing in h.
double af_overall_snr(double power, int hops);

// Smallest blocklength (and latency) that carries k bits end to end over
// the AF chain: the single-hop solver evaluated at the chain's overall
// per-symbol SNR. h=1 reduces to plain min_latency.
MinLatencyResult af_min_latency(double k, double power, double symbol_time,
                                double eps, int hops,
                                PowerConstraint pc = PowerConstraint::kEqualOrMaximal);

// Decode-and-forward: every relay fully decodes, so the chain costs the
// per-hop latency h times over.
double df_latency(double per_hop_latency, int hops);

// Message split into q equal parts pipelined across h decode-and-forward
// hops: each stage carries one part, and the chain drains after q + h - 1
// stage times.
struct SplitPlan {
  int parts = 1;              // q
  double bits_per_part = 0.0; // ceil(k/q)
  double eps_part = 0.0;      // per-part error budget
  MinLatencyResult per_part;  // stage blocklength and latency L_q
  double total_latency = 0.0; // L_q * (q + h - 1), seconds
};

// Split-DF latency plan. The error budget is divided across all q*h
// part-hop decodings (union bound) unless naive_eps_budget keeps the full
// eps per part. q=1 reproduces df_latency exactly.
SplitPlan split_latency(double k, double power, double symbol_time, double eps,
                        int hops, int parts, bool naive_eps_budget = false);

// Split-DF latency when relays forward each part as soon as they decode
// it: every hop advances after the early-decision fraction tau of a stage
// instead of a full stage, while the source still serializes the q parts,
// giving L_q * ((q-1) + h*tau). q=1, h=1 is a single early-detected
// decode.
double df_early_latency(double k, double power, double symbol_time, double eps,
                        int hops, int parts, bool naive_eps_budget = false);

// Two-codeword BPSK codebook whose words differ in exactly diff_dims
// leading dimensions (energy n*rho each, squared distance 4*rho*diff_dims).
Codebook binary_pair_codebook(int n, int diff_dims, double rho);

// Relay snapshot at its decision instant: accumulated / observed_fraction
// follows the matched-filter convention Y_R = f*X + N(0, f*I), so the
// amplified power G*||Y_R||^2 stays below the n*rho budget while f < 1.
struct RelayState {
  std::vector<double> accumulated;  // Y_R
  double observed_fraction = 1.0;   // f, in (0, 1]
  bool decided = false;
  long long decided_message = -1;
};

// Fixed-gain amplify: sqrt(G) * y_r, the plain AF relay output.
std::vector<double> af_amplify(const std::vector<double>& y_r, double power);

struct RelayOutput {
  std::vector<double> x_r;           // transmitted vector, ||x_r||^2 = n*rho
  std::vector<double> compensation;  // x_r - sqrt(G) * Y_R
  double axis_component = 0.0;       // coordinate along the decision axis
  double distance_to_wrong = 0.0;    // ||x_r - X^wrong||
};

// Power-constrained pre-compensation for a decided binary relay: keep the
// amplified observation's component orthogonal to the decision axis
// (X^decided - X^other) and spend the entire remaining power budget along
// the axis toward the decided codeword, so ||x_r||^2 = n*rho exactly and
// the distance to the other codeword never falls below the plain
// amplified output's. Requires a decided state and a two-word codebook
// whose energy matches power*symbol_time per dimension.
RelayOutput af_precompensate(const RelayState& state, const Codebook& cb,
                             double power, double symbol_time);

// Two-hop Monte-Carlo comparison of plain AF against decide-then-
// pre-compensate AF on a binary pair, with common randomness across the
// two arms of every trial.
struct PrecompConfig {
  int n = 2000;
  int diff_dims = 16;
  double snr_db = 0.0;             // per-dimension rho in dB
  int u = 100;                     // relay observation increments
  double decision_cap = 0.9;       // latest allowed relay stop, fraction of u
  double relay_error_target = 1e-3;  // SPRT threshold design point
};

struct PrecompReport {
  long long trials = 0;
  long long relay_decided = 0;   // trials that were pre-compensated
  long long relay_correct = 0;   // decided with the true message
  long long dominance_violations = 0;  // decided-correct with smaller distance
  long long errors_precomp = 0;
  long long errors_plain = 0;
  double mean_relay_stop_fraction = 1.0;  // undecided trials count as 1
  double min_distance_gap = 0.0;  // min (D_pre - D_plain) over decided-correct
  double max_power_error = 0.0;   // max relative |‖x_r‖^2 - n*rho| seen
};

// Per-trial seeds derive from (seed, trial) and partial sums merge in
// worker order, so reports are bit-identical for any worker count. The
// isotropic noise enters every tracked quantity only through its
// projections onto the decision axis and the shared signal direction plus
// the squared magnitude of the remainder, so trials run in that
// three-coordinate form (chi-square magnitudes drawn directly); cost per
// trial is O(u) instead of O(u*n). Requires n >= 4.
PrecompReport af_precomp_campaign(const PrecompConfig& cfg, long long trials,
                                  uint64_t seed, int workers);

// Same campaign simulated with full n-dimensional vectors through
// af_precompensate. Distributionally identical to af_precomp_campaign but
// draws different per-trial realizations; kept as the slow cross-check of
// the projected form.
PrecompReport af_precomp_campaign_reference(const PrecompConfig& cfg,
                                            long long trials, uint64_t seed,
                                            int workers);

// One strategy's latency at a common (k, P, T, eps, h) operating point.
struct StrategyRow {
  std::string strategy;  // "af", "df", "split-df", "df-early", "af-early"
  int parts = 1;
  bool feasible = true;
  double latency_seconds = 0.0;
  double latency_symbols = 0.0;     // seconds / T
  double latency_normalized = 0.0;  // seconds / (plain DF seconds)
};

// Tabulates AF, DF, split-DF (q in {2,4,8}), early-forwarding DF
// (q in {1,2,4,8}) and early-detected AF, sorted by latency with
// infeasible rows last. Infeasible strategies are marked, not fatal.
std::vector<StrategyRow> compare_strategies(double k, double power,
                                            double symbol_time, double eps,
                                            int hops);

}  // namespace latlab
