#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace latlab {

enum class Modulation { kBpsk, kQpsk };

// Modulated codeword set over a parallel AWGN channel. Every codeword has
// energy n*rho (unit-variance noise per real dimension). BPSK occupies n
// real dimensions; QPSK occupies n complex dimensions stored as 2n reals
// (I/Q interleaved, energy rho per complex dimension).
//
// Codebooks with k <= 20 are enumerated explicitly; 20 < k <= 62 are
// implicit (codewords materialized on demand from seed + index).
struct Codebook {
  int n = 0;
  int k = 0;
  Modulation mod = Modulation::kBpsk;
  double rho = 0.0;
  uint64_t seed = 0;
  bool implicit = false;
  std::vector<double> flat;  // explicit storage, size() * dim() doubles

  int dim() const { return mod == Modulation::kBpsk ? n : 2 * n; }
  long long size() const { return 1ll << k; }
  void codeword(long long m, double* out) const;
  std::vector<double> codeword_vec(long long m) const;
};

Codebook gen_codebook(int n, int k, Modulation mod, double rho, uint64_t seed);

// One trial's observations: u increments of the scaled codeword X/sqrt(u)
// plus fresh N(0, I) noise per increment.
struct ObservationStream {
  long long message = 0;  // transmitted id (-1 when not enumerable)
  int u = 0;
  int dim = 0;
  std::vector<double> data;  // u * dim, increment-major

  const double* increment(int t) const { return data.data() + static_cast<size_t>(t) * dim; }
};

ObservationStream transmit(const Codebook& cb, long long message, int u,
                           uint64_t seed);
ObservationStream transmit(const std::vector<double>& codeword,
                           long long message, int u, uint64_t seed);

enum class ThresholdMode { kCorollary, kListPosterior };

struct DetectorConfig {
  int list_size = 2;
  ThresholdMode threshold_mode = ThresholdMode::kCorollary;
  double fixed_threshold = 0.0;  // >0: use this S for every hypothesis
  double wald_a = 0.0;           // binary SPRT thresholds; derive via
  double wald_b = 0.0;           // wald_thresholds() when 0
  int crc_width = 16;
  double min_tau_fraction = 0.2;  // earliest stop for the CRC rule
};

struct StoppingDecision {
  double stop_fraction = 1.0;  // in {1/u, ..., 1}
  long long decided = -1;
  bool correct = false;
  double statistic = 0.0;  // log of the posterior-ratio statistic at stop
};

// Q(||x - y|| / sqrt(2 N0)): probability of preferring y when x was sent
// and y is the only alternative.
double pairwise_error(const std::vector<double>& x,
                      const std::vector<double>& y, double n0);

// Stopping threshold S for a hypothesis given its current list of
// alternatives. kCorollary: 1/(1 + l * sum Pe), degenerating to 1 - Pe for a
// single alternative. kListPosterior: 1/(1 + sum Pe) (uniform priors).
double msprt_threshold(const std::vector<std::vector<double>>& alternatives,
                       const std::vector<double>& target, double n0,
                       ThresholdMode mode);

// Multihypothesis sequential test guided by an l-nearest list. Stops when
// the summed likelihood ratio against the nearest codeword drops below
// (1-S)/S (evaluated in the log domain); decides by minimum distance at the
// final increment otherwise.
StoppingDecision run_msprt(const ObservationStream& stream, const Codebook& cb,
                           const DetectorConfig& cfg);

// Binary sequential probability ratio test between two codewords. Decides
// x1 on the upper threshold crossing, x2 on the lower; minimum distance at
// the final increment.
StoppingDecision run_wald_sprt(const ObservationStream& stream,
                               const std::vector<double>& x1,
                               const std::vector<double>& x2,
                               const DetectorConfig& cfg);

// (A, B) = (pe/(1-pe), (1-pe)/pe) for a symmetric error target.
std::pair<double, double> wald_thresholds(double pe);

// BPSK codeword for payload || crc(payload).
std::vector<double> crc_encode_bpsk(const std::vector<uint8_t>& payload,
                                    int crc_width, double rho);

// Stops at the first increment (not before the min_tau_fraction floor)
// whose hard-sliced word passes the CRC; correctness judged on the payload
// bits. Decides from the final slice when the CRC never passes.
StoppingDecision run_crc_genie(const ObservationStream& stream,
                               const std::vector<uint8_t>& payload,
                               const DetectorConfig& cfg);

// sum_m priors[m] * (1-S[m])/S[m]; with one shared threshold the tighter
// posterior form 1-S applies.
double error_upper_bound(const std::vector<double>& thresholds,
                         const std::vector<double>& priors);

// Lower bounds on the expected stopping time of a binary SPRT with error
// probabilities alpha (deciding 2 under 1) and gamma (deciding 1 under 2),
// KL rates d1, d2 per increment, and thresholds A < 1 < B:
//   E1 >= -(alpha log B + (1-alpha) log A) / d1
//   E2 >= ((1-gamma) log B + gamma log A) / d2
std::pair<double, double> sprt_stop_lower_bounds(double d1, double d2,
                                                 double alpha, double gamma,
                                                 double a, double b);

// Asymptotic i-th moment of the stopping time, (log(S/(1-S))/D)^i, valid as
// S -> 1.
double dragalin_asymptotic(double s, double d, int moment);

enum class DetectorKind { kMsprt, kWald, kCrcGenie };

// A full Monte-Carlo campaign description. SNR may be given directly per
// channel use (snr_is_ebn0 = false), as Eb/N0 in dB (snr_is_ebn0 = true), or
// solved so that synchronous detection meets sync_target_error (CRC runs).
struct Scenario {
  std::string id;
  DetectorKind kind = DetectorKind::kMsprt;
  int n = 10;
  int k = 10;
  Modulation mod = Modulation::kBpsk;
  double snr_db = 0.0;
  bool snr_is_ebn0 = false;
  double sync_target_error = 0.0;
  int u = 100;
  DetectorConfig det;
  uint64_t codebook_seed = 1;
};

struct LatencyReport {
  long long trials = 0;
  double error_rate = 0.0;
  double mean_stop_fraction = 1.0;
  std::vector<long long> stop_histogram;  // counts per increment index
  double confidence_halfwidth = 0.0;      // 95% on error_rate
};

// Linear per-channel-use SNR implied by the scenario's power fields.
double scenario_rho(const Scenario& sc);

// Runs `trials` independent trials with per-trial seeds derived from
// (seed, trial index). The report is bit-identical for any worker count.
LatencyReport run_campaign(const Scenario& sc, long long trials, uint64_t seed,
                           int workers);

}  // namespace latlab
