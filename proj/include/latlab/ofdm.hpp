#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "latlab/rng.hpp"
#include "latlab/seq_detect.hpp"

namespace latlab {

using cplx = std::complex<double>;

// Multicarrier symbol geometry: n subcarriers at spacing 1/T, so the
// carrier set is orthogonal over [0, T] and nowhere before. Curves are
// evaluated on time_grid+1 equispaced points including both endpoints.
struct OfdmConfig {
  int n_subcarriers = 0;
  double symbol_duration = 1.0;
  int time_grid = 1024;
};

enum class PrecoderKind { kIdentity, kHadamardSylvester, kDftMatrix, kRandomRotation };

// Unitary coordinate transform applied to codewords before waveform
// synthesis. The matrix is stored row-major; identity keeps no storage.
struct Precoder {
  PrecoderKind kind = PrecoderKind::kIdentity;
  int n = 0;
  std::vector<cplx> mat;  // n*n row-major, empty for identity

  std::vector<cplx> apply(const std::vector<cplx>& x) const;
};

// Builds the requested transform: Sylvester-Hadamard (n a power of two,
// entries +-1/sqrt(n)), the unitary DFT, or a rotation drawn by
// orthogonalizing a seeded Gaussian matrix. Construction verifies
// max|H H^* - I| <= 1e-10.
Precoder make_precoder(PrecoderKind kind, int n, uint64_t seed = 0);

// max_{a,b} |(H H^* - I)_{ab}| for a row-major n*n matrix.
double unitarity_error(const std::vector<cplx>& mat, int n);

// Cumulative squared distance between two subcarrier waveforms as a
// function of observation time: d2(t) = integral_0^t |s1 - s2|^2 dt'.
struct DistanceCurve {
  double symbol_duration = 1.0;
  std::vector<double> t_over_t;  // abscissae in [0, 1]
  std::vector<double> d_sq;
  std::vector<int> diff_support;  // subcarrier indices where the pair differs
  long long pair_first = 0;
  long long pair_second = 0;
};

// Codeword of a QPSK codebook as n complex subcarrier amplitudes.
std::vector<cplx> complex_codeword(const Codebook& cb, long long m);

// Exact curve: linear term ||delta||^2 t plus the lag-grouped cross terms
// integral of e^{j 2 pi (k1-k2) t'/T}. The precoder transforms both
// codewords before the difference is taken.
DistanceCurve distance_curve(const std::vector<cplx>& x1, const std::vector<cplx>& x2,
                             const OfdmConfig& cfg, const Precoder& pre);

// Same curve from composite-Simpson integration of the synthesized
// difference waveform on a refine-times-finer grid. Oracle for the closed
// form; refine must be even.
DistanceCurve distance_curve_quadrature(const std::vector<cplx>& x1,
                                        const std::vector<cplx>& x2,
                                        const OfdmConfig& cfg, const Precoder& pre,
                                        int refine = 16);

// Peak relative deviation from the chord through the origin:
// max_t |d2(t) - (t/T) d2(T)| / d2(T). Requires d2(T) > 0.
double linearity_deviation(const DistanceCurve& curve);

// Returns the codebook with every codeword multiplied by the precoder
// matrix. QPSK explicit codebooks only; pairwise distances are preserved.
Codebook precode_codebook(const Codebook& cb, const Precoder& pre);

// QPSK codebook of 2^k codewords built from a seeded base word plus
// variants that rotate a single symbol by +-90 degrees, so every pair
// differs in at most two subcarriers. Requires 2^k - 1 <= 2n.
Codebook neighbor_codebook(int n, int k, double rho, uint64_t seed);

// Waveforms of an exhaustively enumerable codebook (k <= 12) sampled at
// grid midpoints t_g = (g + 1/2) T/G, plus suffix signal energies
// tail[m][g] = sum_{g' >= g} |s_m(t_g')|^2 dt used by the detector.
struct SignalTable {
  int n = 0;
  int grid = 0;
  long long count = 0;
  double symbol_duration = 1.0;
  double dt = 0.0;
  double rho = 0.0;
  std::vector<cplx> samples;        // count * grid
  std::vector<double> tail_energy;  // count * (grid + 1)

  const cplx* wave(long long m) const { return samples.data() + static_cast<size_t>(m) * grid; }
  const double* tail(long long m) const {
    return tail_energy.data() + static_cast<size_t>(m) * (grid + 1);
  }
};

SignalTable synthesize_codebook(const Codebook& cb, const Precoder& pre,
                                const OfdmConfig& cfg);

// One received symbol: waveform samples of the transmitted codeword plus
// circular white noise of std `noise_sigma` per sample.
struct OfdmStream {
  long long message = 0;
  int grid = 0;
  double dt = 0.0;
  std::vector<cplx> y;
};

OfdmStream ofdm_transmit(const SignalTable& table, long long message,
                         double noise_sigma, Rng& rng);

// Per-sample noise std giving the requested signal-to-noise ratio against
// the mean waveform power n*rho.
double ofdm_noise_sigma(const Codebook& cb, double snr_db);

// Sequential minimum-distance receiver. After each grid sample it scores
// every codeword by the distance between the received waveform completed
// by that codeword's own suffix and the codeword itself, i.e. the observed
// residual integral_0^t |y - s_m|^2 plus the unobserved suffix energy
// tail_m(t). The squared score starts at the full symbol energy and decays
// toward the final residual, so a fixed distance threshold cuts it exactly
// once; the receiver stops when the best score drops below that codeword's
// threshold and decides by minimum residual at T otherwise. thresholds:
// one entry per codeword or a single shared entry; 0 never stops early.
StoppingDecision ofdm_early_detect(const OfdmStream& stream, const SignalTable& table,
                                   const std::vector<double>& thresholds);

// Monte-Carlo campaign over random messages; per-trial seeds are derived
// from (seed, trial) so reports are bit-identical for any worker count.
LatencyReport ofdm_campaign(const SignalTable& table, double noise_sigma,
                            const std::vector<double>& thresholds, long long trials,
                            uint64_t seed, int workers);

// Largest shared threshold whose pilot-campaign error stays at or below
// target_error (bisection; larger thresholds stop earlier and err more).
double ofdm_calibrate_threshold(const SignalTable& table, double noise_sigma,
                                double target_error, long long pilot_trials,
                                uint64_t seed, int workers);

// Linearity of curves between independent Gaussian codeword pairs: cross
// terms average out as n grows, unlike adversarial sparse differences.
struct LinearizationReport {
  int n = 0;
  int pairs = 0;
  double mean_deviation = 0.0;
  double max_deviation = 0.0;
};

LinearizationReport covariance_linearization_check(uint64_t seed, int n, int pairs);

}  // namespace latlab
