#include "latlab/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace latlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_config(const OfdmConfig& cfg) {
  if (cfg.n_subcarriers < 1) throw std::domain_error("need at least one subcarrier");
  if (!(cfg.symbol_duration > 0.0)) throw std::domain_error("symbol duration must be positive");
  if (cfg.time_grid < 2) throw std::domain_error("time grid too coarse");
}

// Difference vector after the precoder, plus its support for reporting.
std::vector<cplx> transformed_difference(const std::vector<cplx>& x1,
                                         const std::vector<cplx>& x2,
                                         const OfdmConfig& cfg, const Precoder& pre,
                                         std::vector<int>* support) {
  if (x1.size() != x2.size()) throw std::domain_error("codeword lengths differ");
  if (static_cast<int>(x1.size()) != cfg.n_subcarriers)
    throw std::domain_error("codeword length does not match subcarrier count");
  const std::vector<cplx> a = pre.apply(x1);
  const std::vector<cplx> b = pre.apply(x2);
  std::vector<cplx> delta(a.size());
  double peak = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    delta[i] = a[i] - b[i];
    peak = std::max(peak, std::abs(delta[i]));
  }
  if (support) {
    support->clear();
    for (size_t i = 0; i < delta.size(); ++i)
      if (std::abs(delta[i]) > 1e-12 * peak && peak > 0.0)
        support->push_back(static_cast<int>(i));
  }
  return delta;
}

struct Partial {
  long long errors = 0;
  long long stop_steps = 0;
  std::vector<long long> hist;
};

}  // namespace

std::vector<cplx> Precoder::apply(const std::vector<cplx>& x) const {
  if (kind == PrecoderKind::kIdentity && mat.empty()) return x;
  if (static_cast<int>(x.size()) != n) throw std::domain_error("precoder dimension mismatch");
  std::vector<cplx> out(n, cplx(0.0, 0.0));
  for (int r = 0; r < n; ++r) {
    cplx acc(0.0, 0.0);
    const cplx* row = mat.data() + static_cast<size_t>(r) * n;
    for (int c = 0; c < n; ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
  return out;
}

double unitarity_error(const std::vector<cplx>& mat, int n) {
  if (static_cast<int>(mat.size()) != n * n) throw std::domain_error("matrix size mismatch");
  double worst = 0.0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      cplx acc(0.0, 0.0);
      for (int l = 0; l < n; ++l)
        acc += mat[static_cast<size_t>(r) * n + l] * std::conj(mat[static_cast<size_t>(c) * n + l]);
      if (r == c) acc -= 1.0;
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

Precoder make_precoder(PrecoderKind kind, int n, uint64_t seed) {
  if (n < 1) throw std::domain_error("precoder dimension must be positive");
  Precoder pre;
  pre.kind = kind;
  pre.n = n;
  switch (kind) {
    case PrecoderKind::kIdentity:
      return pre;  // implicit identity, nothing to verify
    case PrecoderKind::kHadamardSylvester: {
      if ((n & (n - 1)) != 0)
        throw std::domain_error("Sylvester construction needs a power-of-two dimension");
      const double scale = 1.0 / std::sqrt(static_cast<double>(n));
      pre.mat.resize(static_cast<size_t>(n) * n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          pre.mat[static_cast<size_t>(r) * n + c] =
              cplx(__builtin_parity(static_cast<unsigned>(r & c)) ? -scale : scale, 0.0);
      break;
    }
    case PrecoderKind::kDftMatrix: {
      const double scale = 1.0 / std::sqrt(static_cast<double>(n));
      pre.mat.resize(static_cast<size_t>(n) * n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          // reduce r*c mod n before the trig call to keep the argument small
          const double phase = -kTwoPi * static_cast<double>((static_cast<long long>(r) * c) % n) /
                               static_cast<double>(n);
          pre.mat[static_cast<size_t>(r) * n + c] = std::polar(scale, phase);
        }
      break;
    }
    case PrecoderKind::kRandomRotation: {
      Rng rng(derive_seed(seed, 0x0fdacc));
      pre.mat.resize(static_cast<size_t>(n) * n);
      for (auto& e : pre.mat) {
        const double re = rng.gaussian();
        const double im = rng.gaussian();
        e = cplx(re, im);
      }
      // modified Gram-Schmidt on columns, two passes for orthogonality at
      // machine precision
      for (int pass = 0; pass < 2; ++pass) {
        for (int c = 0; c < n; ++c) {
          for (int p = 0; p < c; ++p) {
            cplx proj(0.0, 0.0);
            for (int r = 0; r < n; ++r)
              proj += std::conj(pre.mat[static_cast<size_t>(r) * n + p]) *
                      pre.mat[static_cast<size_t>(r) * n + c];
            for (int r = 0; r < n; ++r)
              pre.mat[static_cast<size_t>(r) * n + c] -=
                  proj * pre.mat[static_cast<size_t>(r) * n + p];
          }
          double norm = 0.0;
          for (int r = 0; r < n; ++r) norm += std::norm(pre.mat[static_cast<size_t>(r) * n + c]);
          norm = std::sqrt(norm);
          if (!(norm > 0.0)) throw std::runtime_error("degenerate rotation draw");
          for (int r = 0; r < n; ++r) pre.mat[static_cast<size_t>(r) * n + c] /= norm;
        }
      }
      break;
    }
  }
  if (unitarity_error(pre.mat, n) > 1e-10)
    throw std::runtime_error("precoder failed the unitarity check");
  return pre;
}

std::vector<cplx> complex_codeword(const Codebook& cb, long long m) {
  if (cb.mod != Modulation::kQpsk)
    throw std::domain_error("complex codewords require a QPSK codebook");
  std::vector<double> flat = cb.codeword_vec(m);
  std::vector<cplx> out(cb.n);
  for (int i = 0; i < cb.n; ++i) out[i] = cplx(flat[2 * i], flat[2 * i + 1]);
  return out;
}

DistanceCurve distance_curve(const std::vector<cplx>& x1, const std::vector<cplx>& x2,
                             const OfdmConfig& cfg, const Precoder& pre) {
  check_config(cfg);
  DistanceCurve curve;
  curve.symbol_duration = cfg.symbol_duration;
  std::vector<cplx> delta = transformed_difference(x1, x2, cfg, pre, &curve.diff_support);

  const int n = cfg.n_subcarriers;
  const int grid = cfg.time_grid;
  const double t_total = cfg.symbol_duration;
  double energy = 0.0;
  for (const cplx& d : delta) energy += std::norm(d);

  // lag autocorrelation of the difference spectrum; lag l pairs carriers
  // (k+l, k) and contributes C_l * integral of e^{j 2 pi l t'/T}
  std::vector<cplx> corr(static_cast<size_t>(n), cplx(0.0, 0.0));
  for (int lag = 1; lag < n; ++lag) {
    cplx acc(0.0, 0.0);
    for (int k = 0; k + lag < n; ++k) acc += delta[k + lag] * std::conj(delta[k]);
    corr[lag] = acc;
  }

  curve.t_over_t.resize(grid + 1);
  curve.d_sq.resize(grid + 1);
  const double floor_mag = 1e-14 * energy;
  for (int g = 0; g <= grid; ++g) {
    const double frac = static_cast<double>(g) / grid;
    double val = energy * frac * t_total;
    for (int lag = 1; lag < n; ++lag) {
      if (std::abs(corr[lag]) <= floor_mag) continue;
      const cplx rot = std::polar(1.0, kTwoPi * lag * frac);
      const cplx integral = t_total / cplx(0.0, kTwoPi * lag) * (rot - 1.0);
      val += 2.0 * std::real(corr[lag] * integral);
    }
    curve.t_over_t[g] = frac;
    curve.d_sq[g] = std::max(0.0, val);
  }
  return curve;
}

DistanceCurve distance_curve_quadrature(const std::vector<cplx>& x1,
                                        const std::vector<cplx>& x2,
                                        const OfdmConfig& cfg, const Precoder& pre,
                                        int refine) {
  check_config(cfg);
  if (refine < 2 || refine % 2 != 0) throw std::domain_error("refine must be even and >= 2");
  DistanceCurve curve;
  curve.symbol_duration = cfg.symbol_duration;
  std::vector<cplx> delta = transformed_difference(x1, x2, cfg, pre, &curve.diff_support);

  const int grid = cfg.time_grid;
  const double t_total = cfg.symbol_duration;
  const long long fine = static_cast<long long>(grid) * refine;
  const double h = t_total / static_cast<double>(fine);

  // |difference waveform|^2 on the fine grid, carriers k = 1..n
  std::vector<double> f(fine + 1);
  for (long long i = 0; i <= fine; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(fine);
    cplx w(0.0, 0.0);
    for (const int k : curve.diff_support) w += delta[k] * std::polar(1.0, kTwoPi * (k + 1) * t);
    f[i] = std::norm(w);
  }

  std::vector<double> cum(fine + 1, 0.0);
  for (long long i = 2; i <= fine; i += 2)
    cum[i] = cum[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
  // odd fine indices are never sampled: refine is even, so every curve
  // point lands on an even Simpson node
  curve.t_over_t.resize(grid + 1);
  curve.d_sq.resize(grid + 1);
  for (int g = 0; g <= grid; ++g) {
    curve.t_over_t[g] = static_cast<double>(g) / grid;
    curve.d_sq[g] = cum[static_cast<size_t>(g) * refine];
  }
  return curve;
}

double linearity_deviation(const DistanceCurve& curve) {
  if (curve.d_sq.size() < 2 || !(curve.d_sq.back() > 0.0))
    throw std::domain_error("degenerate distance curve");
  const double total = curve.d_sq.back();
  double peak = 0.0;
  for (size_t g = 0; g < curve.d_sq.size(); ++g)
    peak = std::max(peak, std::abs(curve.d_sq[g] - curve.t_over_t[g] * total));
  return peak / total;
}

Codebook precode_codebook(const Codebook& cb, const Precoder& pre) {
  if (cb.mod != Modulation::kQpsk)
    throw std::domain_error("precoding requires a QPSK codebook");
  if (cb.implicit) throw std::domain_error("implicit codebook too large to precode");
  if (pre.kind != PrecoderKind::kIdentity) {
    if (pre.n != cb.n) throw std::domain_error("precoder dimension mismatch");
    if (unitarity_error(pre.mat, pre.n) > 1e-10)
      throw std::domain_error("precoder is not unitary");
  }
  Codebook out = cb;
  for (long long m = 0; m < cb.size(); ++m) {
    std::vector<cplx> w = pre.apply(complex_codeword(cb, m));
    double* dst = out.flat.data() + static_cast<size_t>(m) * cb.dim();
    for (int i = 0; i < cb.n; ++i) {
      dst[2 * i] = w[i].real();
      dst[2 * i + 1] = w[i].imag();
    }
  }
  return out;
}

Codebook neighbor_codebook(int n, int k, double rho, uint64_t seed) {
  if (n < 1) throw std::domain_error("blocklength must be positive");
  if (k < 1 || k > 20) throw std::domain_error("payload size out of range");
  if (!(rho > 0.0)) throw std::domain_error("snr must be positive");
  const long long count = 1ll << k;
  if (count - 1 > 2ll * n)
    throw std::domain_error("not enough single-symbol variants for this payload size");

  Codebook cb;
  cb.n = n;
  cb.k = k;
  cb.mod = Modulation::kQpsk;
  cb.rho = rho;
  cb.seed = seed;
  cb.implicit = false;
  cb.flat.resize(static_cast<size_t>(count) * 2 * n);

  const double amp = std::sqrt(rho / 2.0);
  Rng rng(derive_seed(seed, 0));
  std::vector<cplx> base(n);
  for (int i = 0; i < n; ++i) {
    const double re = rng.uniform() <= 0.5 ? amp : -amp;
    const double im = rng.uniform() <= 0.5 ? amp : -amp;
    base[i] = cplx(re, im);
  }
  for (long long m = 0; m < count; ++m) {
    std::vector<cplx> w = base;
    if (m > 0) {
      const long long v = m - 1;
      const int dim = static_cast<int>(v % n);
      // quarter-turn rotations: the two one-bit neighbours of a Gray-mapped
      // QPSK symbol
      w[dim] *= (v / n == 0) ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
    }
    double* dst = cb.flat.data() + static_cast<size_t>(m) * 2 * n;
    for (int i = 0; i < n; ++i) {
      dst[2 * i] = w[i].real();
      dst[2 * i + 1] = w[i].imag();
    }
  }
  return cb;
}

SignalTable synthesize_codebook(const Codebook& cb, const Precoder& pre,
                                const OfdmConfig& cfg) {
  check_config(cfg);
  if (cb.mod != Modulation::kQpsk)
    throw std::domain_error("waveform synthesis requires a QPSK codebook");
  if (cb.n != cfg.n_subcarriers)
    throw std::domain_error("codebook length does not match subcarrier count");
  if (cb.k > 12) throw std::domain_error("codebook too large for exhaustive synthesis");

  SignalTable table;
  table.n = cb.n;
  table.grid = cfg.time_grid;
  table.count = cb.size();
  table.symbol_duration = cfg.symbol_duration;
  table.dt = cfg.symbol_duration / cfg.time_grid;
  table.rho = cb.rho;
  table.samples.resize(static_cast<size_t>(table.count) * table.grid);
  table.tail_energy.resize(static_cast<size_t>(table.count) * (table.grid + 1));

  // carrier phasors at grid midpoints, e^{j 2 pi k (g+1/2)/G}, k = 1..n
  std::vector<cplx> phase(static_cast<size_t>(cb.n) * table.grid);
  for (int k = 0; k < cb.n; ++k)
    for (int g = 0; g < table.grid; ++g)
      phase[static_cast<size_t>(k) * table.grid + g] =
          std::polar(1.0, kTwoPi * (k + 1) * (g + 0.5) / table.grid);

  for (long long m = 0; m < table.count; ++m) {
    std::vector<cplx> w = pre.apply(complex_codeword(cb, m));
    cplx* dst = table.samples.data() + static_cast<size_t>(m) * table.grid;
    for (int g = 0; g < table.grid; ++g) {
      cplx acc(0.0, 0.0);
      for (int k = 0; k < cb.n; ++k) acc += w[k] * phase[static_cast<size_t>(k) * table.grid + g];
      dst[g] = acc;
    }
    double* tail = table.tail_energy.data() + static_cast<size_t>(m) * (table.grid + 1);
    tail[table.grid] = 0.0;
    for (int g = table.grid - 1; g >= 0; --g)
      tail[g] = tail[g + 1] + std::norm(dst[g]) * table.dt;
  }
  return table;
}

OfdmStream ofdm_transmit(const SignalTable& table, long long message, double noise_sigma,
                         Rng& rng) {
  if (message < 0 || message >= table.count) throw std::domain_error("message out of range");
  if (noise_sigma < 0.0) throw std::domain_error("noise std must be non-negative");
  OfdmStream stream;
  stream.message = message;
  stream.grid = table.grid;
  stream.dt = table.dt;
  stream.y.resize(table.grid);
  const cplx* s = table.wave(message);
  const double comp = noise_sigma / std::sqrt(2.0);  // per real component
  for (int g = 0; g < table.grid; ++g)
    stream.y[g] = s[g] + cplx(comp * rng.gaussian(), comp * rng.gaussian());
  return stream;
}

double ofdm_noise_sigma(const Codebook& cb, double snr_db) {
  const double snr = std::pow(10.0, snr_db / 10.0);
  return std::sqrt(cb.n * cb.rho / snr);
}

StoppingDecision ofdm_early_detect(const OfdmStream& stream, const SignalTable& table,
                                   const std::vector<double>& thresholds) {
  if (stream.grid != table.grid) throw std::domain_error("stream grid mismatch");
  const long long count = table.count;
  if (thresholds.size() != 1 && thresholds.size() != static_cast<size_t>(count))
    throw std::domain_error("need one threshold per codeword or a shared one");

  std::vector<double> residual(count, 0.0);
  StoppingDecision dec;
  for (int g = 0; g < table.grid; ++g) {
    long long best = 0;
    double best_d = 0.0;
    for (long long m = 0; m < count; ++m) {
      residual[m] += std::norm(stream.y[g] - table.wave(m)[g]) * table.dt;
      const double d = residual[m] + table.tail(m)[g + 1];
      if (m == 0 || d < best_d) {
        best_d = d;
        best = m;
      }
    }
    const double s = thresholds.size() == 1 ? thresholds[0] : thresholds[best];
    // at the last sample the suffix term is zero, so this is the plain
    // minimum-residual decision
    if (best_d < s * s || g + 1 == table.grid) {
      dec.stop_fraction = static_cast<double>(g + 1) / table.grid;
      dec.decided = best;
      dec.correct = best == stream.message;
      dec.statistic = std::sqrt(best_d);
      return dec;
    }
  }
  return dec;  // unreachable: the final sample always decides
}

LatencyReport ofdm_campaign(const SignalTable& table, double noise_sigma,
                            const std::vector<double>& thresholds, long long trials,
                            uint64_t seed, int workers) {
  if (trials < 1) throw std::domain_error("need at least one trial");
  if (workers < 1) workers = 1;
  const int grid = table.grid;

  auto run_chunk = [&](long long lo, long long hi, Partial& part) {
    part.hist.assign(grid + 1, 0);
    for (long long i = lo; i < hi; ++i) {
      Rng rng(derive_seed(seed, static_cast<uint64_t>(i)));
      const long long msg = static_cast<long long>(rng.below(static_cast<uint64_t>(table.count)));
      const OfdmStream stream = ofdm_transmit(table, msg, noise_sigma, rng);
      const StoppingDecision dec = ofdm_early_detect(stream, table, thresholds);
      if (!dec.correct) ++part.errors;
      const long long step = std::llround(dec.stop_fraction * grid);
      part.stop_steps += step;
      ++part.hist[step];
    }
  };

  const int used = static_cast<int>(std::min<long long>(workers, trials));
  std::vector<Partial> parts(used);
  if (used == 1) {
    run_chunk(0, trials, parts[0]);
  } else {
    std::vector<std::thread> pool;
    const long long chunk = (trials + used - 1) / used;
    for (int w = 0; w < used; ++w) {
      const long long lo = w * chunk;
      const long long hi = std::min(trials, lo + chunk);
      pool.emplace_back([&, lo, hi, w] { run_chunk(lo, hi, parts[w]); });
    }
    for (auto& t : pool) t.join();
  }

  LatencyReport report;
  report.trials = trials;
  report.stop_histogram.assign(grid + 1, 0);
  long long errors = 0;
  long long steps = 0;
  for (const Partial& p : parts) {
    errors += p.errors;
    steps += p.stop_steps;
    for (int g = 0; g <= grid; ++g) report.stop_histogram[g] += p.hist[g];
  }
  report.error_rate = static_cast<double>(errors) / static_cast<double>(trials);
  report.mean_stop_fraction =
      static_cast<double>(steps) / (static_cast<double>(trials) * grid);
  report.confidence_halfwidth =
      1.96 * std::sqrt(report.error_rate * (1.0 - report.error_rate) /
                       static_cast<double>(trials));
  return report;
}

double ofdm_calibrate_threshold(const SignalTable& table, double noise_sigma,
                                double target_error, long long pilot_trials,
                                uint64_t seed, int workers) {
  if (!(target_error > 0.0) || target_error >= 1.0)
    throw std::domain_error("target error must lie in (0, 1)");
  // generous cap: the score starts at sqrt(full symbol energy), so any
  // threshold above that stops at the first sample
  double peak = 0.0;
  for (long long m = 0; m < table.count; ++m) peak = std::max(peak, table.tail(m)[0]);
  double hi = 2.0 * std::sqrt(peak) + 6.0 * noise_sigma;
  double lo = 0.0;  // never stops early
  for (int iter = 0; iter < 24; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const LatencyReport pilot =
        ofdm_campaign(table, noise_sigma, {mid}, pilot_trials, seed, workers);
    if (pilot.error_rate <= target_error)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

LinearizationReport covariance_linearization_check(uint64_t seed, int n, int pairs) {
  if (n < 2) throw std::domain_error("need at least two subcarriers");
  if (pairs < 1) throw std::domain_error("need at least one pair");
  OfdmConfig cfg;
  cfg.n_subcarriers = n;
  cfg.symbol_duration = 1.0;
  // resolve the fastest cross sinusoid (lag n-1) with >= 8 points/period
  cfg.time_grid = std::max(256, 8 * n);
  const Precoder identity = make_precoder(PrecoderKind::kIdentity, n);

  LinearizationReport report;
  report.n = n;
  report.pairs = pairs;
  const double inv_sqrt2 = 0.70710678118654752440;
  for (int p = 0; p < pairs; ++p) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(p)));
    std::vector<cplx> x1(n), x2(n);
    for (int i = 0; i < n; ++i)
      x1[i] = cplx(inv_sqrt2 * rng.gaussian(), inv_sqrt2 * rng.gaussian());
    for (int i = 0; i < n; ++i)
      x2[i] = cplx(inv_sqrt2 * rng.gaussian(), inv_sqrt2 * rng.gaussian());
    const double dev = linearity_deviation(distance_curve(x1, x2, cfg, identity));
    report.mean_deviation += dev;
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  report.mean_deviation /= pairs;
  return report;
}

}  // namespace latlab
