#include "latlab/seq_detect.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include "latlab/crc.hpp"
#include "latlab/qfunc.hpp"
#include "latlab/rng.hpp"

namespace latlab {
namespace {

// Computes the codeword regardless of whether flat storage exists.
void materialize_codeword(const Codebook& cb, long long m, double* out) {
  const int bps = cb.mod == Modulation::kBpsk ? 1 : 2;
  const int d = cb.dim();
  const double amp =
      cb.mod == Modulation::kBpsk ? std::sqrt(cb.rho) : std::sqrt(cb.rho / 2.0);
  if (cb.k == cb.n * bps) {
    // direct mapping: message bit i (MSB first) selects the sign of dim i
    for (int i = 0; i < d; ++i) {
      out[i] = ((m >> (cb.k - 1 - i)) & 1) ? -amp : amp;
    }
  } else {
    Rng rng(derive_seed(cb.seed, static_cast<uint64_t>(m)));
    for (int i = 0; i < d; ++i) out[i] = rng.below(2) ? -amp : amp;
  }
}

ObservationStream transmit_with(const double* x, int dim, long long message,
                                int u, Rng& rng) {
  ObservationStream s;
  s.message = message;
  s.u = u;
  s.dim = dim;
  s.data.resize(static_cast<size_t>(u) * dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(u));
  double* p = s.data.data();
  for (int t = 0; t < u; ++t) {
    for (int d = 0; d < dim; ++d) *p++ = x[d] * scale + rng.gaussian();
  }
  return s;
}

// Stop threshold for a leader given distances to its list alternatives.
double list_threshold(const double* dists, int count, double n0,
                      ThresholdMode mode) {
  double sum_pe = 0.0;
  for (int j = 0; j < count; ++j) {
    sum_pe += qfunc(dists[j] / std::sqrt(2.0 * n0));
  }
  if (mode == ThresholdMode::kCorollary) {
    if (count == 1) return 1.0 - sum_pe;
    return 1.0 / (1.0 + (count + 1) * sum_pe);
  }
  return 1.0 / (1.0 + sum_pe);
}

void check_stream(const ObservationStream& stream, int dim) {
  if (stream.dim != dim) {
    throw std::domain_error("observation dimension mismatch");
  }
  if (stream.u <= 0 ||
      stream.data.size() != static_cast<size_t>(stream.u) * stream.dim) {
    throw std::domain_error("malformed observation stream");
  }
}

}  // namespace

void Codebook::codeword(long long m, double* out) const {
  if (m < 0 || m >= size()) throw std::domain_error("message id out of range");
  if (!flat.empty()) {
    const double* src = flat.data() + static_cast<size_t>(m) * dim();
    std::copy(src, src + dim(), out);
    return;
  }
  materialize_codeword(*this, m, out);
}

std::vector<double> Codebook::codeword_vec(long long m) const {
  std::vector<double> x(dim());
  codeword(m, x.data());
  return x;
}

Codebook gen_codebook(int n, int k, Modulation mod, double rho,
                      uint64_t seed) {
  if (n <= 0) throw std::domain_error("block length must be positive");
  if (!(rho > 0.0)) throw std::domain_error("snr must be positive");
  const int bps = mod == Modulation::kBpsk ? 1 : 2;
  if (k < 1 || k > 62) throw std::domain_error("message bits must be in [1, 62]");
  if (k > n * bps) {
    throw std::domain_error("too many messages for distinct sign words");
  }
  Codebook cb;
  cb.n = n;
  cb.k = k;
  cb.mod = mod;
  cb.rho = rho;
  cb.seed = seed;
  cb.implicit = k > 20;
  if (cb.implicit) return cb;  // materialized on demand; no global check

  const int d = cb.dim();
  const long long msgs = cb.size();
  std::vector<double> flat(static_cast<size_t>(msgs) * d);
  for (long long m = 0; m < msgs; ++m) {
    materialize_codeword(cb, m, flat.data() + static_cast<size_t>(m) * d);
  }
  if (k < n * bps) {
    // random sign words: verify the seed produced no duplicates
    const int words = (d + 63) / 64;
    std::set<std::vector<uint64_t>> seen;
    std::vector<uint64_t> packed(words);
    for (long long m = 0; m < msgs; ++m) {
      std::fill(packed.begin(), packed.end(), 0);
      const double* x = flat.data() + static_cast<size_t>(m) * d;
      for (int i = 0; i < d; ++i) {
        if (x[i] < 0.0) packed[i >> 6] |= 1ull << (i & 63);
      }
      if (!seen.insert(packed).second) {
        throw std::runtime_error("codebook seed yields duplicate codewords");
      }
    }
  }
  cb.flat = std::move(flat);
  return cb;
}

ObservationStream transmit(const Codebook& cb, long long message, int u,
                           uint64_t seed) {
  if (u <= 0) throw std::domain_error("increment count must be positive");
  std::vector<double> x(cb.dim());
  cb.codeword(message, x.data());
  Rng rng(seed);
  return transmit_with(x.data(), cb.dim(), message, u, rng);
}

ObservationStream transmit(const std::vector<double>& codeword,
                           long long message, int u, uint64_t seed) {
  if (u <= 0) throw std::domain_error("increment count must be positive");
  if (codeword.empty()) throw std::domain_error("empty codeword");
  Rng rng(seed);
  return transmit_with(codeword.data(), static_cast<int>(codeword.size()),
                       message, u, rng);
}

double pairwise_error(const std::vector<double>& x,
                      const std::vector<double>& y, double n0) {
  if (x.size() != y.size() || x.empty()) {
    throw std::domain_error("codeword size mismatch");
  }
  if (!(n0 > 0.0)) throw std::domain_error("noise density must be positive");
  double d2 = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double df = x[i] - y[i];
    d2 += df * df;
  }
  return qfunc(std::sqrt(d2 / (2.0 * n0)));
}

double msprt_threshold(const std::vector<std::vector<double>>& alternatives,
                       const std::vector<double>& target, double n0,
                       ThresholdMode mode) {
  if (alternatives.empty()) throw std::domain_error("need an alternative");
  if (!(n0 > 0.0)) throw std::domain_error("noise density must be positive");
  std::vector<double> dists;
  dists.reserve(alternatives.size());
  for (const auto& alt : alternatives) {
    if (alt.size() != target.size() || target.empty()) {
      throw std::domain_error("codeword size mismatch");
    }
    double d2 = 0.0;
    for (size_t i = 0; i < alt.size(); ++i) {
      const double df = target[i] - alt[i];
      d2 += df * df;
    }
    dists.push_back(std::sqrt(d2));
  }
  return list_threshold(dists.data(), static_cast<int>(dists.size()), n0,
                        mode);
}

StoppingDecision run_msprt(const ObservationStream& stream, const Codebook& cb,
                           const DetectorConfig& cfg) {
  const int dim = cb.dim();
  check_stream(stream, dim);
  const long long msgs = cb.size();
  const int ell = static_cast<int>(
      std::min<long long>(std::max(cfg.list_size, 2), msgs));
  const int u = stream.u;
  const double inv_su = 1.0 / std::sqrt(static_cast<double>(u));
  const bool fixed_s = cfg.fixed_threshold > 0.0;
  if (fixed_s && cfg.fixed_threshold >= 1.0) {
    throw std::domain_error("stop threshold must lie in (0, 1)");
  }

  std::vector<double> corr(msgs, 0.0);
  std::vector<double> buf_lead(dim), buf_alt(dim), dists(ell - 1);
  std::vector<long long> top(ell, -1), prev(ell, -1);
  std::vector<double> topc(ell, 0.0);
  const double* flat = cb.flat.empty() ? nullptr : cb.flat.data();
  auto cw = [&](long long m, double* buf) -> const double* {
    if (flat) return flat + static_cast<size_t>(m) * dim;
    cb.codeword(m, buf);
    return buf;
  };

  double s_cached = 0.0;
  double stat = 0.0;
  for (int t = 1; t <= u; ++t) {
    const double* inc = stream.increment(t - 1);
    if (flat) {
      const double* xp = flat;
      for (long long m = 0; m < msgs; ++m, xp += dim) {
        double acc = 0.0;
        for (int d = 0; d < dim; ++d) acc += xp[d] * inc[d];
        corr[m] += acc;
      }
    } else {
      for (long long m = 0; m < msgs; ++m) {
        materialize_codeword(cb, m, buf_lead.data());
        double acc = 0.0;
        for (int d = 0; d < dim; ++d) acc += buf_lead[d] * inc[d];
        corr[m] += acc;
      }
    }

    // nearest-ell list; strict comparison keeps the lowest id on ties
    int count = 0;
    for (long long m = 0; m < msgs; ++m) {
      const double c = corr[m];
      if (count == ell && !(c > topc[ell - 1])) continue;
      int pos = count < ell ? count : ell - 1;
      while (pos > 0 && c > topc[pos - 1]) --pos;
      if (count < ell) ++count;
      for (int j = count - 1; j > pos; --j) {
        topc[j] = topc[j - 1];
        top[j] = top[j - 1];
      }
      topc[pos] = c;
      top[pos] = m;
    }

    double s;
    if (fixed_s) {
      s = cfg.fixed_threshold;
    } else {
      if (!std::equal(top.begin(), top.end(), prev.begin())) {
        const double* lead = cw(top[0], buf_lead.data());
        for (int j = 1; j < ell; ++j) {
          const double* alt = cw(top[j], buf_alt.data());
          double d2 = 0.0;
          for (int d = 0; d < dim; ++d) {
            const double df = lead[d] - alt[d];
            d2 += df * df;
          }
          dists[j - 1] = std::sqrt(d2);
        }
        s_cached =
            list_threshold(dists.data(), ell - 1, 2.0, cfg.threshold_mode);
        prev = top;
      }
      s = s_cached;
    }

    // posterior of the leader within the list exceeds s  <=>
    // sum of likelihood ratios against it falls below (1-s)/s
    const double emax = (topc[1] - topc[0]) * inv_su;
    double acc = 1.0;
    for (int j = 2; j < ell; ++j) {
      acc += std::exp((topc[j] - topc[0]) * inv_su - emax);
    }
    stat = emax + std::log(acc);
    if (stat < std::log1p(-s) - std::log(s)) {
      return {static_cast<double>(t) / u, top[0], top[0] == stream.message,
              stat};
    }
  }
  return {1.0, top[0], top[0] == stream.message, stat};
}

std::pair<double, double> wald_thresholds(double pe) {
  if (!(pe > 0.0) || !(pe < 0.5)) {
    throw std::domain_error("error target must lie in (0, 0.5)");
  }
  return {pe / (1.0 - pe), (1.0 - pe) / pe};
}

StoppingDecision run_wald_sprt(const ObservationStream& stream,
                               const std::vector<double>& x1,
                               const std::vector<double>& x2,
                               const DetectorConfig& cfg) {
  if (x1.size() != x2.size() || x1.empty()) {
    throw std::domain_error("codeword size mismatch");
  }
  check_stream(stream, static_cast<int>(x1.size()));
  double a = cfg.wald_a;
  double b = cfg.wald_b;
  if (a <= 0.0 && b <= 0.0) {
    std::tie(a, b) = wald_thresholds(pairwise_error(x1, x2, 2.0));
  }
  if (!(a > 0.0 && a < 1.0 && b > 1.0)) {
    throw std::domain_error("need thresholds a < 1 < b");
  }
  const double la = std::log(a);
  const double lb = std::log(b);
  const int dim = stream.dim;
  const int u = stream.u;
  const double inv_su = 1.0 / std::sqrt(static_cast<double>(u));
  std::vector<double> diff(dim);
  for (int d = 0; d < dim; ++d) diff[d] = x1[d] - x2[d];

  double llr = 0.0;
  for (int t = 1; t <= u; ++t) {
    const double* inc = stream.increment(t - 1);
    double acc = 0.0;
    for (int d = 0; d < dim; ++d) acc += diff[d] * inc[d];
    llr += acc * inv_su;
    if (llr >= lb) {
      return {static_cast<double>(t) / u, 0, stream.message == 0, llr};
    }
    if (llr <= la) {
      return {static_cast<double>(t) / u, 1, stream.message == 1, llr};
    }
  }
  const long long decided = llr >= 0.0 ? 0 : 1;
  return {1.0, decided, decided == stream.message, llr};
}

std::vector<double> crc_encode_bpsk(const std::vector<uint8_t>& payload,
                                    int crc_width, double rho) {
  if (!(rho > 0.0)) throw std::domain_error("snr must be positive");
  const std::vector<uint8_t> bits = crc_append(payload, crc_width);
  const double amp = std::sqrt(rho);
  std::vector<double> x(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) x[i] = bits[i] ? -amp : amp;
  return x;
}

StoppingDecision run_crc_genie(const ObservationStream& stream,
                               const std::vector<uint8_t>& payload,
                               const DetectorConfig& cfg) {
  if (payload.empty()) throw std::domain_error("empty payload");
  const int nbits = static_cast<int>(payload.size()) + cfg.crc_width;
  check_stream(stream, nbits);
  if (!(cfg.min_tau_fraction >= 0.0 && cfg.min_tau_fraction <= 1.0)) {
    throw std::domain_error("stop floor must lie in [0, 1]");
  }
  const int u = stream.u;
  int tmin = static_cast<int>(
      std::ceil(cfg.min_tau_fraction * u - 1e-9));
  tmin = std::max(1, std::min(tmin, u));

  std::vector<double> ycum(nbits, 0.0);
  std::vector<uint8_t> bits(nbits);
  for (int t = 1; t <= u; ++t) {
    const double* inc = stream.increment(t - 1);
    for (int d = 0; d < nbits; ++d) ycum[d] += inc[d];
    if (t < tmin && t < u) continue;
    for (int d = 0; d < nbits; ++d) bits[d] = ycum[d] <= 0.0 ? 1 : 0;
    if (crc_check(bits, cfg.crc_width) || t == u) {
      const bool correct =
          std::equal(payload.begin(), payload.end(), bits.begin());
      return {static_cast<double>(t) / u, -1, correct, 0.0};
    }
  }
  throw std::logic_error("unreachable");
}

double error_upper_bound(const std::vector<double>& thresholds,
                         const std::vector<double>& priors) {
  if (thresholds.empty() || thresholds.size() != priors.size()) {
    throw std::domain_error("thresholds and priors must align");
  }
  bool all_equal = true;
  double bound = 0.0;
  for (size_t m = 0; m < thresholds.size(); ++m) {
    const double s = thresholds[m];
    if (!(s > 0.0 && s < 1.0) || priors[m] < 0.0) {
      throw std::domain_error("thresholds in (0,1), priors nonnegative");
    }
    if (s != thresholds[0]) all_equal = false;
    bound += priors[m] * (1.0 - s) / s;
  }
  // a shared threshold admits the tighter posterior form
  return all_equal ? 1.0 - thresholds[0] : bound;
}

std::pair<double, double> sprt_stop_lower_bounds(double d1, double d2,
                                                 double alpha, double gamma,
                                                 double a, double b) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) {
    throw std::domain_error("divergence rates must be positive");
  }
  if (!(alpha > 0.0 && alpha < 1.0 && gamma > 0.0 && gamma < 1.0)) {
    throw std::domain_error("error probabilities must lie in (0, 1)");
  }
  if (!(a > 0.0 && a < 1.0 && b > 1.0)) {
    throw std::domain_error("need thresholds a < 1 < b");
  }
  if (b > (1.0 - gamma) / alpha + 1e-12 || a < gamma / (1.0 - alpha) - 1e-12) {
    throw std::domain_error("thresholds inconsistent with error targets");
  }
  const double la = std::log(a);
  const double lb = std::log(b);
  const double e1 = -(alpha * lb + (1.0 - alpha) * la) / d1;
  const double e2 = ((1.0 - gamma) * lb + gamma * la) / d2;
  return {e1, e2};
}

double dragalin_asymptotic(double s, double d, int moment) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("threshold in (0, 1)");
  if (!(d > 0.0)) throw std::domain_error("divergence rate must be positive");
  if (moment < 1) throw std::domain_error("moment must be >= 1");
  return std::pow(std::log(s / (1.0 - s)) / d, moment);
}

double scenario_rho(const Scenario& sc) {
  if (sc.sync_target_error > 0.0) {
    if (!(sc.sync_target_error < 1.0)) {
      throw std::domain_error("target error must lie in (0, 1)");
    }
    // per-bit level at which a full-time hard decision over n bits errs
    // with the target probability
    const double pbit = -std::expm1(std::log1p(-sc.sync_target_error) / sc.n);
    const double x = qfunc_inv(pbit);
    if (!(x > 0.0)) throw std::domain_error("target error too lax");
    return x * x;
  }
  const double lin = std::pow(10.0, sc.snr_db / 10.0);
  if (sc.snr_is_ebn0) {
    return 2.0 * (static_cast<double>(sc.k) / sc.n) * lin;
  }
  return lin;
}

LatencyReport run_campaign(const Scenario& sc, long long trials, uint64_t seed,
                           int workers) {
  if (trials <= 0) throw std::domain_error("trial count must be positive");
  if (sc.u <= 0) throw std::domain_error("increment count must be positive");
  const double rho = scenario_rho(sc);

  Codebook cb;
  std::vector<double> w0, w1;
  if (sc.kind == DetectorKind::kCrcGenie) {
    if (sc.n != sc.k + sc.det.crc_width) {
      throw std::domain_error("coded length must equal payload + crc bits");
    }
  } else {
    cb = gen_codebook(sc.n, sc.k, sc.mod, rho, sc.codebook_seed);
    if (sc.kind == DetectorKind::kWald) {
      w0 = cb.codeword_vec(0);
      w1 = cb.codeword_vec(1);
    }
  }

  struct Partial {
    long long errors = 0;
    long long stop_steps = 0;
    std::vector<long long> hist;
  };
  auto run_range = [&](long long lo, long long hi, Partial* out) {
    out->hist.assign(sc.u + 1, 0);
    for (long long i = lo; i < hi; ++i) {
      Rng rng(derive_seed(seed, static_cast<uint64_t>(i)));
      StoppingDecision dec;
      switch (sc.kind) {
        case DetectorKind::kMsprt: {
          const long long msg = static_cast<long long>(
              rng.below(static_cast<uint64_t>(cb.size())));
          std::vector<double> x(cb.dim());
          cb.codeword(msg, x.data());
          const ObservationStream stream =
              transmit_with(x.data(), cb.dim(), msg, sc.u, rng);
          dec = run_msprt(stream, cb, sc.det);
          break;
        }
        case DetectorKind::kWald: {
          const long long msg = static_cast<long long>(rng.below(2));
          const std::vector<double>& x = msg == 0 ? w0 : w1;
          const ObservationStream stream =
              transmit_with(x.data(), static_cast<int>(x.size()), msg, sc.u,
                            rng);
          dec = run_wald_sprt(stream, w0, w1, sc.det);
          break;
        }
        case DetectorKind::kCrcGenie: {
          std::vector<uint8_t> payload(sc.k);
          for (auto& bit : payload) bit = static_cast<uint8_t>(rng.below(2));
          const std::vector<double> x =
              crc_encode_bpsk(payload, sc.det.crc_width, rho);
          const ObservationStream stream =
              transmit_with(x.data(), static_cast<int>(x.size()), -1, sc.u,
                            rng);
          dec = run_crc_genie(stream, payload, sc.det);
          break;
        }
      }
      if (!dec.correct) ++out->errors;
      const int t =
          static_cast<int>(std::llround(dec.stop_fraction * sc.u));
      out->stop_steps += t;
      ++out->hist[t];
    }
  };

  const int nw = static_cast<int>(
      std::min<long long>(std::max(workers, 1), trials));
  std::vector<Partial> parts(nw);
  if (nw == 1) {
    run_range(0, trials, &parts[0]);
  } else {
    const long long chunk = (trials + nw - 1) / nw;
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) {
      const long long lo = w * chunk;
      const long long hi = std::min<long long>(lo + chunk, trials);
      pool.emplace_back(run_range, lo, hi, &parts[w]);
    }
    for (auto& th : pool) th.join();
  }

  LatencyReport rep;
  rep.trials = trials;
  rep.stop_histogram.assign(sc.u + 1, 0);
  long long errors = 0;
  long long stop_steps = 0;
  for (const Partial& p : parts) {
    errors += p.errors;
    stop_steps += p.stop_steps;
    for (size_t j = 0; j < p.hist.size(); ++j) rep.stop_histogram[j] += p.hist[j];
  }
  rep.error_rate = static_cast<double>(errors) / trials;
  rep.mean_stop_fraction =
      static_cast<double>(stop_steps) / (static_cast<double>(sc.u) * trials);
  rep.confidence_halfwidth =
      1.96 * std::sqrt(rep.error_rate * (1.0 - rep.error_rate) / trials);
  return rep;
}

}  // namespace latlab
