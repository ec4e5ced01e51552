#include "latlab/multihop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "latlab/early_latency.hpp"
#include "latlab/rng.hpp"

namespace latlab {
namespace {

void check_hops(int hops) {
  if (hops < 1) throw std::domain_error("need at least one hop");
}

}  // namespace

double af_gain(double power) {
  if (!(power > 0.0)) throw std::domain_error("per-hop power must be positive");
  return power / (power + 1.0);
}

double af_overall_snr(double power, int hops) {
  check_hops(hops);
  const double g = af_gain(power);
  if (hops == 1) return power;
  return std::pow(g, hops - 1) * power * (1.0 - g) / (1.0 - std::pow(g, hops));
}

MinLatencyResult af_min_latency(double k, double power, double symbol_time,
                                double eps, int hops, PowerConstraint pc) {
  if (!(symbol_time > 0.0)) throw std::domain_error("symbol time must be positive");
  const double chain_snr = af_overall_snr(power * symbol_time, hops);
  return min_latency(k, chain_snr / symbol_time, symbol_time, eps, pc);
}

double df_latency(double per_hop_latency, int hops) {
  check_hops(hops);
  if (!(per_hop_latency > 0.0)) throw std::domain_error("latency must be positive");
  return per_hop_latency * hops;
}

SplitPlan split_latency(double k, double power, double symbol_time, double eps,
                        int hops, int parts, bool naive_eps_budget) {
  check_hops(hops);
  if (parts < 1) throw std::domain_error("need at least one part");
  if (!(k >= parts)) throw std::domain_error("parts must carry at least one bit each");

  SplitPlan plan;
  plan.parts = parts;
  plan.bits_per_part = std::ceil(k / parts);
  plan.eps_part = naive_eps_budget
                      ? eps
                      : eps / (static_cast<double>(parts) * hops);
  plan.per_part = min_latency(plan.bits_per_part, power, symbol_time, plan.eps_part);
  plan.total_latency = plan.per_part.latency * (parts + hops - 1);
  return plan;
}

double df_early_latency(double k, double power, double symbol_time, double eps,
                        int hops, int parts, bool naive_eps_budget) {
  const SplitPlan plan =
      split_latency(k, power, symbol_time, eps, hops, parts, naive_eps_budget);
  const double rate = plan.bits_per_part / plan.per_part.n_real;
  const double tau =
      average_latency(power, rate, plan.per_part.n_real, symbol_time);
  return plan.per_part.latency * ((parts - 1) + hops * tau);
}

Codebook binary_pair_codebook(int n, int diff_dims, double rho) {
  if (n < 1) throw std::domain_error("need at least one dimension");
  if (diff_dims < 1 || diff_dims > n)
    throw std::domain_error("differing dimensions must lie in [1, n]");
  if (!(rho > 0.0)) throw std::domain_error("energy per dimension must be positive");

  Codebook cb;
  cb.n = n;
  cb.k = 1;
  cb.mod = Modulation::kBpsk;
  cb.rho = rho;
  cb.flat.resize(2 * static_cast<size_t>(n));
  const double amp = std::sqrt(rho);
  for (int i = 0; i < n; ++i) {
    cb.flat[i] = amp;
    cb.flat[n + i] = i < diff_dims ? -amp : amp;
  }
  return cb;
}

std::vector<double> af_amplify(const std::vector<double>& y_r, double power) {
  const double root_g = std::sqrt(af_gain(power));
  std::vector<double> out(y_r.size());
  for (size_t i = 0; i < y_r.size(); ++i) out[i] = root_g * y_r[i];
  return out;
}

RelayOutput af_precompensate(const RelayState& state, const Codebook& cb,
                             double power, double symbol_time) {
  if (!state.decided || state.decided_message < 0)
    throw std::logic_error("relay has not decided yet");
  if (cb.k != 1 || cb.implicit)
    throw std::domain_error("pre-compensation supports explicit binary pairs only");
  if (!(state.observed_fraction > 0.0) || state.observed_fraction > 1.0)
    throw std::domain_error("observed fraction must lie in (0, 1]");
  const int dim = cb.dim();
  if (state.accumulated.size() != static_cast<size_t>(dim))
    throw std::domain_error("accumulated observation dimension mismatch");
  const double budget = cb.n * cb.rho;  // n * rho = n * P * T
  if (std::abs(cb.rho - power * symbol_time) > 1e-9 * cb.rho)
    throw std::domain_error("codebook energy does not match the power budget");

  const std::vector<double> decided = cb.codeword_vec(state.decided_message);
  const std::vector<double> other = cb.codeword_vec(1 - state.decided_message);

  // decision axis from the wrong codeword toward the decided one
  std::vector<double> axis(dim);
  double axis_norm_sq = 0.0;
  for (int i = 0; i < dim; ++i) {
    axis[i] = decided[i] - other[i];
    axis_norm_sq += axis[i] * axis[i];
  }
  const double axis_norm = std::sqrt(axis_norm_sq);

  const std::vector<double> amplified = af_amplify(state.accumulated, power);
  double along = 0.0;
  double total_sq = 0.0;
  for (int i = 0; i < dim; ++i) {
    along += amplified[i] * axis[i];
    total_sq += amplified[i] * amplified[i];
  }
  along /= axis_norm;
  const double perp_sq = std::max(0.0, total_sq - along * along);

  RelayOutput out;
  out.x_r.resize(dim);
  out.compensation.resize(dim);
  if (perp_sq >= budget) {
    // amplified observation louder than the budget even off-axis: shrink
    // the off-axis part onto the power sphere (no axis budget left)
    const double scale = std::sqrt(budget / perp_sq);
    for (int i = 0; i < dim; ++i)
      out.x_r[i] = scale * (amplified[i] - along / axis_norm * axis[i]);
    out.axis_component = 0.0;
  } else {
    // keep the off-axis component, spend the rest of the budget along the
    // decided direction
    const double beta = std::sqrt(budget - perp_sq);
    for (int i = 0; i < dim; ++i)
      out.x_r[i] =
          amplified[i] + (beta - along) / axis_norm * axis[i];
    out.axis_component = beta;
  }
  double dist_sq = 0.0;
  for (int i = 0; i < dim; ++i) {
    out.compensation[i] = out.x_r[i] - amplified[i];
    const double d = out.x_r[i] - other[i];
    dist_sq += d * d;
  }
  out.distance_to_wrong = std::sqrt(dist_sq);
  return out;
}

namespace {

// Marsaglia-Tsang gamma sampler, shape >= 1, unit scale
double gamma_draw(Rng& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// squared length of a standard gaussian vector with df coordinates
double chi_square(Rng& rng, long long df) {
  if (df <= 0) return 0.0;
  const double shape = 0.5 * static_cast<double>(df);
  if (shape >= 1.0) return 2.0 * gamma_draw(rng, shape);
  // shape boost for df = 1: Gamma(a) = Gamma(a + 1) * U^(1/a)
  const double u = rng.uniform();
  return 2.0 * gamma_draw(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
}

struct PrecompPartial {
  long long decided = 0;
  long long correct = 0;
  long long violations = 0;
  long long errors_pre = 0;
  long long errors_plain = 0;
  long long stop_steps = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  double max_power_err = 0.0;
};

void check_precomp_config(const PrecompConfig& cfg, long long trials) {
  if (trials < 1) throw std::domain_error("need at least one trial");
  if (cfg.u < 2) throw std::domain_error("need at least two increments");
  if (!(cfg.decision_cap > 0.0) || cfg.decision_cap > 1.0)
    throw std::domain_error("decision cap must lie in (0, 1]");
  if (!(cfg.relay_error_target > 0.0) || cfg.relay_error_target >= 0.5)
    throw std::domain_error("relay error target must lie in (0, 0.5)");
}

// static chunking plus ordered merge keeps every report field independent
// of the worker count at a fixed seed
template <typename RunRange>
PrecompReport run_precomp_chunks(const PrecompConfig& cfg, long long trials,
                                 int workers, RunRange&& run_range) {
  const int nw =
      static_cast<int>(std::min<long long>(std::max(workers, 1), trials));
  std::vector<PrecompPartial> parts(nw);
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

  PrecompReport rep;
  rep.trials = trials;
  long long stop_steps = 0;
  rep.min_distance_gap = std::numeric_limits<double>::infinity();
  for (const PrecompPartial& p : parts) {
    rep.relay_decided += p.decided;
    rep.relay_correct += p.correct;
    rep.dominance_violations += p.violations;
    rep.errors_precomp += p.errors_pre;
    rep.errors_plain += p.errors_plain;
    stop_steps += p.stop_steps;
    rep.min_distance_gap = std::min(rep.min_distance_gap, p.min_gap);
    rep.max_power_error = std::max(rep.max_power_error, p.max_power_err);
  }
  rep.mean_relay_stop_fraction =
      static_cast<double>(stop_steps) / (static_cast<double>(cfg.u) * trials);
  return rep;
}

}  // namespace

PrecompReport af_precomp_campaign(const PrecompConfig& cfg, long long trials,
                                  uint64_t seed, int workers) {
  check_precomp_config(cfg, trials);
  if (cfg.n < 4)
    throw std::domain_error("projected campaign needs at least four dimensions");
  if (cfg.diff_dims < 1 || cfg.diff_dims > cfg.n)
    throw std::domain_error("differing dimensions must lie in [1, n]");

  const double rho = std::pow(10.0, cfg.snr_db / 10.0);
  const double budget = static_cast<double>(cfg.n) * rho;
  const double half_gap = std::sqrt(static_cast<double>(cfg.diff_dims) * rho);
  const double shared_mag =
      std::sqrt(static_cast<double>(cfg.n - cfg.diff_dims) * rho);
  const double gain = af_gain(rho);
  const double amp = std::sqrt(gain);
  const double log_b =
      std::log((1.0 - cfg.relay_error_target) / cfg.relay_error_target);
  const int cap = static_cast<int>(cfg.decision_cap * cfg.u);
  const double inv_sqrt_u = 1.0 / std::sqrt(static_cast<double>(cfg.u));

  auto run_range = [&](long long lo, long long hi, PrecompPartial* out) {
    for (long long trial = lo; trial < hi; ++trial) {
      const uint64_t ts = derive_seed(seed, static_cast<uint64_t>(trial));
      Rng pick(derive_seed(ts, 0));
      const long long msg = static_cast<long long>(pick.below(2));
      const double sign_msg = msg == 0 ? 1.0 : -1.0;
      const double x_axis = sign_msg * half_gap;

      // hop 1: the capped log-likelihood walk depends on the observation
      // only through its pair-difference projection, one draw per step
      Rng hop1(derive_seed(ts, 1));
      const double drift = 2.0 * sign_msg * half_gap * half_gap / cfg.u;
      const double wiggle = 2.0 * half_gap * inv_sqrt_u;
      double walk = 0.0;
      double llr = 0.0;
      int stop = cfg.u;
      long long decided = -1;
      for (int t = 0; t < cfg.u && decided < 0; ++t) {
        const double gstep = hop1.gaussian();
        walk += gstep;
        llr += drift + wiggle * gstep;
        if (t + 1 <= cap && std::abs(llr) >= log_b) {
          stop = t + 1;
          decided = llr >= 0.0 ? 0 : 1;
        }
      }
      out->stop_steps += stop;
      const double tau = static_cast<double>(stop) / cfg.u;

      // full-window noise in three coordinates: pair-difference axis,
      // shared codeword direction, squared remainder magnitude
      double n_axis, n_shared, rem_full_sq;
      double pre_axis = 0.0, pre_shared = 0.0, pre_rem_sq = 0.0;
      bool have_pre = false;

      if (decided >= 0) {
        // split the window at the decision: the observed part drives the
        // relay, the unobserved complement tops up the full window
        const double w_axis = walk * inv_sqrt_u;
        const double comp = std::sqrt(1.0 - tau);
        n_axis = w_axis + comp * hop1.gaussian();
        const double w_shared = std::sqrt(tau) * hop1.gaussian();
        n_shared = w_shared + comp * hop1.gaussian();
        const double rem_dec_sq = tau * chi_square(hop1, cfg.n - 2);
        const double along_rem = std::sqrt(rem_dec_sq) + comp * hop1.gaussian();
        rem_full_sq =
            along_rem * along_rem + (1.0 - tau) * chi_square(hop1, cfg.n - 3);

        // amplify the partial observation, keep its off-axis part, spend
        // the rest of the power budget along the decided direction
        const double a_shared = amp * (tau * shared_mag + w_shared);
        const double a_rem_sq = gain * rem_dec_sq;
        const double perp_sq = a_shared * a_shared + a_rem_sq;
        const double sgn_dec = decided == 0 ? 1.0 : -1.0;
        if (perp_sq >= budget) {
          const double scale = std::sqrt(budget / perp_sq);
          pre_shared = scale * a_shared;
          pre_rem_sq = scale * scale * a_rem_sq;
        } else {
          pre_axis = sgn_dec * std::sqrt(budget - perp_sq);
          pre_shared = a_shared;
          pre_rem_sq = a_rem_sq;
        }
        have_pre = true;

        const double power_sq =
            pre_axis * pre_axis + pre_shared * pre_shared + pre_rem_sq;
        out->max_power_err = std::max(out->max_power_err,
                                      std::abs(power_sq - budget) / budget);
        ++out->decided;
        if (decided == msg) {
          ++out->correct;
          // the codeword that was not sent sits at -x_axis on the axis
          const double dp_axis = pre_axis + x_axis;
          const double dp_shared = pre_shared - shared_mag;
          const double d_pre = std::sqrt(dp_axis * dp_axis +
                                         dp_shared * dp_shared + pre_rem_sq);
          const double pl_axis = amp * (x_axis + n_axis) + x_axis;
          const double pl_shared = amp * (shared_mag + n_shared) - shared_mag;
          const double d_plain =
              std::sqrt(pl_axis * pl_axis + pl_shared * pl_shared +
                        gain * rem_full_sq);
          const double gap = d_pre - d_plain;
          out->min_gap = std::min(out->min_gap, gap);
          if (gap < 0.0) ++out->violations;
        }
      } else {
        n_axis = walk * inv_sqrt_u;
        n_shared = hop1.gaussian();
        rem_full_sq = chi_square(hop1, cfg.n - 2);
      }

      // second hop: shared noise across arms; only the axis coordinate
      // enters the destination's pair decision
      Rng hop2(derive_seed(ts, 2));
      const double n2_axis = hop2.gaussian();
      const double plain_axis = amp * (x_axis + n_axis);
      const double relay_axis = have_pre ? pre_axis : plain_axis;
      if ((relay_axis + n2_axis >= 0.0 ? 0 : 1) != msg) ++out->errors_pre;
      if ((plain_axis + n2_axis >= 0.0 ? 0 : 1) != msg) ++out->errors_plain;
    }
  };

  return run_precomp_chunks(cfg, trials, workers, run_range);
}

PrecompReport af_precomp_campaign_reference(const PrecompConfig& cfg,
                                            long long trials, uint64_t seed,
                                            int workers) {
  check_precomp_config(cfg, trials);

  const double rho = std::pow(10.0, cfg.snr_db / 10.0);
  const Codebook cb = binary_pair_codebook(cfg.n, cfg.diff_dims, rho);
  const std::vector<double> words[2] = {cb.codeword_vec(0), cb.codeword_vec(1)};
  const int dim = cb.dim();
  const double budget = cb.n * cb.rho;
  const double log_b =
      std::log((1.0 - cfg.relay_error_target) / cfg.relay_error_target);
  const int cap = static_cast<int>(cfg.decision_cap * cfg.u);
  const double inv_sqrt_u = 1.0 / std::sqrt(static_cast<double>(cfg.u));

  auto run_range = [&](long long lo, long long hi, PrecompPartial* out) {
    std::vector<double> delta(dim);
    for (int i = 0; i < dim; ++i) delta[i] = words[0][i] - words[1][i];

    std::vector<double> y_cum(dim);
    std::vector<double> y_dec(dim);
    for (long long trial = lo; trial < hi; ++trial) {
      const uint64_t ts = derive_seed(seed, static_cast<uint64_t>(trial));
      Rng pick(derive_seed(ts, 0));
      const long long msg = static_cast<long long>(pick.below(2));
      const double* sent = words[msg].data();

      // hop 1: relay runs a capped binary log-likelihood walk while the
      // full-window observation keeps accumulating for the plain arm
      Rng hop1(derive_seed(ts, 1));
      std::fill(y_cum.begin(), y_cum.end(), 0.0);
      double llr = 0.0;
      int stop = cfg.u;
      long long decided = -1;
      for (int t = 0; t < cfg.u; ++t) {
        double step = 0.0;
        for (int i = 0; i < dim; ++i) {
          const double inc = sent[i] * inv_sqrt_u + hop1.gaussian();
          y_cum[i] += inc;
          step += inc * delta[i];
        }
        if (decided < 0) {
          llr += step * inv_sqrt_u;
          if (t + 1 <= cap && std::abs(llr) >= log_b) {
            stop = t + 1;
            decided = llr >= 0.0 ? 0 : 1;
            y_dec = y_cum;
          }
        }
      }

      // plain arm always amplifies the full observation with fixed gain
      std::vector<double> y_full = y_cum;
      for (int i = 0; i < dim; ++i) y_full[i] *= inv_sqrt_u;
      const std::vector<double> plain = af_amplify(y_full, rho);

      std::vector<double> pre = plain;
      out->stop_steps += stop;
      if (decided >= 0) {
        RelayState state;
        state.accumulated.resize(dim);
        for (int i = 0; i < dim; ++i)
          state.accumulated[i] = y_dec[i] * inv_sqrt_u;
        state.observed_fraction = static_cast<double>(stop) / cfg.u;
        state.decided = true;
        state.decided_message = decided;
        const RelayOutput relay = af_precompensate(state, cb, rho, 1.0);
        pre = relay.x_r;

        double power_sq = 0.0;
        for (int i = 0; i < dim; ++i) power_sq += pre[i] * pre[i];
        out->max_power_err = std::max(
            out->max_power_err, std::abs(power_sq - budget) / budget);

        ++out->decided;
        if (decided == msg) {
          ++out->correct;
          double plain_sq = 0.0;
          for (int i = 0; i < dim; ++i) {
            const double d = plain[i] - words[1 - msg][i];
            plain_sq += d * d;
          }
          const double gap = relay.distance_to_wrong - std::sqrt(plain_sq);
          out->min_gap = std::min(out->min_gap, gap);
          if (gap < 0.0) ++out->violations;
        }
      }

      // second hop with shared noise across the two arms
      Rng hop2(derive_seed(ts, 2));
      double score_pre = 0.0, score_plain = 0.0;
      for (int i = 0; i < dim; ++i) {
        const double noise = hop2.gaussian();
        score_pre += (pre[i] + noise) * delta[i];
        score_plain += (plain[i] + noise) * delta[i];
      }
      const long long dec_pre = score_pre >= 0.0 ? 0 : 1;
      const long long dec_plain = score_plain >= 0.0 ? 0 : 1;
      if (dec_pre != msg) ++out->errors_pre;
      if (dec_plain != msg) ++out->errors_plain;
    }
  };

  return run_precomp_chunks(cfg, trials, workers, run_range);
}

std::vector<StrategyRow> compare_strategies(double k, double power,
                                            double symbol_time, double eps,
                                            int hops) {
  check_hops(hops);
  if (!(symbol_time > 0.0)) throw std::domain_error("symbol time must be positive");

  double df_seconds = std::numeric_limits<double>::quiet_NaN();
  std::vector<StrategyRow> rows;
  auto add = [&](const std::string& name, int parts, auto&& latency_fn) {
    StrategyRow row;
    row.strategy = name;
    row.parts = parts;
    try {
      row.latency_seconds = latency_fn();
      row.latency_symbols = row.latency_seconds / symbol_time;
    } catch (const InfeasibleError&) {
      row.feasible = false;
      row.latency_seconds = std::numeric_limits<double>::infinity();
      row.latency_symbols = std::numeric_limits<double>::infinity();
    }
    rows.push_back(std::move(row));
  };

  add("af", 1, [&] { return af_min_latency(k, power, symbol_time, eps, hops).latency; });
  add("df", 1, [&] {
    return split_latency(k, power, symbol_time, eps, hops, 1).total_latency;
  });
  for (int q : {2, 4, 8}) {
    if (k < q) break;
    add("split-df", q, [&] {
      return split_latency(k, power, symbol_time, eps, hops, q).total_latency;
    });
  }
  for (int q : {1, 2, 4, 8}) {
    if (k < q) break;
    add("df-early", q, [&] {
      return df_early_latency(k, power, symbol_time, eps, hops, q);
    });
  }
  add("af-early", 1, [&] {
    const MinLatencyResult chain = af_min_latency(k, power, symbol_time, eps, hops);
    const double chain_snr = af_overall_snr(power * symbol_time, hops);
    const double tau = average_latency(chain_snr / symbol_time,
                                       k / chain.n_real, chain.n_real, symbol_time);
    return chain.latency * tau;
  });

  for (StrategyRow& row : rows) {
    if (row.strategy == "df" && row.feasible) df_seconds = row.latency_seconds;
  }
  for (StrategyRow& row : rows) {
    row.latency_normalized =
        row.feasible && df_seconds > 0.0 ? row.latency_seconds / df_seconds
                                         : std::numeric_limits<double>::infinity();
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const StrategyRow& a, const StrategyRow& b) {
                     if (a.feasible != b.feasible) return a.feasible;
                     return a.latency_seconds < b.latency_seconds;
                   });
  return rows;
}

}  // namespace latlab
