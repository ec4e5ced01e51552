#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "latlab/early_latency.hpp"
#include "latlab/fbl_bounds.hpp"
#include "latlab/multihop.hpp"

using namespace latlab;

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

const StrategyRow& find_row(const std::vector<StrategyRow>& rows,
                            const std::string& name, int parts) {
  for (const StrategyRow& r : rows)
    if (r.strategy == name && r.parts == parts) return r;
  REQUIRE(false);
  return rows.front();
}

}  // namespace

TEST_CASE("relay chain gain matches the per-hop recursion") {
  // every relay renormalizes the received power P+1 back to P, so the
  // power gain is constant; signal scales by it, noise scales and adds one
  for (double p : {0.1, 1.0, 10.0, 100.0}) {
    const double g = af_gain(p);
    CHECK(g == doctest::Approx(p / (p + 1.0)).epsilon(1e-15));
    double sig = p;
    double noise = 1.0;
    double prev = 2.0 * p;
    for (int h = 1; h <= 50; ++h) {
      if (h > 1) {
        sig *= g;
        noise = noise * g + 1.0;
      }
      const double snr = af_overall_snr(p, h);
      CHECK(snr == doctest::Approx(sig / noise).epsilon(1e-12));
      CHECK(snr > 0.0);
      CHECK(snr < prev);
      prev = snr;
    }
  }

  CHECK(af_overall_snr(1.0, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(af_overall_snr(5.0, 1) == doctest::Approx(5.0).epsilon(1e-15));
  // long chains forget the signal entirely
  CHECK(af_overall_snr(10.0, 200) < 1e-6);

  CHECK_THROWS_AS(af_overall_snr(0.0, 2), std::domain_error);
  CHECK_THROWS_AS(af_overall_snr(-1.0, 2), std::domain_error);
  CHECK_THROWS_AS(af_overall_snr(1.0, 0), std::domain_error);
  CHECK_THROWS_AS(af_gain(0.0), std::domain_error);
}

TEST_CASE("relay chain latency reduces to the direct link at one hop") {
  const MinLatencyResult direct = min_latency(200.0, 2.5, 1.0, 1e-7);
  const MinLatencyResult chain = af_min_latency(200.0, 2.5, 1.0, 1e-7, 1);
  CHECK(chain.n_real == direct.n_real);
  CHECK(chain.n_symbols == direct.n_symbols);
  CHECK(chain.latency == direct.latency);

  // each extra hop degrades the end-to-end SNR, so latency grows
  double prev = chain.latency;
  for (int h = 2; h <= 5; ++h) {
    const double cur = af_min_latency(200.0, 2.5, 1.0, 1e-7, h).latency;
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK(af_min_latency(200.0, 2.5, 1.0, 1e-7, 2).latency ==
        doctest::Approx(599.365213).epsilon(1e-6));
  CHECK(af_min_latency(200.0, 2.5, 1.0, 1e-7, 5).latency ==
        doctest::Approx(2307.279161).epsilon(1e-6));

  // equal energy per symbol gives the same blocklength at any symbol pace
  const MinLatencyResult slow = af_min_latency(200.0, 2.5, 1.0, 1e-7, 2);
  const MinLatencyResult fast = af_min_latency(200.0, 5.0, 0.5, 1e-7, 2);
  CHECK(fast.n_symbols == slow.n_symbols);
  CHECK(fast.latency == doctest::Approx(0.5 * slow.latency).epsilon(1e-12));

  CHECK_THROWS_AS(af_min_latency(200.0, 2.5, 0.0, 1e-7, 2), std::domain_error);
  CHECK_THROWS_AS(af_min_latency(200.0, 2.5, 1.0, 1e-7, 0), std::domain_error);
}

TEST_CASE("store-and-forward latency scales with hop count") {
  CHECK(df_latency(10.0, 3) == 30.0);
  CHECK(df_latency(2.5, 1) == 2.5);
  CHECK_THROWS_AS(df_latency(10.0, 0), std::domain_error);
  CHECK_THROWS_AS(df_latency(0.0, 2), std::domain_error);
  CHECK_THROWS_AS(df_latency(-1.0, 2), std::domain_error);
}

TEST_CASE("message splitting trades per-part blocklength against pipeline fill") {
  // one part: the whole message crosses each hop in sequence
  const SplitPlan whole = split_latency(1e4, 10.0, 1.0, 1e-7, 2, 1);
  CHECK(whole.parts == 1);
  CHECK(whole.bits_per_part == 1e4);
  CHECK(whole.eps_part == doctest::Approx(5e-8).epsilon(1e-15));
  CHECK(whole.total_latency == df_latency(whole.per_part.latency, 2));

  // long message at good SNR: splitting shortens the pipeline, with
  // diminishing returns as the per-part dispersion penalty grows
  const double t1 = whole.total_latency;
  const double t2 = split_latency(1e4, 10.0, 1.0, 1e-7, 2, 2).total_latency;
  const double t4 = split_latency(1e4, 10.0, 1.0, 1e-7, 2, 4).total_latency;
  const double t8 = split_latency(1e4, 10.0, 1.0, 1e-7, 2, 8).total_latency;
  CHECK(t1 == doctest::Approx(12040.830795).epsilon(1e-8));
  CHECK(t2 == doctest::Approx(9193.627190).epsilon(1e-8));
  CHECK(t4 == doctest::Approx(7860.198836).epsilon(1e-8));
  CHECK(t8 == doctest::Approx(7338.043393).epsilon(1e-8));
  CHECK(t2 < t1);
  CHECK(t4 < t2);
  CHECK(t8 < t4);
  CHECK((t4 - t8) / t1 < 0.05);

  // short message at poor SNR: the per-part overhead wins and splitting hurts
  const double s1 = split_latency(40.0, 0.1, 1.0, 1e-7, 2, 1).total_latency;
  const double s2 = split_latency(40.0, 0.1, 1.0, 1e-7, 2, 2).total_latency;
  CHECK(s1 == doctest::Approx(3920.028046).epsilon(1e-8));
  CHECK(s2 == doctest::Approx(4600.595730).epsilon(1e-8));
  CHECK(s2 > s1);

  // parts carry whole bits and split the error budget across parts and hops
  const SplitPlan odd = split_latency(103.0, 10.0, 1.0, 1e-6, 2, 4);
  CHECK(odd.bits_per_part == 26.0);
  CHECK(odd.eps_part == doctest::Approx(1e-6 / 8.0).epsilon(1e-15));
  const MinLatencyResult part =
      min_latency(odd.bits_per_part, 10.0, 1.0, odd.eps_part);
  CHECK(odd.per_part.latency == part.latency);
  CHECK(odd.total_latency == doctest::Approx(part.latency * 5.0).epsilon(1e-15));

  const SplitPlan naive = split_latency(103.0, 10.0, 1.0, 1e-6, 2, 4, true);
  CHECK(naive.eps_part == 1e-6);
  CHECK(naive.total_latency < odd.total_latency);

  CHECK_THROWS_AS(split_latency(100.0, 10.0, 1.0, 1e-6, 2, 0), std::domain_error);
  CHECK_THROWS_AS(split_latency(3.0, 10.0, 1.0, 1e-6, 2, 4), std::domain_error);
  CHECK_THROWS_AS(split_latency(100.0, 10.0, 1.0, 1e-6, 0, 1), std::domain_error);
}

TEST_CASE("early detection shortens the store-and-forward pipeline") {
  // single hop, single part: expected stop fraction times the full block
  const SplitPlan plan = split_latency(200.0, 2.5, 1.0, 1e-7, 1, 1);
  const double tau = average_latency(2.5, plan.bits_per_part / plan.per_part.n_real,
                                     plan.per_part.n_real, 1.0);
  const double one = df_early_latency(200.0, 2.5, 1.0, 1e-7, 1, 1);
  CHECK(one == doctest::Approx(tau * plan.per_part.latency).epsilon(1e-12));
  CHECK(one == doctest::Approx(172.947095229).epsilon(1e-9));
  CHECK(tau == doctest::Approx(0.545846499).epsilon(1e-8));

  // with a shared per-hop error budget the pipeline is exactly h times the
  // single hop; the default split budget tightens eps and lands close by
  const double naive1 = df_early_latency(200.0, 2.5, 1.0, 1e-7, 1, 1, true);
  const double naive3 = df_early_latency(200.0, 2.5, 1.0, 1e-7, 3, 1, true);
  CHECK(naive3 == doctest::Approx(3.0 * naive1).epsilon(1e-14));
  const double three = df_early_latency(200.0, 2.5, 1.0, 1e-7, 3, 1);
  CHECK(three == doctest::Approx(515.178484558).epsilon(1e-9));
  CHECK(three > one);
  CHECK(three / (3.0 * one) > 0.97);
  CHECK(three / (3.0 * one) < 1.0);

  // operating point solved for a target synchronous error: stopping early
  // beats waiting for the full block on every hop
  const double pw = solve_power_for_final_error(0.5, 300.0, 1e-9, 1.0);
  CHECK(pw == doctest::Approx(2.120609428).epsilon(1e-8));
  const double early = df_early_latency(150.0, pw, 1.0, 1e-6, 2, 1);
  const double sync = split_latency(150.0, pw, 1.0, 1e-6, 2, 1).total_latency;
  CHECK(early == doctest::Approx(285.259546).epsilon(1e-7));
  CHECK(sync == doctest::Approx(545.844157).epsilon(1e-7));
  CHECK(early < sync);

  CHECK_THROWS_AS(df_early_latency(100.0, 2.5, 1.0, 1e-7, 2, 0), std::domain_error);
}

TEST_CASE("binary pair codebooks differ on a prefix of coordinates") {
  const Codebook cb = binary_pair_codebook(6, 2, 2.0);
  CHECK(cb.n == 6);
  CHECK(cb.k == 1);
  CHECK(cb.dim() == 6);
  CHECK(cb.size() == 2);
  const std::vector<double> c0 = cb.codeword_vec(0);
  const std::vector<double> c1 = cb.codeword_vec(1);
  const double amp = std::sqrt(2.0);
  for (int i = 0; i < 6; ++i) {
    CHECK(c0[i] == doctest::Approx(amp).epsilon(1e-15));
    CHECK(c1[i] == doctest::Approx(i < 2 ? -amp : amp).epsilon(1e-15));
  }
  CHECK(dot(c0, c0) == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(dot(c1, c1) == doctest::Approx(12.0).epsilon(1e-15));
  const double gap = dist(c0, c1);
  CHECK(gap * gap == doctest::Approx(4.0 * 2 * 2.0).epsilon(1e-12));

  CHECK_THROWS_AS(binary_pair_codebook(0, 1, 1.0), std::domain_error);
  CHECK_THROWS_AS(binary_pair_codebook(6, 0, 1.0), std::domain_error);
  CHECK_THROWS_AS(binary_pair_codebook(6, 7, 1.0), std::domain_error);
  CHECK_THROWS_AS(binary_pair_codebook(6, 2, 0.0), std::domain_error);
}

TEST_CASE("pre-compensation respends the power budget along the decided axis") {
  const double rho = 2.0;
  const Codebook cb = binary_pair_codebook(8, 2, rho);
  const std::vector<double> c0 = cb.codeword_vec(0);
  const std::vector<double> c1 = cb.codeword_vec(1);
  const double budget = 8 * rho;
  const double g = af_gain(rho);
  const double amp = std::sqrt(g);

  SUBCASE("clean full observation") {
    RelayState st;
    st.accumulated = c0;
    st.observed_fraction = 1.0;
    st.decided = true;
    st.decided_message = 0;
    const RelayOutput out = af_precompensate(st, cb, rho, 1.0);

    // closed form: the amplified copy keeps sqrt(g) of the shared part,
    // and the axis gets everything the budget has left
    const double half_gap = std::sqrt(2 * rho);
    const double shared = std::sqrt(6 * rho);
    const double beta = std::sqrt(budget - g * shared * shared);
    CHECK(out.axis_component == doctest::Approx(beta).epsilon(1e-12));
    CHECK(dot(out.x_r, out.x_r) == doctest::Approx(budget).epsilon(1e-12));
    const double want =
        std::sqrt((beta + half_gap) * (beta + half_gap) +
                  shared * shared * (amp - 1.0) * (amp - 1.0));
    CHECK(out.distance_to_wrong == doctest::Approx(want).epsilon(1e-12));
    CHECK(out.distance_to_wrong == doctest::Approx(dist(out.x_r, c1)).epsilon(1e-12));

    // the correction only moves along the codeword difference
    CHECK(out.compensation[0] == doctest::Approx(out.compensation[1]).epsilon(1e-12));
    for (int i = 2; i < 8; ++i) CHECK(std::abs(out.compensation[i]) < 1e-12);
    for (int i = 0; i < 8; ++i)
      CHECK(out.x_r[i] ==
            doctest::Approx(amp * c0[i] + out.compensation[i]).epsilon(1e-12));
  }

  SUBCASE("partial noisy observation keeps the invariants") {
    RelayState st;
    st.accumulated.resize(8);
    const double bump[8] = {0.3, -0.2, 0.5, -0.4, 0.1, 0.7, -0.6, 0.2};
    for (int i = 0; i < 8; ++i) st.accumulated[i] = 0.4 * c0[i] + bump[i];
    st.observed_fraction = 0.4;
    st.decided = true;
    st.decided_message = 0;
    const RelayOutput out = af_precompensate(st, cb, rho, 1.0);
    CHECK(dot(out.x_r, out.x_r) == doctest::Approx(budget).epsilon(1e-12));
    CHECK(out.axis_component >= 0.0);
    CHECK(out.distance_to_wrong == doctest::Approx(dist(out.x_r, c1)).epsilon(1e-12));
    std::vector<double> rebuilt(8);
    for (int i = 0; i < 8; ++i)
      rebuilt[i] = amp * st.accumulated[i] + out.compensation[i];
    for (int i = 0; i < 8; ++i)
      CHECK(out.x_r[i] == doctest::Approx(rebuilt[i]).epsilon(1e-12));
  }

  SUBCASE("off-axis overload falls back to scaling onto the power sphere") {
    RelayState st;
    st.accumulated.assign(8, 10.0);
    st.accumulated[0] = 0.0;
    st.accumulated[1] = 0.0;
    st.observed_fraction = 1.0;
    st.decided = true;
    st.decided_message = 0;
    const RelayOutput out = af_precompensate(st, cb, rho, 1.0);
    CHECK(out.axis_component == 0.0);
    CHECK(dot(out.x_r, out.x_r) == doctest::Approx(budget).epsilon(1e-12));
    CHECK(std::abs(out.x_r[0]) < 1e-12);
    CHECK(std::abs(out.x_r[1]) < 1e-12);
    for (int i = 3; i < 8; ++i)
      CHECK(out.x_r[i] == doctest::Approx(out.x_r[2]).epsilon(1e-12));
  }

  SUBCASE("rejects inconsistent relay state") {
    RelayState st;
    st.accumulated = c0;
    st.observed_fraction = 1.0;
    st.decided = true;
    st.decided_message = 0;

    RelayState undecided = st;
    undecided.decided = false;
    CHECK_THROWS_AS(af_precompensate(undecided, cb, rho, 1.0), std::logic_error);

    RelayState bad_frac = st;
    bad_frac.observed_fraction = 0.0;
    CHECK_THROWS_AS(af_precompensate(bad_frac, cb, rho, 1.0), std::domain_error);
    bad_frac.observed_fraction = 1.5;
    CHECK_THROWS_AS(af_precompensate(bad_frac, cb, rho, 1.0), std::domain_error);

    RelayState short_vec = st;
    short_vec.accumulated.resize(7);
    CHECK_THROWS_AS(af_precompensate(short_vec, cb, rho, 1.0), std::domain_error);

    Codebook multi = cb;
    multi.k = 2;
    CHECK_THROWS_AS(af_precompensate(st, multi, rho, 1.0), std::domain_error);
    Codebook impl = cb;
    impl.implicit = true;
    CHECK_THROWS_AS(af_precompensate(st, impl, rho, 1.0), std::domain_error);

    CHECK_THROWS_AS(af_precompensate(st, cb, 1.01 * rho, 1.0), std::domain_error);
  }
}

TEST_CASE("pre-compensation campaign dominates plain amplify-and-forward") {
  PrecompConfig cfg;
  cfg.relay_error_target = 2e-4;

  SUBCASE("0 dB, wide pair") {
    cfg.snr_db = 0.0;
    cfg.diff_dims = 16;
    const PrecompReport r = af_precomp_campaign(cfg, 100000, 99, 4);
    CHECK(r.trials == 100000);
    CHECK(r.relay_decided == 99823);
    CHECK(r.relay_correct == 99810);
    CHECK(r.dominance_violations == 0);
    CHECK(r.errors_precomp == 53);
    CHECK(r.errors_plain == 1083);
    CHECK(r.errors_precomp < r.errors_plain);
    CHECK(r.min_distance_gap == doctest::Approx(3.963598598).epsilon(1e-9));
    CHECK(r.min_distance_gap > 0.0);
    CHECK(r.mean_relay_stop_fraction == doctest::Approx(0.2833991).epsilon(1e-9));
    CHECK(r.max_power_error < 1e-12);
  }

  SUBCASE("5 dB, medium pair") {
    cfg.snr_db = 5.0;
    cfg.diff_dims = 5;
    const PrecompReport r = af_precomp_campaign(cfg, 20000, 99, 4);
    CHECK(r.relay_decided == 19963);
    CHECK(r.relay_correct == 19961);
    CHECK(r.dominance_violations == 0);
    CHECK(r.errors_precomp == 8);
    CHECK(r.errors_plain == 112);
    CHECK(r.min_distance_gap == doctest::Approx(13.666763888).epsilon(1e-9));
    CHECK(r.mean_relay_stop_fraction == doctest::Approx(0.2875455).epsilon(1e-9));
    CHECK(r.max_power_error < 1e-12);
  }

  SUBCASE("10 dB, narrow pair") {
    cfg.snr_db = 10.0;
    cfg.diff_dims = 2;
    const PrecompReport r = af_precomp_campaign(cfg, 20000, 99, 4);
    CHECK(r.relay_decided == 19999);
    CHECK(r.relay_correct == 19997);
    CHECK(r.dominance_violations == 0);
    CHECK(r.errors_precomp == 2);
    CHECK(r.errors_plain == 21);
    CHECK(r.min_distance_gap == doctest::Approx(35.739825281).epsilon(1e-9));
    CHECK(r.mean_relay_stop_fraction == doctest::Approx(0.2293245).epsilon(1e-9));
    CHECK(r.max_power_error < 1e-12);
  }

  SUBCASE("rejects bad configuration") {
    CHECK_THROWS_AS(af_precomp_campaign(cfg, 0, 1, 1), std::domain_error);
    PrecompConfig bad = cfg;
    bad.u = 1;
    CHECK_THROWS_AS(af_precomp_campaign(bad, 10, 1, 1), std::domain_error);
    bad = cfg;
    bad.decision_cap = 0.0;
    CHECK_THROWS_AS(af_precomp_campaign(bad, 10, 1, 1), std::domain_error);
    bad = cfg;
    bad.relay_error_target = 0.7;
    CHECK_THROWS_AS(af_precomp_campaign(bad, 10, 1, 1), std::domain_error);
    bad = cfg;
    bad.n = 3;
    CHECK_THROWS_AS(af_precomp_campaign(bad, 10, 1, 1), std::domain_error);
    bad = cfg;
    bad.diff_dims = bad.n + 1;
    CHECK_THROWS_AS(af_precomp_campaign(bad, 10, 1, 1), std::domain_error);
  }
}

TEST_CASE("projected campaign agrees with the direct vector simulation") {
  // deliberately harsh operating point (small pair gap) so both paths see
  // dominance violations and real error mass, not just zeros
  PrecompConfig cfg;
  cfg.n = 64;
  cfg.diff_dims = 4;
  cfg.u = 50;
  cfg.snr_db = 3.0;
  cfg.relay_error_target = 1e-3;

  const PrecompReport fast = af_precomp_campaign(cfg, 8000, 7, 4);
  const PrecompReport ref = af_precomp_campaign_reference(cfg, 8000, 7, 4);

  CHECK(fast.relay_decided == 7546);
  CHECK(fast.relay_correct == 7542);
  CHECK(fast.dominance_violations == 9);
  CHECK(fast.errors_precomp == 120);
  CHECK(fast.errors_plain == 311);
  CHECK(fast.min_distance_gap == doctest::Approx(-0.990514763).epsilon(1e-9));
  CHECK(fast.mean_relay_stop_fraction == doctest::Approx(0.46067).epsilon(1e-9));

  CHECK(ref.relay_decided == 7562);
  CHECK(ref.relay_correct == 7555);
  CHECK(ref.dominance_violations == 13);
  CHECK(ref.errors_precomp == 120);
  CHECK(ref.errors_plain == 301);
  CHECK(ref.min_distance_gap == doctest::Approx(-1.412622346).epsilon(1e-9));
  CHECK(ref.mean_relay_stop_fraction == doctest::Approx(0.4626375).epsilon(1e-9));

  // different realizations, same distribution: summary statistics line up
  CHECK(std::abs(fast.relay_decided - ref.relay_decided) < 120);
  CHECK(std::abs(fast.errors_plain - ref.errors_plain) < 80);
  CHECK(std::abs(fast.errors_precomp - ref.errors_precomp) < 60);
  CHECK(std::abs(fast.mean_relay_stop_fraction - ref.mean_relay_stop_fraction) < 0.01);
  CHECK(fast.max_power_error < 1e-12);
  CHECK(ref.max_power_error < 1e-12);
}

TEST_CASE("campaign reports are identical for any worker count") {
  PrecompConfig cfg;
  cfg.n = 400;
  cfg.diff_dims = 8;
  cfg.snr_db = 5.0;

  const PrecompReport w1 = af_precomp_campaign(cfg, 4000, 31, 1);
  const PrecompReport w4 = af_precomp_campaign(cfg, 4000, 31, 4);
  const PrecompReport w8 = af_precomp_campaign(cfg, 4000, 31, 8);
  for (const PrecompReport* r : {&w4, &w8}) {
    CHECK(r->relay_decided == w1.relay_decided);
    CHECK(r->relay_correct == w1.relay_correct);
    CHECK(r->dominance_violations == w1.dominance_violations);
    CHECK(r->errors_precomp == w1.errors_precomp);
    CHECK(r->errors_plain == w1.errors_plain);
    CHECK(r->mean_relay_stop_fraction == w1.mean_relay_stop_fraction);
    CHECK(r->min_distance_gap == w1.min_distance_gap);
    CHECK(r->max_power_error == w1.max_power_error);
  }

  PrecompConfig small;
  small.n = 64;
  small.diff_dims = 4;
  small.u = 50;
  small.snr_db = 3.0;
  const PrecompReport ra = af_precomp_campaign_reference(small, 1200, 5, 1);
  const PrecompReport rb = af_precomp_campaign_reference(small, 1200, 5, 3);
  CHECK(ra.relay_decided == rb.relay_decided);
  CHECK(ra.relay_correct == rb.relay_correct);
  CHECK(ra.dominance_violations == rb.dominance_violations);
  CHECK(ra.errors_precomp == rb.errors_precomp);
  CHECK(ra.errors_plain == rb.errors_plain);
  CHECK(ra.mean_relay_stop_fraction == rb.mean_relay_stop_fraction);
  CHECK(ra.min_distance_gap == rb.min_distance_gap);
  CHECK(ra.max_power_error == rb.max_power_error);
}

TEST_CASE("strategy table is sorted and normalized against store-and-forward") {
  const std::vector<StrategyRow> rows =
      compare_strategies(1e4, 10.0, 1.0, 1e-7, 2);
  CHECK(rows.size() == 10);  // af, df, 3 splits, 4 early, af-early

  const StrategyRow& df = find_row(rows, "df", 1);
  CHECK(df.feasible);
  CHECK(df.latency_normalized == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(df.latency_seconds == doctest::Approx(12040.830795).epsilon(1e-8));

  const StrategyRow& split8 = find_row(rows, "split-df", 8);
  CHECK(split8.latency_seconds ==
        doctest::Approx(split_latency(1e4, 10.0, 1.0, 1e-7, 2, 8).total_latency)
            .epsilon(1e-15));
  CHECK(split8.latency_normalized ==
        doctest::Approx(split8.latency_seconds / df.latency_seconds).epsilon(1e-12));

  for (const StrategyRow& r : rows) {
    CHECK(r.feasible);
    CHECK(r.latency_symbols == doctest::Approx(r.latency_seconds).epsilon(1e-15));
  }
  for (size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i - 1].latency_seconds <= rows[i].latency_seconds);

  // single hop: relaying strategies collapse onto the direct link
  const std::vector<StrategyRow> one = compare_strategies(200.0, 2.5, 1.0, 1e-7, 1);
  const StrategyRow& af1 = find_row(one, "af", 1);
  const StrategyRow& df1 = find_row(one, "df", 1);
  CHECK(af1.latency_seconds == df1.latency_seconds);
  CHECK(af1.latency_seconds ==
        doctest::Approx(min_latency(200.0, 2.5, 1.0, 1e-7).latency).epsilon(1e-15));

  // tiny messages cannot split into more parts than bits
  const std::vector<StrategyRow> tiny = compare_strategies(3.0, 10.0, 1.0, 1e-6, 2);
  CHECK(tiny.size() == 6);  // af, df, split-2, early-1, early-2, af-early

  CHECK_THROWS_AS(compare_strategies(100.0, 10.0, 1.0, 1e-6, 0), std::domain_error);
  CHECK_THROWS_AS(compare_strategies(100.0, 10.0, 0.0, 1e-6, 2), std::domain_error);
}
