#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latlab/early_latency.hpp"
#include "latlab/fbl_bounds.hpp"
#include "latlab/multihop.hpp"
#include "latlab/ofdm.hpp"
#include "latlab/seq_detect.hpp"

namespace py = pybind11;
using namespace latlab;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-blocklength latency laboratory: normal-approximation "
            "latency bounds, early-decision latency models, sequential "
            "detector campaigns, multicarrier distance geometry and "
            "multi-hop relay strategies.";

  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_ValueError);

  // ---- blocklength / latency bounds ------------------------------------
  py::enum_<PowerConstraint>(m, "PowerConstraint")
      .value("EQUAL_OR_MAXIMAL", PowerConstraint::kEqualOrMaximal)
      .value("AVERAGE", PowerConstraint::kAverage);

  py::class_<MinLatencyResult>(m, "MinLatencyResult")
      .def_readonly("n_real", &MinLatencyResult::n_real)
      .def_readonly("n_symbols", &MinLatencyResult::n_symbols)
      .def_readonly("latency", &MinLatencyResult::latency)
      .def("__repr__", [](const MinLatencyResult& r) {
        return "MinLatencyResult(n_real=" + std::to_string(r.n_real) +
               ", n_symbols=" + std::to_string(r.n_symbols) +
               ", latency=" + std::to_string(r.latency) + ")";
      });

  m.def("capacity", &capacity, py::arg("snr"),
        "AWGN capacity in bits per channel use at linear SNR.");
  m.def("dispersion", &dispersion, py::arg("snr"),
        "AWGN channel dispersion in bits^2 per channel use.");
  m.def("max_log_code_size", &max_log_code_size, py::arg("n"), py::arg("eps"),
        py::arg("snr"), py::arg("pc") = PowerConstraint::kEqualOrMaximal,
        "Normal-approximation log2 of the largest code size at blocklength "
        "n and error eps.");
  m.def("block_error_rate", &block_error_rate, py::arg("snr"), py::arg("rate"),
        py::arg("n"),
        "Error probability of the best rate-R length-n code (normal "
        "approximation).");
  m.def("achievable_rate", &achievable_rate, py::arg("n"), py::arg("eps"),
        py::arg("snr"), "Largest rate with error eps at blocklength n.");
  m.def("min_blocklength", &min_blocklength, py::arg("eps"), py::arg("eta"),
        py::arg("snr"),
        "Smallest real n achieving a fraction eta of capacity at error eps.");
  m.def("min_latency", &min_latency, py::arg("k"), py::arg("power"),
        py::arg("symbol_time"), py::arg("eps"),
        py::arg("pc") = PowerConstraint::kEqualOrMaximal,
        py::arg("n_max") = 1e8,
        "Smallest blocklength (and latency in seconds) delivering k bits at "
        "error eps under the power constraint. Raises InfeasibleError when "
        "no blocklength up to n_max works.");
  m.def("marginal_rate", &marginal_rate, py::arg("n"), py::arg("eps"),
        py::arg("snr"), "d/dn of n*achievable_rate: bits bought by one more "
        "channel use.");
  m.def("solve_snr_for_error", &solve_snr_for_error, py::arg("rate"),
        py::arg("n"), py::arg("eps"),
        "Linear SNR at which a rate-R length-n code meets error eps.");

  // ---- early-decision latency ------------------------------------------
  m.def("gamma_of_tau", &gamma_of_tau, py::arg("tau"), py::arg("power"),
        py::arg("rate"), py::arg("n"),
        "Normalized decision statistic at observation time tau; the "
        "residual error is Q(gamma).");
  m.def("stopping_cdf", &stopping_cdf, py::arg("tau"), py::arg("power"),
        py::arg("rate"), py::arg("n"),
        "P[decision by tau] = 1 - block_error_rate(P*tau, R, n).");
  m.def("average_latency", &average_latency, py::arg("power"), py::arg("rate"),
        py::arg("n"), py::arg("T"),
        "E[stopping time]/T of the earliest-correct-decision receiver over "
        "the window [0, T].");
  m.def("min_tau_bound", &min_tau_bound, py::arg("rate"), py::arg("power"),
        "Capacity lower bound on the stopping fraction.");
  m.def("checkpoint_latency", &checkpoint_latency, py::arg("checkpoints"),
        py::arg("power"), py::arg("rate"), py::arg("n"),
        "E[tau]/T when decisions happen only at the given increasing "
        "checkpoint fractions (last = 1).");
  m.def("checkpoint_latency_with_eps", &checkpoint_latency_with_eps,
        py::arg("checkpoints"), py::arg("eps_values"),
        "Checkpointed latency from caller-supplied residual errors.");
  m.def("solve_power_for_final_error", &solve_power_for_final_error,
        py::arg("rate"), py::arg("n"), py::arg("eps"), py::arg("T"),
        "Power P making the full-window error equal eps.");

  // ---- sequential detection campaigns ------------------------------------
  py::enum_<Modulation>(m, "Modulation")
      .value("BPSK", Modulation::kBpsk)
      .value("QPSK", Modulation::kQpsk);
  py::enum_<ThresholdMode>(m, "ThresholdMode")
      .value("COROLLARY", ThresholdMode::kCorollary)
      .value("LIST_POSTERIOR", ThresholdMode::kListPosterior);
  py::enum_<DetectorKind>(m, "DetectorKind")
      .value("MSPRT", DetectorKind::kMsprt)
      .value("WALD", DetectorKind::kWald)
      .value("CRC_GENIE", DetectorKind::kCrcGenie);

  py::class_<Codebook>(m, "Codebook")
      .def_readonly("n", &Codebook::n)
      .def_readonly("k", &Codebook::k)
      .def_readonly("mod", &Codebook::mod)
      .def_readonly("rho", &Codebook::rho)
      .def_readonly("implicit", &Codebook::implicit)
      .def("dim", &Codebook::dim)
      .def("size", &Codebook::size)
      .def("codeword", &Codebook::codeword_vec, py::arg("m"),
           "Flat real coordinates of codeword m (I/Q interleaved for QPSK).");

  m.def("gen_codebook", &gen_codebook, py::arg("n"), py::arg("k"),
        py::arg("mod"), py::arg("rho"), py::arg("seed"),
        "Random equal-energy codebook of 2^k words on n channel uses.");
  m.def("binary_pair_codebook", &binary_pair_codebook, py::arg("n"),
        py::arg("diff_dims"), py::arg("rho"),
        "Two BPSK words differing in exactly the first diff_dims "
        "dimensions.");

  py::class_<DetectorConfig>(m, "DetectorConfig")
      .def(py::init<>())
      .def_readwrite("list_size", &DetectorConfig::list_size)
      .def_readwrite("threshold_mode", &DetectorConfig::threshold_mode)
      .def_readwrite("fixed_threshold", &DetectorConfig::fixed_threshold)
      .def_readwrite("wald_a", &DetectorConfig::wald_a)
      .def_readwrite("wald_b", &DetectorConfig::wald_b)
      .def_readwrite("crc_width", &DetectorConfig::crc_width)
      .def_readwrite("min_tau_fraction", &DetectorConfig::min_tau_fraction);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("id", &Scenario::id)
      .def_readwrite("kind", &Scenario::kind)
      .def_readwrite("n", &Scenario::n)
      .def_readwrite("k", &Scenario::k)
      .def_readwrite("mod", &Scenario::mod)
      .def_readwrite("snr_db", &Scenario::snr_db)
      .def_readwrite("snr_is_ebn0", &Scenario::snr_is_ebn0)
      .def_readwrite("sync_target_error", &Scenario::sync_target_error)
      .def_readwrite("u", &Scenario::u)
      .def_readwrite("det", &Scenario::det)
      .def_readwrite("codebook_seed", &Scenario::codebook_seed);

  py::class_<LatencyReport>(m, "LatencyReport")
      .def_readonly("trials", &LatencyReport::trials)
      .def_readonly("error_rate", &LatencyReport::error_rate)
      .def_readonly("mean_stop_fraction", &LatencyReport::mean_stop_fraction)
      .def_readonly("stop_histogram", &LatencyReport::stop_histogram)
      .def_readonly("confidence_halfwidth",
                    &LatencyReport::confidence_halfwidth)
      .def("__repr__", [](const LatencyReport& r) {
        return "LatencyReport(trials=" + std::to_string(r.trials) +
               ", error_rate=" + std::to_string(r.error_rate) +
               ", mean_stop_fraction=" + std::to_string(r.mean_stop_fraction) +
               ")";
      });

  m.def("scenario_rho", &scenario_rho, py::arg("scenario"),
        "Linear per-channel-use SNR implied by the scenario power fields.");
  m.def("run_campaign", &run_campaign, py::arg("scenario"), py::arg("trials"),
        py::arg("seed"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>(),
        "Monte-Carlo stopping-time campaign; bit-identical for any worker "
        "count at a fixed seed.");
  m.def("wald_thresholds", &wald_thresholds, py::arg("pe"),
        "(A, B) binary SPRT thresholds for a symmetric error target.");
  m.def("sprt_stop_lower_bounds", &sprt_stop_lower_bounds, py::arg("d1"),
        py::arg("d2"), py::arg("alpha"), py::arg("gamma"), py::arg("a"),
        py::arg("b"),
        "Lower bounds on the expected stopping time of a binary SPRT.");
  m.def("error_upper_bound", &error_upper_bound, py::arg("thresholds"),
        py::arg("priors"),
        "Union-style error bound from per-hypothesis stopping thresholds.");
  m.def("dragalin_asymptotic", &dragalin_asymptotic, py::arg("s"),
        py::arg("d"), py::arg("moment"),
        "Asymptotic stopping-time moment (log(S/(1-S))/D)^i.");

  // ---- multicarrier distance geometry ------------------------------------
  py::enum_<PrecoderKind>(m, "PrecoderKind")
      .value("IDENTITY", PrecoderKind::kIdentity)
      .value("HADAMARD_SYLVESTER", PrecoderKind::kHadamardSylvester)
      .value("DFT_MATRIX", PrecoderKind::kDftMatrix)
      .value("RANDOM_ROTATION", PrecoderKind::kRandomRotation);

  py::class_<OfdmConfig>(m, "OfdmConfig")
      .def(py::init<>())
      .def_readwrite("n_subcarriers", &OfdmConfig::n_subcarriers)
      .def_readwrite("symbol_duration", &OfdmConfig::symbol_duration)
      .def_readwrite("time_grid", &OfdmConfig::time_grid);

  py::class_<Precoder>(m, "Precoder")
      .def_readonly("kind", &Precoder::kind)
      .def_readonly("n", &Precoder::n)
      .def("apply", &Precoder::apply, py::arg("x"));

  py::class_<DistanceCurve>(m, "DistanceCurve")
      .def_readonly("symbol_duration", &DistanceCurve::symbol_duration)
      .def_readonly("t_over_t", &DistanceCurve::t_over_t)
      .def_readonly("d_sq", &DistanceCurve::d_sq)
      .def_readonly("diff_support", &DistanceCurve::diff_support);

  m.def("make_precoder", &make_precoder, py::arg("kind"), py::arg("n"),
        py::arg("seed") = 0,
        "Unitary codeword transform; construction verifies unitarity.");
  m.def("neighbor_codebook", &neighbor_codebook, py::arg("n"), py::arg("k"),
        py::arg("rho"), py::arg("seed"),
        "QPSK codebook whose words pairwise differ in at most two "
        "subcarriers.");
  m.def("complex_codeword", &complex_codeword, py::arg("codebook"),
        py::arg("m"), "Codeword m as n complex subcarrier amplitudes.");
  m.def("precode_codebook", &precode_codebook, py::arg("codebook"),
        py::arg("precoder"),
        "Codebook with every word multiplied by the precoder matrix.");
  m.def("distance_curve",
        py::overload_cast<const std::vector<cplx>&, const std::vector<cplx>&,
                          const OfdmConfig&, const Precoder&>(&distance_curve),
        py::arg("x1"), py::arg("x2"), py::arg("config"), py::arg("precoder"),
        "Cumulative squared waveform distance d2(t) on [0, T] "
        "(closed form).");
  m.def("distance_curve_quadrature", &distance_curve_quadrature, py::arg("x1"),
        py::arg("x2"), py::arg("config"), py::arg("precoder"),
        py::arg("refine") = 16,
        "Same curve by composite-Simpson integration of the synthesized "
        "waveforms.");
  m.def("linearity_deviation", &linearity_deviation, py::arg("curve"),
        "Peak relative deviation of d2(t) from the chord through the "
        "origin.");

  py::class_<SignalTable>(m, "SignalTable")
      .def_readonly("n", &SignalTable::n)
      .def_readonly("grid", &SignalTable::grid)
      .def_readonly("count", &SignalTable::count)
      .def_readonly("rho", &SignalTable::rho);

  m.def("synthesize_codebook", &synthesize_codebook, py::arg("codebook"),
        py::arg("precoder"), py::arg("config"),
        "Sampled waveforms plus suffix energies for the sequential "
        "receiver.");
  m.def("ofdm_noise_sigma", &ofdm_noise_sigma, py::arg("codebook"),
        py::arg("snr_db"),
        "Per-sample noise std giving the requested SNR.");
  m.def("ofdm_campaign", &ofdm_campaign, py::arg("table"),
        py::arg("noise_sigma"), py::arg("thresholds"), py::arg("trials"),
        py::arg("seed"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>(),
        "Monte-Carlo early-detection campaign on sampled waveforms.");
  m.def("ofdm_calibrate_threshold", &ofdm_calibrate_threshold, py::arg("table"),
        py::arg("noise_sigma"), py::arg("target_error"),
        py::arg("pilot_trials"), py::arg("seed"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>(),
        "Largest shared stop threshold meeting the pilot error target.");

  // ---- multi-hop strategies ----------------------------------------------
  m.def("af_gain", &af_gain, py::arg("power"),
        "Per-hop amplify gain G = P/(P+1).");
  m.def("af_overall_snr", &af_overall_snr, py::arg("power"), py::arg("hops"),
        "End-to-end SNR of an h-hop fixed-gain amplify chain.");
  m.def("af_min_latency", &af_min_latency, py::arg("k"), py::arg("power"),
        py::arg("symbol_time"), py::arg("eps"), py::arg("hops"),
        py::arg("pc") = PowerConstraint::kEqualOrMaximal,
        "Single-shot latency through the amplify chain's end-to-end SNR.");
  m.def("df_latency", &df_latency, py::arg("per_hop_latency"), py::arg("hops"),
        "Serialized decode-and-forward latency h * L.");

  py::class_<SplitPlan>(m, "SplitPlan")
      .def_readonly("parts", &SplitPlan::parts)
      .def_readonly("bits_per_part", &SplitPlan::bits_per_part)
      .def_readonly("eps_part", &SplitPlan::eps_part)
      .def_readonly("per_part", &SplitPlan::per_part)
      .def_readonly("total_latency", &SplitPlan::total_latency);

  m.def("split_latency", &split_latency, py::arg("k"), py::arg("power"),
        py::arg("symbol_time"), py::arg("eps"), py::arg("hops"),
        py::arg("parts"), py::arg("naive_eps_budget") = false,
        "Pipelined split-payload decode-and-forward plan; parts=1 "
        "reproduces df_latency.");
  m.def("df_early_latency", &df_early_latency, py::arg("k"), py::arg("power"),
        py::arg("symbol_time"), py::arg("eps"), py::arg("hops"),
        py::arg("parts"), py::arg("naive_eps_budget") = false,
        "Split plan where relays forward parts at their early-decision "
        "fraction.");

  py::class_<PrecompConfig>(m, "PrecompConfig")
      .def(py::init<>())
      .def_readwrite("n", &PrecompConfig::n)
      .def_readwrite("diff_dims", &PrecompConfig::diff_dims)
      .def_readwrite("snr_db", &PrecompConfig::snr_db)
      .def_readwrite("u", &PrecompConfig::u)
      .def_readwrite("decision_cap", &PrecompConfig::decision_cap)
      .def_readwrite("relay_error_target", &PrecompConfig::relay_error_target);

  py::class_<PrecompReport>(m, "PrecompReport")
      .def_readonly("trials", &PrecompReport::trials)
      .def_readonly("relay_decided", &PrecompReport::relay_decided)
      .def_readonly("relay_correct", &PrecompReport::relay_correct)
      .def_readonly("dominance_violations",
                    &PrecompReport::dominance_violations)
      .def_readonly("errors_precomp", &PrecompReport::errors_precomp)
      .def_readonly("errors_plain", &PrecompReport::errors_plain)
      .def_readonly("mean_relay_stop_fraction",
                    &PrecompReport::mean_relay_stop_fraction)
      .def_readonly("min_distance_gap", &PrecompReport::min_distance_gap)
      .def_readonly("max_power_error", &PrecompReport::max_power_error);

  m.def("af_precomp_campaign", &af_precomp_campaign, py::arg("config"),
        py::arg("trials"), py::arg("seed"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>(),
        "Two-hop Monte-Carlo comparison of plain amplify against "
        "decide-then-pre-compensate amplify with common randomness.");
  m.def("af_precomp_campaign_reference", &af_precomp_campaign_reference,
        py::arg("config"), py::arg("trials"), py::arg("seed"),
        py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>(),
        "Full-vector cross-check of af_precomp_campaign (same distribution, "
        "different realizations).");

  py::class_<StrategyRow>(m, "StrategyRow")
      .def_readonly("strategy", &StrategyRow::strategy)
      .def_readonly("parts", &StrategyRow::parts)
      .def_readonly("feasible", &StrategyRow::feasible)
      .def_readonly("latency_seconds", &StrategyRow::latency_seconds)
      .def_readonly("latency_symbols", &StrategyRow::latency_symbols)
      .def_readonly("latency_normalized", &StrategyRow::latency_normalized);

  m.def("compare_strategies", &compare_strategies, py::arg("k"),
        py::arg("power"), py::arg("symbol_time"), py::arg("eps"),
        py::arg("hops"),
        "Latency table of relay strategies at one operating point, sorted "
        "with infeasible rows last.");
}
