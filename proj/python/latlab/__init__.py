"""Finite-blocklength latency laboratory.

Thin package around the compiled `_core` extension: latency bounds for
short packets, early-decision latency models, sequential detector
Monte-Carlo campaigns, multicarrier distance geometry, and multi-hop
relay strategy comparisons.
"""

from ._core import (  # noqa: F401
    # blocklength / latency bounds
    InfeasibleError,
    PowerConstraint,
    MinLatencyResult,
    capacity,
    dispersion,
    max_log_code_size,
    block_error_rate,
    achievable_rate,
    min_blocklength,
    min_latency,
    marginal_rate,
    solve_snr_for_error,
    # early-decision latency
    gamma_of_tau,
    stopping_cdf,
    average_latency,
    min_tau_bound,
    checkpoint_latency,
    checkpoint_latency_with_eps,
    solve_power_for_final_error,
    # sequential detection
    Modulation,
    ThresholdMode,
    DetectorKind,
    Codebook,
    gen_codebook,
    binary_pair_codebook,
    DetectorConfig,
    Scenario,
    LatencyReport,
    scenario_rho,
    run_campaign,
    wald_thresholds,
    sprt_stop_lower_bounds,
    error_upper_bound,
    dragalin_asymptotic,
    # multicarrier geometry
    PrecoderKind,
    OfdmConfig,
    Precoder,
    DistanceCurve,
    make_precoder,
    neighbor_codebook,
    complex_codeword,
    precode_codebook,
    distance_curve,
    distance_curve_quadrature,
    linearity_deviation,
    SignalTable,
    synthesize_codebook,
    ofdm_noise_sigma,
    ofdm_campaign,
    ofdm_calibrate_threshold,
    # multi-hop strategies
    af_gain,
    af_overall_snr,
    af_min_latency,
    df_latency,
    SplitPlan,
    split_latency,
    df_early_latency,
    PrecompConfig,
    PrecompReport,
    af_precomp_campaign,
    af_precomp_campaign_reference,
    StrategyRow,
    compare_strategies,
)

__version__ = "0.1.0"
