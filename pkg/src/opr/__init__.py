"""Online pause-and-resume workbench.

Buy (or sell) exactly k units over a horizon of T online prices, paying a
switching penalty whenever the accept/reject decision flips.  The package
provides the optimal double-threshold online players for both variants,
k-search and carbon-agnostic baselines, exact offline optima, adaptive
lower-bound adversaries, carbon-trace tooling, and a batch experiment CLI.
"""

from .adversary import AdversaryTranscript, adversary_max, adversary_min
from .algorithms import PlayerKind, PlayerState, hindsight_trace, new_player, run_online
from .core import (
    CostBreakdown,
    Instance,
    Schedule,
    Variant,
    evaluate_schedule,
    extreme_price,
    validate_schedule,
)
from .experiment import (
    ExperimentConfig,
    ExperimentResult,
    empirical_cr,
    run_experiment,
    summarize,
    sweep_ratios,
)
from .offline import active_backend, brute_force_optimal, dp_optimal
from .thresholds import (
    AsymptoticRegime,
    ThresholdFamily,
    asymptotic_alpha,
    asymptotic_omega,
    constant_threshold,
    dtpr_max_thresholds,
    dtpr_min_thresholds,
    ksearch_thresholds,
    lambert_w,
    solve_alpha,
    solve_omega,
)
from .traces import (
    TraceBounds,
    TraceDataset,
    TraceKind,
    apply_noise,
    parse_trace,
    sample_segment,
    synthetic_diurnal,
    trace_bounds,
    write_trace,
)

__version__ = "0.1.0"

__all__ = [
    "AdversaryTranscript",
    "AsymptoticRegime",
    "CostBreakdown",
    "ExperimentConfig",
    "ExperimentResult",
    "Instance",
    "PlayerKind",
    "PlayerState",
    "Schedule",
    "ThresholdFamily",
    "TraceBounds",
    "TraceDataset",
    "TraceKind",
    "Variant",
    "active_backend",
    "adversary_max",
    "adversary_min",
    "apply_noise",
    "asymptotic_alpha",
    "asymptotic_omega",
    "brute_force_optimal",
    "constant_threshold",
    "dp_optimal",
    "dtpr_max_thresholds",
    "dtpr_min_thresholds",
    "empirical_cr",
    "evaluate_schedule",
    "extreme_price",
    "hindsight_trace",
    "ksearch_thresholds",
    "lambert_w",
    "new_player",
    "parse_trace",
    "run_experiment",
    "run_online",
    "sample_segment",
    "solve_alpha",
    "solve_omega",
    "summarize",
    "sweep_ratios",
    "synthetic_diurnal",
    "trace_bounds",
    "validate_schedule",
    "write_trace",
]
