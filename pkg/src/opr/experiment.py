"""Trace-driven experiment pipeline: sample, noise, run, compare to OPT.

Each trial samples a contiguous T-hour segment from the trace, amplifies its
deviations by the noise factor, builds an instance, runs every requested
algorithm, and computes the exact DP optimum once.  Trial i derives its RNG
seed purely from (master seed, i), so removing an algorithm from the list
never changes any other algorithm's recorded ratios, and a fixed master seed
reproduces results byte for byte.

Instance bounds per trial: the algorithms require prices inside [L, U], but
a noised segment can spill past the trace-wide bounds (and truncation can
push values to 0, below any positive L).  We widen U to the segment maximum,
keep the trace-wide L floored at the segment minimum, and lift truncated
zeros to the smallest positive segment value; every adjustment is recorded
in the trial record rather than silently applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .algorithms import PlayerKind, hindsight_trace
from .core import CostBreakdown, Instance, Variant
from .errors import DegenerateProfitError, OprError, ParameterError
from .offline import dp_optimal
from .thresholds import dtpr_min_thresholds, solve_alpha, solve_omega
from .traces import (
    TraceBounds,
    TraceDataset,
    apply_noise,
    sample_segment_with_offset,
    trace_bounds,
)

#: clip factor applied to (U-L)/2 when the true beta leaves the min regime
_BETA_CLIP = 0.999999

#: short algorithm names used in configs, result files, and the CLI
ALG_NAMES = ("dtpr", "ksearch", "const", "agnostic")

_KIND_BY_NAME = {
    Variant.MIN: {
        "dtpr": PlayerKind.DTPR_MIN,
        "ksearch": PlayerKind.KSEARCH_MIN,
        "const": PlayerKind.CONSTANT_THRESHOLD,
        "agnostic": PlayerKind.CARBON_AGNOSTIC,
    },
    Variant.MAX: {
        "dtpr": PlayerKind.DTPR_MAX,
        "ksearch": PlayerKind.KSEARCH_MAX,
        "const": PlayerKind.CONSTANT_THRESHOLD,
        "agnostic": PlayerKind.CARBON_AGNOSTIC,
    },
}


def resolve_player_kind(name: str, variant: Variant) -> PlayerKind:
    try:
        return _KIND_BY_NAME[variant][name]
    except KeyError:
        raise ParameterError(f"unknown algorithm {name!r}; choose from {ALG_NAMES}")


def default_k(T: int) -> int:
    """Job-length default: ceil(T/6)."""
    return math.ceil(T / 6)


def derive_seed(master: int, trial: int) -> int:
    """Stable 63-bit splitmix-style hash of (master, trial)."""
    x = (master * 0x9E3779B97F4A7C15 + trial + 1) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return (x ^ (x >> 31)) & 0x7FFFFFFFFFFFFFFF


@dataclass(frozen=True)
class ExperimentConfig:
    variant: Variant
    T: int = 48
    k: int | None = None  # None -> ceil(T/6)
    beta: float | None = None  # absolute, exclusive with beta_frac
    beta_frac: float | None = None  # fraction of the trace-wide U
    noise: float = 1.0
    trials: int = 1
    seed: int = 0
    algs: tuple[str, ...] = ALG_NAMES
    trace_source: str = ""  # echo only; data is passed separately

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")
        if self.T < 1:
            raise ParameterError(f"T must be >= 1, got {self.T}")
        k = self.resolved_k()
        if not (1 <= k <= self.T):
            raise ParameterError(f"need 1 <= k <= T, got k={k}, T={self.T}")
        if (self.beta is None) == (self.beta_frac is None):
            raise ParameterError("give exactly one of beta (absolute) or beta_frac")
        if self.beta is not None and self.beta < 0:
            raise ParameterError(f"beta must be >= 0, got {self.beta}")
        if self.beta_frac is not None and self.beta_frac < 0:
            raise ParameterError(f"beta_frac must be >= 0, got {self.beta_frac}")
        if self.noise < 1:
            raise ParameterError(f"noise factor must be >= 1, got {self.noise}")
        for name in self.algs:
            resolve_player_kind(name, self.variant)

    def resolved_k(self) -> int:
        return self.k if self.k is not None else default_k(self.T)


@dataclass(frozen=True)
class ExperimentResult:
    config: dict
    bounds: TraceBounds
    trials: tuple[dict, ...]
    summary: dict[str, dict]
    cdf: dict[str, tuple[tuple[float, float], ...]]

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "trace_bounds": {"l": self.bounds.L, "u": self.bounds.U},
            "trials": list(self.trials),
            "summary": self.summary,
            "cdf": {name: [list(pt) for pt in pts] for name, pts in self.cdf.items()},
        }


def empirical_cr(alg: CostBreakdown, opt: CostBreakdown, variant: Variant) -> float:
    """ALG/OPT for min, OPT/ALG for max; both >= 1 when OPT is exact."""
    if variant is Variant.MIN:
        if opt.total <= 0:
            raise ParameterError(f"min ratio needs opt.total > 0, got {opt.total}")
        return alg.total / opt.total
    if alg.total <= 0:
        raise DegenerateProfitError(
            f"nonpositive profit {alg.total}: beta too large relative to kL, "
            "ratio undefined"
        )
    return opt.total / alg.total


def summarize(ratios: Sequence[float]) -> tuple[float, float, float, tuple[tuple[float, float], ...]]:
    """(mean, p95, max, CDF points).

    p95 is the nearest-rank ceil(0.95 n)-th order statistic; the CDF is the
    sorted (ratio, rank/n) step function, ending at cumulative probability 1.
    """
    if not ratios:
        raise ParameterError("cannot summarize an empty ratio list")
    n = len(ratios)
    ordered = sorted(ratios)
    rank = math.ceil(0.95 * n)
    p95 = ordered[rank - 1]
    cdf = tuple((v, (i + 1) / n) for i, v in enumerate(ordered))
    return math.fsum(ordered) / n, p95, ordered[-1], cdf


def _min_threshold_family(k: int, U: float, L: float, beta: float):
    """Threshold family for min-side players, clipping beta into the regime.

    When beta >= (U-L)/2, the min algorithm degenerates to one contiguous
    block; thresholds are built from a clipped beta while the instance still
    charges the true one.
    """
    if U > L and beta < (U - L) / 2:
        return dtpr_min_thresholds(k, U, L, beta), False
    beta_eff = _BETA_CLIP * (U - L) / 2
    return dtpr_min_thresholds(k, U, L, beta_eff), True


def _trial_bounds(
    segment: Sequence[float], bounds: TraceBounds
) -> tuple[tuple[float, ...], float, float, bool, int]:
    """Apply the widening/flooring rule; returns (prices, L, U, widened, floored)."""
    seg_min = min(segment)
    seg_max = max(segment)
    floored = 0
    prices = tuple(segment)
    if seg_min <= 0:
        positive = [v for v in segment if v > 0]
        if not positive:
            raise OprError("noised segment is identically zero; instance undefined")
        floor = min(positive)
        prices = tuple(v if v > 0 else floor for v in segment)
        floored = sum(1 for v in segment if v <= 0)
        seg_min = floor
    L = min(bounds.L, seg_min)
    U = max(bounds.U, seg_max)
    widened = L < bounds.L or U > bounds.U
    return prices, L, U, widened, floored


def run_trial(
    cfg: ExperimentConfig, ds: TraceDataset, bounds: TraceBounds, trial: int, beta_abs: float
) -> dict:
    k = cfg.resolved_k()
    seed = derive_seed(cfg.seed, trial)
    segment, offset = sample_segment_with_offset(ds, cfg.T, seed)
    noised = apply_noise(segment, cfg.noise, ds.kind)
    prices, L, U, widened, floored = _trial_bounds(noised, bounds)
    inst = Instance(
        k=k, T=cfg.T, L=L, U=U, beta=beta_abs, variant=cfg.variant, prices=prices
    )
    _, opt = dp_optimal(inst)
    record: dict = {
        "trial": trial,
        "seed": seed,
        "offset": offset,
        "instance_l": L,
        "instance_u": U,
        "bounds_widened": widened,
        "floored_values": floored,
        "opt_total": opt.total,
        "algs": {},
    }
    for name in cfg.algs:
        kind = resolve_player_kind(name, cfg.variant)
        family = None
        clipped = False
        if kind is PlayerKind.DTPR_MIN:
            family, clipped = _min_threshold_family(k, U, L, beta_abs)
        _, cost = hindsight_trace(kind, inst, family)
        ratio = empirical_cr(cost, opt, cfg.variant)
        record["algs"][name] = {
            "total": cost.total,
            "switches": cost.num_switches,
            "ratio": ratio,
            "beta_clipped": clipped,
        }
    return record


def run_experiment(cfg: ExperimentConfig, ds: TraceDataset) -> ExperimentResult:
    """Run all trials; a failing algorithm aborts with its trial index."""
    bounds = trace_bounds(ds)
    beta_abs = cfg.beta if cfg.beta is not None else cfg.beta_frac * bounds.U
    records = []
    for trial in range(cfg.trials):
        try:
            records.append(run_trial(cfg, ds, bounds, trial, beta_abs))
        except OprError as exc:
            raise type(exc)(f"trial {trial}: {exc}") from exc
    summary: dict[str, dict] = {}
    cdf: dict[str, tuple[tuple[float, float], ...]] = {}
    for name in cfg.algs:
        ratios = [rec["algs"][name]["ratio"] for rec in records]
        for rec, ratio in zip(records, ratios):
            if ratio < 1 - 1e-9:
                raise OprError(
                    f"trial {rec['trial']}: {name} ratio {ratio} below 1; OPT is exact, "
                    "this indicates a defect"
                )
        mean, p95, worst, points = summarize(ratios)
        summary[name] = {"mean": mean, "p95": p95, "max": worst}
        cdf[name] = points
    config_echo = {
        "variant": cfg.variant.value,
        "t_horizon": cfg.T,
        "k": cfg.resolved_k(),
        "beta": beta_abs,
        "noise": cfg.noise,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "algs": list(cfg.algs),
        "trace_source": cfg.trace_source,
        "trace_kind": ds.kind.value,
        "region": ds.region,
    }
    return ExperimentResult(
        config=config_echo,
        bounds=bounds,
        trials=tuple(records),
        summary=summary,
        cdf=cdf,
    )


def sweep_ratios(
    variant: Variant,
    k: int,
    U: float,
    beta_grid: Sequence[float],
    l_grid: Sequence[float],
) -> list[tuple[float, float, float | str]]:
    """Ratio over an (L, beta) grid; out-of-regime cells emit sentinels.

    Min cells with 2*beta >= U - L degenerate to a single contiguous block
    and emit ``degenerate``; max cells with 2*beta >= kL have unbounded
    ratio and emit ``inf``.
    """
    rows: list[tuple[float, float, float | str]] = []
    for L in l_grid:
        if not (0 < L <= U):
            raise ParameterError(f"grid L={L} outside (0, U={U}]")
        for beta in beta_grid:
            if beta < 0:
                raise ParameterError(f"grid beta={beta} negative")
            if variant is Variant.MIN:
                if 2 * beta >= U - L:
                    rows.append((L, beta, "degenerate"))
                else:
                    rows.append((L, beta, solve_alpha(k, U, L, beta)))
            else:
                if 2 * beta >= k * L:
                    rows.append((L, beta, "inf"))
                else:
                    rows.append((L, beta, solve_omega(k, U, L, beta)))
    return rows
