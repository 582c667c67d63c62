"""Carbon-trace ingestion, bounds, segment sampling, and the volatility knob.

Trace CSV contract: UTF-8, ``\\n`` newlines, header ``timestamp,value``,
ISO-8601 UTC timestamps at strict one-hour cadence, one row per hour.
Lines starting with ``#`` are comments; a ``# region: NAME`` comment labels
the dataset.  Missing hours are an error, never interpolated: silent gap
filling would corrupt segment sampling.
"""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ParameterError, TraceError


class TraceKind(Enum):
    INTENSITY = "intensity"  # gCO2eq/kWh, used by min studies
    CARBON_FREE_PCT = "carbon-free"  # percent in [0, 100], used by max studies


_HOUR = timedelta(hours=1)


@dataclass(frozen=True)
class TraceDataset:
    region: str
    timestamps: tuple[datetime, ...]
    values: tuple[float, ...]
    kind: TraceKind

    def __post_init__(self) -> None:
        if len(self.timestamps) != len(self.values):
            raise TraceError("timestamps and values must have equal length")
        if not self.values:
            raise TraceError("empty trace")
        prev = None
        for idx, ts in enumerate(self.timestamps):
            if prev is not None:
                if ts <= prev:
                    raise TraceError(f"timestamps not strictly increasing at row {idx}")
                if ts - prev != _HOUR:
                    raise TraceError(
                        f"missing hour before row {idx}: {prev.isoformat()} -> {ts.isoformat()}"
                    )
            prev = ts
        for idx, v in enumerate(self.values):
            if not math.isfinite(v) or v < 0:
                raise TraceError(f"value at row {idx} must be finite and >= 0, got {v}")
            if self.kind is TraceKind.CARBON_FREE_PCT and v > 100:
                raise TraceError(f"carbon-free percentage at row {idx} exceeds 100: {v}")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class TraceBounds:
    L: float
    U: float

    def __post_init__(self) -> None:
        if not (0 < self.L <= self.U):
            raise ParameterError(f"need 0 < L <= U, got L={self.L}, U={self.U}")


def _parse_timestamp(raw: str, row: int) -> datetime:
    try:
        ts = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError as exc:
        raise TraceError(f"row {row}: bad timestamp {raw!r}") from exc
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def parse_trace(
    source: str | Path | io.TextIOBase, kind: TraceKind = TraceKind.INTENSITY
) -> TraceDataset:
    """Parse a trace CSV; row indices in errors are 1-based file lines."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return parse_trace(fh, kind)
    region = ""
    timestamps: list[datetime] = []
    values: list[float] = []
    saw_header = False
    for lineno, line in enumerate(source, start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.lower().startswith("region:"):
                region = body.split(":", 1)[1].strip()
            continue
        if not saw_header:
            if [c.strip().lower() for c in line.split(",")] != ["timestamp", "value"]:
                raise TraceError(f"row {lineno}: expected header 'timestamp,value', got {line!r}")
            saw_header = True
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise TraceError(f"row {lineno}: expected 2 fields, got {len(parts)}")
        timestamps.append(_parse_timestamp(parts[0].strip(), lineno))
        try:
            value = float(parts[1])
        except ValueError as exc:
            raise TraceError(f"row {lineno}: bad value {parts[1]!r}") from exc
        if value < 0:
            raise TraceError(f"row {lineno}: negative value {value}")
        values.append(value)
    if not saw_header:
        raise TraceError("empty trace file")
    if not values:
        raise TraceError("trace has a header but no rows")
    return TraceDataset(
        region=region, timestamps=tuple(timestamps), values=tuple(values), kind=kind
    )


def write_trace(ds: TraceDataset, path: str | Path) -> None:
    """Serialize a dataset back to the CSV contract; values round-trip
    bit-identically via repr."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if ds.region:
            fh.write(f"# region: {ds.region}\n")
        fh.write("timestamp,value\n")
        for ts, v in zip(ds.timestamps, ds.values):
            fh.write(f"{ts.strftime('%Y-%m-%dT%H:%M:%S+00:00')},{v!r}\n")


def trace_bounds(ds: TraceDataset) -> TraceBounds:
    """Observed (min, max) of the trace.

    A zero minimum is floored at the smallest positive value (with a
    warning), since the fluctuation ratio U/L must stay finite.
    """
    lo = min(ds.values)
    hi = max(ds.values)
    if lo == 0:
        positive = [v for v in ds.values if v > 0]
        if not positive:
            raise TraceError("trace is identically zero; bounds undefined")
        lo = min(positive)
        warnings.warn(
            f"trace minimum is 0; flooring L at smallest positive value {lo}",
            stacklevel=2,
        )
    return TraceBounds(L=lo, U=hi)


def sample_segment(ds: TraceDataset, T: int, seed: int) -> tuple[float, ...]:
    """Contiguous window of length T, offset uniform over valid starts."""
    segment, _ = sample_segment_with_offset(ds, T, seed)
    return segment


def sample_segment_with_offset(
    ds: TraceDataset, T: int, seed: int
) -> tuple[tuple[float, ...], int]:
    if T < 1:
        raise ParameterError(f"segment length must be >= 1, got {T}")
    if T > len(ds):
        raise ParameterError(f"segment length {T} exceeds trace length {len(ds)}")
    # offset = seed mod n_starts: deterministic, sequential seeds sweep every
    # window, and hashed upstream seeds land uniformly across offsets
    offset = int(seed) % (len(ds) - T + 1)
    return ds.values[offset : offset + T], offset


def apply_noise(
    prices: Sequence[float] | Iterable[float], m: float, kind: TraceKind
) -> tuple[float, ...]:
    """Amplify deviations from the segment mean by the noise factor m >= 1.

    v -> mean + m*(v - mean), truncated below at 0; carbon-free percentages
    are additionally capped at 100.  m = 1 returns the sequence unchanged.
    """
    if m < 1:
        raise ParameterError(f"noise factor must be >= 1, got {m}")
    vals = tuple(float(v) for v in prices)
    if not vals:
        raise ParameterError("cannot noise an empty segment")
    mu = math.fsum(vals) / len(vals)
    out = []
    for v in vals:
        nv = mu + m * (v - mu)
        nv = max(nv, 0.0)
        if kind is TraceKind.CARBON_FREE_PCT:
            nv = min(nv, 100.0)
        out.append(nv)
    return tuple(out)


def synthetic_diurnal(
    hours: int,
    period: float = 24.0,
    amp: float = 100.0,
    mean: float = 250.0,
    seed: int = 0,
    jitter: float = 0.1,
    dip_prob: float = 0.0,
    dip_range: tuple[float, float] | None = None,
    spike_prob: float = 0.0,
    spike_range: tuple[float, float] | None = None,
    kind: TraceKind = TraceKind.INTENSITY,
    region: str = "synthetic",
    start: datetime | None = None,
) -> TraceDataset:
    """Sinusoidal daily cycle plus seeded Gaussian jitter, floored above 0.

    ``dip_prob``/``spike_prob`` independently replace an hour's value with a
    uniform draw from the given absolute range, mimicking the rare renewable
    surplus and peaker events that pin real traces' observed extremes.
    Stands in for real grid data when no trace file is supplied; bounds are
    always recomputed from the generated values, never assumed.
    """
    if hours < 1:
        raise ParameterError(f"hours must be >= 1, got {hours}")
    if period <= 0 or amp < 0 or mean <= 0:
        raise ParameterError("need period > 0, amp >= 0, mean > 0")
    if dip_prob + spike_prob > 1:
        raise ParameterError("dip_prob + spike_prob must not exceed 1")
    rng = np.random.default_rng(seed)
    t = np.arange(hours)
    values = mean + amp * np.sin(2 * np.pi * t / period)
    values = values + jitter * amp * rng.standard_normal(hours)
    if dip_prob > 0 or spike_prob > 0:
        roll = rng.random(hours)
        if dip_prob > 0:
            if dip_range is None:
                raise ParameterError("dip_prob > 0 requires dip_range")
            dips = roll < dip_prob
            values[dips] = rng.uniform(dip_range[0], dip_range[1], int(dips.sum()))
        if spike_prob > 0:
            if spike_range is None:
                raise ParameterError("spike_prob > 0 requires spike_range")
            spikes = (roll >= dip_prob) & (roll < dip_prob + spike_prob)
            values[spikes] = rng.uniform(spike_range[0], spike_range[1], int(spikes.sum()))
    floor = max(mean * 1e-3, 1e-9)
    values = np.maximum(values, floor)
    if kind is TraceKind.CARBON_FREE_PCT:
        values = np.minimum(values, 100.0)
    if start is None:
        start = datetime(2021, 1, 1, tzinfo=timezone.utc)
    timestamps = tuple(start + i * _HOUR for i in range(hours))
    return TraceDataset(
        region=region,
        timestamps=timestamps,
        values=tuple(float(v) for v in values),
        kind=kind,
    )
