"""Problem instances, schedules, and exact objective evaluation.

An instance asks a player to accept exactly k of T online prices, paying
(min variant) or earning (max variant) each accepted price, plus a switching
penalty of beta every time the accept/reject decision flips between adjacent
slots.  The boundary decisions x_0 = 0 and x_{T+1} = 0 are implicit, so any
feasible schedule flips at least twice and at most 2k times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import FeasibilityError, ParameterError, StructuralError


class Variant(Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class Instance:
    """One pause-and-resume problem: parameters plus the full price sequence.

    Prices outside [L, U] are rejected at construction rather than clamped;
    the competitive guarantees assume bounded support.
    """

    k: int
    T: int
    L: float
    U: float
    beta: float
    variant: Variant
    prices: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "prices", tuple(float(p) for p in self.prices))
        if not isinstance(self.variant, Variant):
            raise ParameterError(f"variant must be a Variant, got {self.variant!r}")
        if self.k < 1 or self.T < 1 or self.k > self.T:
            raise ParameterError(f"need 1 <= k <= T, got k={self.k}, T={self.T}")
        if not (0 < self.L <= self.U):
            raise ParameterError(f"need 0 < L <= U, got L={self.L}, U={self.U}")
        if self.beta < 0:
            raise ParameterError(f"beta must be nonnegative, got {self.beta}")
        if len(self.prices) != self.T:
            raise StructuralError(
                f"price sequence has length {len(self.prices)}, expected T={self.T}"
            )
        for t, p in enumerate(self.prices):
            if not (self.L <= p <= self.U) or not math.isfinite(p):
                raise ParameterError(
                    f"price c_{t + 1}={p} outside [L, U]=[{self.L}, {self.U}]"
                )

    @property
    def theta(self) -> float:
        """Price fluctuation ratio U/L."""
        return self.U / self.L


@dataclass(frozen=True)
class Schedule:
    """Binary decision vector x_1..x_T."""

    decisions: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "decisions", tuple(int(x) for x in self.decisions))
        for x in self.decisions:
            if x not in (0, 1):
                raise StructuralError(f"decisions must be 0/1, got {x}")

    def num_accepted(self) -> int:
        return sum(self.decisions)


@dataclass(frozen=True)
class CostBreakdown:
    """Exact objective split into its accepted-price and switching parts."""

    accepted_sum: float
    switching_cost: float
    total: float
    num_switches: int


def validate_schedule(inst: Instance, sched: Schedule) -> bool:
    """True iff the schedule accepts exactly k prices.

    The k-transaction requirement is a hard constraint, so anything else is
    infeasible no matter how cheap it looks.
    """
    if len(sched.decisions) != inst.T:
        raise StructuralError(
            f"schedule has length {len(sched.decisions)}, expected T={inst.T}"
        )
    return sched.num_accepted() == inst.k


def evaluate_schedule(inst: Instance, sched: Schedule) -> CostBreakdown:
    """Exact objective of a feasible schedule.

    Switching is charged over the closed boundary t = 0 .. T+1 with
    x_0 = x_{T+1} = 0, so the count of flips is always even (twice the
    number of maximal accepted blocks).  Min total adds the switching cost,
    max total subtracts it and may legitimately be <= 0.
    """
    if not validate_schedule(inst, sched):
        raise FeasibilityError(
            f"schedule accepts {sched.num_accepted()} prices, instance requires k={inst.k}"
        )
    accepted = math.fsum(p for p, x in zip(inst.prices, sched.decisions) if x)
    flips = 0
    prev = 0
    for x in sched.decisions:
        if x != prev:
            flips += 1
        prev = x
    if prev == 1:
        flips += 1
    switching = inst.beta * flips
    if inst.variant is Variant.MIN:
        total = accepted + switching
    else:
        total = accepted - switching
    return CostBreakdown(
        accepted_sum=accepted,
        switching_cost=switching,
        total=total,
        num_switches=flips,
    )


def extreme_price(prices: Sequence[float] | Iterable[float], variant: Variant) -> float:
    """c_min of the sequence for the min variant, c_max for the max variant."""
    prices = tuple(prices)
    if not prices:
        raise StructuralError("price sequence is empty")
    return min(prices) if variant is Variant.MIN else max(prices)
