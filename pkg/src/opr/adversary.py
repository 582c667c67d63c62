"""Adaptive lower-bound adversaries, runnable against any online player.

The adversary interrogates the player purely through the step protocol: it
presents one price, observes the 0/1 decision, and chooses the continuation.
For the min variant the script is:

  * probe the i-th resume threshold (nudged up by a hair so that a player
    sitting exactly on it refuses), up to k times or until accepted;
  * after an acceptance, present U until the player switches away (capped at
    k presentations; a player that never switches fills itself at U prices);
  * if a probe is refused k times, flood U to the declared horizon, forcing
    the player to buy its remaining units at the worst price;
  * if the player fills all k units, close with k slots of L so the offline
    optimum gets the best block.

The max variant mirrors this with stay-threshold probes nudged down, L
floods, and a closing U block.  The transcript's ratio is computed against
the exact DP optimum of the realized sequence, which can only certify a
larger lower bound than the analytic estimate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol

from .algorithms import PlayerKind, new_player
from .core import CostBreakdown, Instance, Schedule, Variant, evaluate_schedule
from .errors import ProtocolError, RegimeError
from .offline import dp_optimal
from .thresholds import dtpr_max_thresholds, dtpr_min_thresholds


class OnlinePlayer(Protocol):
    def step(self, price: float) -> int: ...


#: factory signature: (k, T, L, U, beta) -> player honoring the step protocol
PlayerFactory = Callable[[int, int, float, float, float], OnlinePlayer]

#: relative nudge applied to probe prices so exact-threshold ties refuse
_PROBE_NUDGE = 1e-9


@dataclass(frozen=True)
class AdversaryTranscript:
    """Everything the adversary realized: the sequence, both costs, the ratio."""

    prices: tuple[float, ...]
    alg_schedule: Schedule
    alg_cost: CostBreakdown
    opt_cost: CostBreakdown
    ratio: float


def declared_horizon(k: int) -> int:
    """Horizon announced to the player, sized so every branch fits:
    k rounds of (k probe slots + k flood slots) plus both closing blocks."""
    return k * (2 * k + 2) + 2 * k


def _build_player(player: PlayerKind | PlayerFactory, k: int, T: int,
                  L: float, U: float, beta: float, variant: Variant) -> OnlinePlayer:
    if isinstance(player, PlayerKind):
        return new_player(player, k, T, L, U, beta, variant)
    return player(k, T, L, U, beta)


def _drive(
    player: OnlinePlayer,
    k: int,
    T: int,
    probes: tuple[float, ...],
    flood_price: float,
    close_price: float,
) -> tuple[list[float], list[int]]:
    """Run the probe/flood script, returning the realized prices+decisions."""
    prices: list[float] = []
    decisions: list[int] = []
    accepted = 0

    def present(price: float) -> int:
        x = player.step(price)
        if x not in (0, 1):
            raise ProtocolError(f"player emitted {x!r}, expected 0 or 1")
        prices.append(price)
        decisions.append(x)
        return x

    for probe in probes:
        # probe phase: up to k tries or until accepted
        got = False
        for _ in range(k):
            if present(probe):
                accepted += 1
                got = True
                break
        if not got:
            # terminal: worst-case value for the remainder of the horizon;
            # an exhausted player is no longer stepped, its decisions are 0
            while len(prices) < T:
                if accepted < k:
                    if present(flood_price):
                        accepted += 1
                else:
                    prices.append(flood_price)
                    decisions.append(0)
            if accepted != k:
                raise ProtocolError(
                    f"player ended the flooded branch with {accepted} of {k} units"
                )
            return prices, decisions
        if accepted == k:
            break
        # flood until the player switches away (capped at k presentations)
        for _ in range(k):
            if present(flood_price) == 0:
                break
            accepted += 1
            if accepted == k:
                break
        if accepted == k:
            break
    # player filled early: close with the best-case block
    for _ in range(k):
        prices.append(close_price)
        decisions.append(0)
    return prices, decisions


def _finish(
    variant: Variant,
    k: int,
    U: float,
    L: float,
    beta: float,
    prices: list[float],
    decisions: list[int],
) -> AdversaryTranscript:
    inst = Instance(
        k=k, T=len(prices), L=L, U=U, beta=beta, variant=variant, prices=tuple(prices)
    )
    sched = Schedule(tuple(decisions))
    alg_cost = evaluate_schedule(inst, sched)
    _, opt_cost = dp_optimal(inst)
    if variant is Variant.MIN:
        ratio = alg_cost.total / opt_cost.total
    else:
        ratio = opt_cost.total / alg_cost.total
    return AdversaryTranscript(
        prices=tuple(prices),
        alg_schedule=sched,
        alg_cost=alg_cost,
        opt_cost=opt_cost,
        ratio=ratio,
    )


def adversary_min(
    player: PlayerKind | PlayerFactory, k: int, U: float, L: float, beta: float
) -> AdversaryTranscript:
    """Min-variant adversary; requires 0 < beta < (U-L)/2."""
    if not (0 < beta < (U - L) / 2):
        raise RegimeError(
            f"adversary_min needs 0 < beta < (U-L)/2, got beta={beta}, (U-L)/2={(U - L) / 2}"
        )
    family = dtpr_min_thresholds(k, U, L, beta)
    probes = tuple(min(l * (1 + _PROBE_NUDGE) + _PROBE_NUDGE * L, U) for l in family.lower)
    T = declared_horizon(k)
    p = _build_player(player, k, T, L, U, beta, Variant.MIN)
    prices, decisions = _drive(p, k, T, probes, flood_price=U, close_price=L)
    return _finish(Variant.MIN, k, U, L, beta, prices, decisions)


def adversary_max(
    player: PlayerKind | PlayerFactory, k: int, U: float, L: float, beta: float
) -> AdversaryTranscript:
    """Max-variant adversary; requires 0 < beta < kL/2 and 2*beta <= U - L.

    The second bound is a construction constraint: beyond it the stay
    thresholds overshoot U and the probe prices would leave [L, U].
    """
    if not (0 < beta < k * L / 2):
        raise RegimeError(
            f"adversary_max needs 0 < beta < kL/2, got beta={beta}, kL/2={k * L / 2}"
        )
    if 2 * beta > U - L:
        raise RegimeError(
            f"adversary_max probes need 2*beta <= U-L, got 2*beta={2 * beta}, U-L={U - L}"
        )
    family = dtpr_max_thresholds(k, U, L, beta)
    probes = tuple(max(u * (1 - _PROBE_NUDGE) - _PROBE_NUDGE * L, L) for u in family.upper)
    T = declared_horizon(k)
    p = _build_player(player, k, T, L, U, beta, Variant.MAX)
    prices, decisions = _drive(p, k, T, probes, flood_price=L, close_price=U)
    return _finish(Variant.MAX, k, U, L, beta, prices, decisions)
