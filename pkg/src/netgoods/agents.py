"""Synthetic players: intervention seeds and human-surrogate strategies.

Only the unconditional seed behavior reflects the experimental design;
the conditional strategies are desk-simulation stand-ins whose
parameters are not calibrated to human data.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .topology import Network, SeedPlacement


class AgentError(Exception):
    pass


class HistoryMismatch(AgentError):
    """Own/neighbor histories disagree with the round counter."""


@dataclass(frozen=True)
class Unconditional:
    value: int


@dataclass(frozen=True)
class ThresholdConditional:
    """Cooperate when enough neighbors cooperated last round."""

    threshold_count: int
    coop_value: int = 10
    defect_value: int = 0


@dataclass(frozen=True)
class ConditionalLinear:
    """Blend of own last move and neighbors' last mean, plus gaussian noise.

    Default parameters are uncalibrated placeholders chosen to produce the
    familiar declining-contribution shape in simulation.
    """

    response_weight: float = 0.6
    initial_mean: float = 6.0
    noise_sd: float = 1.5


@dataclass(frozen=True)
class FreeRider:
    pass


Strategy = Unconditional | ThresholdConditional | ConditionalLinear | FreeRider


def parse_strategy(spec: str) -> Strategy:
    """Parse compact strategy spec strings used in session config files.

    ``unconditional:10`` | ``threshold:3,10,0`` | ``linear:0.6,6,1.5`` |
    ``freerider``
    """
    kind, _, argstr = spec.strip().partition(":")
    args = [a for a in argstr.split(",") if a] if argstr else []
    try:
        if kind == "unconditional":
            return Unconditional(value=int(args[0]))
        if kind == "threshold":
            count, coop, defect = (int(a) for a in args)
            return ThresholdConditional(
                threshold_count=count, coop_value=coop, defect_value=defect
            )
        if kind == "linear":
            weight, mean, sd = (float(a) for a in args)
            return ConditionalLinear(
                response_weight=weight, initial_mean=mean, noise_sd=sd
            )
        if kind == "freerider":
            return FreeRider()
    except (ValueError, IndexError) as exc:
        raise AgentError(f"bad strategy spec {spec!r}") from exc
    raise AgentError(f"unknown strategy kind {kind!r}")


def strategy_spec(strategy: Strategy) -> str:
    if isinstance(strategy, Unconditional):
        return f"unconditional:{strategy.value}"
    if isinstance(strategy, ThresholdConditional):
        return (
            f"threshold:{strategy.threshold_count},"
            f"{strategy.coop_value},{strategy.defect_value}"
        )
    if isinstance(strategy, ConditionalLinear):
        return (
            f"linear:{strategy.response_weight:g},"
            f"{strategy.initial_mean:g},{strategy.noise_sd:g}"
        )
    return "freerider"


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def _clamp(value: int, endowment: int) -> int:
    return max(0, min(endowment, value))


def decide(
    strategy: Strategy,
    own_history: list[int],
    neighbor_history: list[list[int]],
    round_index: int,
    rng: random.Random,
    endowment: int = 10,
) -> int:
    """Contribution for this round given per-round histories (round-1 entries)."""
    if len(own_history) != round_index - 1 or len(neighbor_history) != round_index - 1:
        raise HistoryMismatch(
            f"round {round_index} expects {round_index - 1} history entries, "
            f"got own={len(own_history)} neighbors={len(neighbor_history)}"
        )

    if isinstance(strategy, Unconditional):
        return _clamp(strategy.value, endowment)

    if isinstance(strategy, FreeRider):
        return 0

    if isinstance(strategy, ThresholdConditional):
        if round_index == 1:
            return _clamp(strategy.coop_value, endowment)
        cooperating = sum(
            1 for c in neighbor_history[-1] if c >= strategy.coop_value
        )
        value = (
            strategy.coop_value
            if cooperating >= strategy.threshold_count
            else strategy.defect_value
        )
        return _clamp(value, endowment)

    # ConditionalLinear
    if round_index == 1:
        raw = strategy.initial_mean + rng.gauss(0.0, strategy.noise_sd)
    else:
        last = neighbor_history[-1]
        neighbor_mean = sum(last) / len(last) if last else 0.0
        w = strategy.response_weight
        raw = (
            (1 - w) * own_history[-1]
            + w * neighbor_mean
            + rng.gauss(0.0, strategy.noise_sd)
        )
    return _clamp(_round_half_up(raw), endowment)


def bind_agents(
    net: Network,
    placement: SeedPlacement | None,
    human_fill: Strategy,
) -> dict[int, Strategy]:
    """Seeds play their fixed behavior; everyone else plays ``human_fill``."""
    out: dict[int, Strategy] = {}
    seeds = placement.seeds if placement else frozenset()
    behavior = placement.behavior if placement else 0
    for v in net.nodes:
        out[v] = Unconditional(behavior) if v in seeds else human_fill
    return out


def agent_rng(session_seed: int, node: int) -> random.Random:
    """Independent, replayable per-agent stream."""
    return random.Random(f"{session_seed}/agent/{node}")
