"""Economic engine: payoffs, round lifecycle, dropout fills and accounting.

All point amounts are held internally as integer tenths of a point so
that the 0.4 marginal return multiplies integer contributions without
floating-point drift. Helpers exposing floats only convert at the edge.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from .topology import Network, SeedPlacement


class GameError(Exception):
    pass


class OutOfRangeContribution(GameError):
    pass


class PhaseViolation(GameError):
    pass


class IncompleteSession(GameError):
    pass


class ZeroCost(GameError):
    """Seeds contributed no more than their counterfactual; ROI undefined."""


class Origin(str, enum.Enum):
    HUMAN = "human"
    AUTO_REPEAT = "auto_repeat"
    AUTO_RANDOM = "auto_random"
    BOT = "bot"


#: origins that count as automated fills of a human position
AUTO_ORIGINS = (Origin.AUTO_REPEAT, Origin.AUTO_RANDOM)


class Phase(str, enum.Enum):
    LOBBY = "lobby"
    QUIZ = "quiz"
    WAITING_ROOM = "waiting_room"
    IN_ROUND = "in_round"
    BETWEEN_ROUNDS = "between_rounds"
    FINISHED = "finished"
    ABORTED = "aborted"


DEFAULT_ROUND_DURATIONS = (45.0, 45.0) + (30.0,) * 8


@dataclass(frozen=True)
class GameParams:
    """Session economics: endowment, marginal return, timing and payment."""

    endowment: int = 10
    mpcr_tenths: int = 4  # marginal per-capita return, in tenths of a point
    rounds: int = 10
    round_durations: tuple[float, ...] = DEFAULT_ROUND_DURATIONS
    point_value: Decimal = Decimal("0.02")  # dollars per point
    base_pay: Decimal = Decimal("0.50")

    @property
    def mpcr(self) -> float:
        return self.mpcr_tenths / 10

    def multiplier(self, k: int) -> float:
        """Pool multiplier implied by the per-capita return on a degree-k graph."""
        return self.mpcr * (k + 1)

    def validate(self, k: int) -> None:
        if self.rounds < 1:
            raise GameError("rounds must be >= 1")
        if len(self.round_durations) != self.rounds:
            raise GameError("need one duration per round")
        if not 0 < self.mpcr_tenths < 10:
            raise GameError("per-capita return must lie strictly between 0 and 1")
        a = self.mpcr_tenths * (k + 1)  # multiplier in tenths
        if not 10 < a < 10 * (k + 1):
            raise GameError(
                "not a social dilemma: need 1 < multiplier < neighborhood size"
            )


@dataclass(frozen=True)
class RoundRecord:
    round: int  # 1-based
    player: int
    contribution: int
    origin: Origin
    payoff_tenths: int

    @property
    def payoff(self) -> float:
        return self.payoff_tenths / 10


def _check_contribution(value: int, endowment: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool):
        raise OutOfRangeContribution(f"contribution must be an integer, got {value!r}")
    if not 0 <= value <= endowment:
        raise OutOfRangeContribution(f"contribution {value} outside [0, {endowment}]")


def payoff_tenths(c_self: int, neighbor_contribs: list[int], params: GameParams) -> int:
    """Round payoff in tenths: kept endowment plus the per-capita pool share."""
    _check_contribution(c_self, params.endowment)
    for c in neighbor_contribs:
        _check_contribution(c, params.endowment)
    pool = c_self + sum(neighbor_contribs)
    return 10 * (params.endowment - c_self) + params.mpcr_tenths * pool


def payoff(c_self: int, neighbor_contribs: list[int], params: GameParams) -> float:
    return payoff_tenths(c_self, neighbor_contribs, params) / 10


def fill_missing(
    player_history: list[int], round_index: int, rng: random.Random
) -> tuple[int, Origin]:
    """Dropout rule: repeat the previous entry, else draw 0 or 10 equiprobably."""
    del round_index  # the rule depends only on whether any history exists
    if player_history:
        return player_history[-1], Origin.AUTO_REPEAT
    return rng.choice((0, 10)), Origin.AUTO_RANDOM


@dataclass
class SessionState:
    """Mutable per-session state; written only by the session engine."""

    net: Network
    placement: SeedPlacement | None
    params: GameParams
    phase: Phase = Phase.LOBBY
    round: int = 0  # current round while IN_ROUND / last closed otherwise
    contributions: list[dict[int, int]] = field(default_factory=list)
    origins: list[dict[int, Origin]] = field(default_factory=list)
    cumulative_tenths: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.params.validate(self.net.k)
        if not self.cumulative_tenths:
            self.cumulative_tenths = {v: 0 for v in self.net.nodes}

    @property
    def seeds(self) -> frozenset[int]:
        return self.placement.seeds if self.placement else frozenset()

    def human_positions(self) -> list[int]:
        return [v for v in self.net.nodes if v not in self.seeds]

    def history(self, player: int) -> list[int]:
        return [row[player] for row in self.contributions]

    def begin_round(self) -> int:
        if self.phase in (Phase.LOBBY, Phase.QUIZ, Phase.WAITING_ROOM):
            if self.round != 0:
                raise PhaseViolation("cannot restart a session")
        elif self.phase != Phase.BETWEEN_ROUNDS:
            raise PhaseViolation(f"cannot begin a round from phase {self.phase}")
        if self.round >= self.params.rounds:
            raise PhaseViolation("all rounds already played")
        self.round += 1
        self.phase = Phase.IN_ROUND
        return self.round

    def abort(self) -> None:
        if self.phase == Phase.FINISHED:
            raise PhaseViolation("session already finished")
        self.phase = Phase.ABORTED


def close_round(
    state: SessionState,
    submitted: dict[int, int],
    rng: random.Random,
    bot_positions: dict[int, int] | None = None,
) -> list[RoundRecord]:
    """Close the current round: force seeds, fill gaps, pay every node.

    ``submitted`` holds the human submissions received before the deadline;
    ``bot_positions`` optionally maps non-seed positions played by the
    server's own agents to their contribution for this round.
    """
    if state.phase != Phase.IN_ROUND:
        raise PhaseViolation(f"no open round to close (phase {state.phase})")
    r = state.round
    net, params = state.net, state.params
    bot_positions = bot_positions or {}

    contribs: dict[int, int] = {}
    origins: dict[int, Origin] = {}
    for v in net.nodes:
        if v in state.seeds:
            contribs[v] = state.placement.behavior
            origins[v] = Origin.BOT
        elif v in bot_positions:
            _check_contribution(bot_positions[v], params.endowment)
            contribs[v] = bot_positions[v]
            origins[v] = Origin.BOT
        elif v in submitted:
            _check_contribution(submitted[v], params.endowment)
            contribs[v] = submitted[v]
            origins[v] = Origin.HUMAN
        else:
            contribs[v], origins[v] = fill_missing(state.history(v), r, rng)

    records = []
    for v in net.nodes:
        pay = payoff_tenths(contribs[v], [contribs[u] for u in net.neighbors(v)], params)
        state.cumulative_tenths[v] += pay
        records.append(
            RoundRecord(
                round=r,
                player=v,
                contribution=contribs[v],
                origin=origins[v],
                payoff_tenths=pay,
            )
        )
    state.contributions.append(contribs)
    state.origins.append(origins)
    state.phase = Phase.FINISHED if r == params.rounds else Phase.BETWEEN_ROUNDS
    return records


def session_validity(records: list[RoundRecord]) -> tuple[float, bool]:
    """Fraction of human-position entries actually typed by humans.

    Positions whose every entry is bot-played are excluded entirely; the
    session is usable for analysis when the fraction reaches 0.90.
    """
    if not records:
        raise IncompleteSession("no records")
    rounds = max(rec.round for rec in records)
    by_player: dict[int, list[RoundRecord]] = {}
    for rec in records:
        by_player.setdefault(rec.player, []).append(rec)
    human_total = 0
    human_made = 0
    for recs in by_player.values():
        if len(recs) != rounds:
            raise IncompleteSession(
                f"player {recs[0].player} has {len(recs)} of {rounds} records"
            )
        if all(rec.origin == Origin.BOT for rec in recs):
            continue
        for rec in recs:
            if rec.origin == Origin.BOT:
                raise IncompleteSession(
                    f"player {rec.player} mixes bot and human origins"
                )
            human_total += 1
            if rec.origin == Origin.HUMAN:
                human_made += 1
    if human_total == 0:
        return 0.0, False
    fraction = human_made / human_total
    return fraction, fraction >= 0.90


def points_to_dollars(points_tenths: int, params: GameParams) -> Decimal:
    """Base pay plus per-point bonus, rounded half-up to the cent."""
    if points_tenths < 0:
        raise GameError("negative point totals cannot be paid out")
    bonus = Decimal(points_tenths) / Decimal(10) * params.point_value
    return (params.base_pay + bonus).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)


def roi(
    seeded_session_humans: float,
    baseline_humans: float,
    seed_total: float,
    seed_counterfactual: float,
) -> float:
    """Marginal human contributions gained per point of seed subsidy."""
    cost = seed_total - seed_counterfactual
    if cost <= 0:
        raise ZeroCost("seeds contributed no more than their counterfactual")
    return (seeded_session_humans - baseline_humans) / cost
