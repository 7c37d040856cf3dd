"""Append-only session logs: one JSON object per line, replayable bit-exactly.

Every event carries the same six keys (unused ones are null):

    {"event": ..., "round": ..., "player": ..., "value": ...,
     "origin": ..., "timestamp": ...}

Event types and their ``value`` payloads:

    session_start   full session snapshot: id, condition, rng_seed, the
                    network (name/n/k/edges/groups), the seed placement
                    (or null), game parameters, optional player tokens
    round_start     null
    contribution    integer points contributed (origin set)
    payoff          integer TENTHS of a point earned that round
    round_end       null
    session_end     {"cumulative_tenths": {player: tenths}}

Payoffs are logged in tenths so replay comparisons are integer-exact.
Simulator logs use a virtual clock starting at 0.0; server logs use wall
time. Timestamps never feed back into any computation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path
from typing import Iterator

from . import game
from .topology import Network, SeedPlacement

SCHEMA_VERSION = 1

SESSION_START = "session_start"
ROUND_START = "round_start"
CONTRIBUTION = "contribution"
PAYOFF = "payoff"
ROUND_END = "round_end"
SESSION_END = "session_end"

_KEYS = ("event", "round", "player", "value", "origin", "timestamp")


class LogError(Exception):
    pass


class ReplayMismatch(LogError):
    """Recomputed payoffs disagree with the logged ones."""


def make_event(
    event: str,
    round: int | None = None,
    player: int | None = None,
    value=None,
    origin: str | None = None,
    timestamp: float = 0.0,
) -> dict:
    return {
        "event": event,
        "round": round,
        "player": player,
        "value": value,
        "origin": origin,
        "timestamp": timestamp,
    }


def network_snapshot(net: Network) -> dict:
    return {
        "name": net.name,
        "n": net.n,
        "k": net.k,
        "edges": [list(e) for e in sorted(net.edges)],
        "groups": list(net.groups),
    }


def network_from_snapshot(snap: dict) -> Network:
    return Network(
        name=snap["name"],
        n=snap["n"],
        k=snap["k"],
        edges=frozenset((a, b) for a, b in snap["edges"]),
        groups=tuple(snap["groups"]),
    )


def placement_snapshot(placement: SeedPlacement | None) -> dict | None:
    if placement is None:
        return None
    return {
        "seeds": sorted(placement.seeds),
        "arrangement": placement.arrangement,
        "behavior": placement.behavior,
    }


def placement_from_snapshot(snap: dict | None) -> SeedPlacement | None:
    if snap is None:
        return None
    return SeedPlacement(
        seeds=frozenset(snap["seeds"]),
        arrangement=snap["arrangement"],
        behavior=snap["behavior"],
    )


def params_snapshot(params: game.GameParams) -> dict:
    return {
        "endowment": params.endowment,
        "mpcr_tenths": params.mpcr_tenths,
        "rounds": params.rounds,
        "round_durations": list(params.round_durations),
        "point_value": str(params.point_value),
        "base_pay": str(params.base_pay),
    }


def params_from_snapshot(snap: dict) -> game.GameParams:
    return game.GameParams(
        endowment=snap["endowment"],
        mpcr_tenths=snap["mpcr_tenths"],
        rounds=snap["rounds"],
        round_durations=tuple(snap["round_durations"]),
        point_value=Decimal(snap["point_value"]),
        base_pay=Decimal(snap["base_pay"]),
    )


@dataclass
class SessionLog:
    """Ordered event stream for one realization."""

    events: list[dict] = field(default_factory=list)

    def append(self, **kwargs) -> dict:
        event = make_event(**kwargs)
        self.events.append(event)
        return event

    def __iter__(self) -> Iterator[dict]:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)

    # -- accessors ---------------------------------------------------------

    def _start(self) -> dict:
        if not self.events or self.events[0]["event"] != SESSION_START:
            raise LogError("log does not begin with a session_start event")
        return self.events[0]["value"]

    @property
    def session_id(self) -> str:
        return self._start()["session_id"]

    @property
    def condition(self) -> str:
        return self._start()["condition"]

    @property
    def rng_seed(self):
        return self._start()["rng_seed"]

    def network(self) -> Network:
        return network_from_snapshot(self._start()["network"])

    def placement(self) -> SeedPlacement | None:
        return placement_from_snapshot(self._start()["placement"])

    def params(self) -> game.GameParams:
        return params_from_snapshot(self._start()["params"])

    def tokens(self) -> dict[int, str] | None:
        raw = self._start().get("tokens")
        if raw is None:
            return None
        return {int(pos): token for pos, token in raw.items()}

    def rounds_played(self) -> int:
        return max((e["round"] for e in self.events if e["round"] is not None), default=0)

    def contributions(self) -> list[dict[int, int]]:
        """Per closed round: player -> points."""
        out: list[dict[int, int]] = []
        for e in self.events:
            if e["event"] == CONTRIBUTION:
                while len(out) < e["round"]:
                    out.append({})
                out[e["round"] - 1][e["player"]] = e["value"]
        return out

    def origins(self) -> list[dict[int, game.Origin]]:
        out: list[dict[int, game.Origin]] = []
        for e in self.events:
            if e["event"] == CONTRIBUTION:
                while len(out) < e["round"]:
                    out.append({})
                out[e["round"] - 1][e["player"]] = game.Origin(e["origin"])
        return out

    def payoffs_tenths(self) -> list[dict[int, int]]:
        out: list[dict[int, int]] = []
        for e in self.events:
            if e["event"] == PAYOFF:
                while len(out) < e["round"]:
                    out.append({})
                out[e["round"] - 1][e["player"]] = e["value"]
        return out

    def final_cumulative_tenths(self) -> dict[int, int]:
        for e in reversed(self.events):
            if e["event"] == SESSION_END:
                return {int(p): t for p, t in e["value"]["cumulative_tenths"].items()}
        raise LogError("log has no session_end event")

    def records(self) -> list[game.RoundRecord]:
        payoffs = self.payoffs_tenths()
        origins = self.origins()
        out = []
        for r, contribs in enumerate(self.contributions(), start=1):
            for player, value in contribs.items():
                out.append(
                    game.RoundRecord(
                        round=r,
                        player=player,
                        contribution=value,
                        origin=origins[r - 1][player],
                        payoff_tenths=payoffs[r - 1][player],
                    )
                )
        return out

    # -- persistence ---------------------------------------------------------

    def write(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            for e in self.events:
                fh.write(json.dumps({k: e[k] for k in _KEYS}, sort_keys=True) + "\n")

    @classmethod
    def read(cls, path: str | Path) -> "SessionLog":
        events = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    events.append(json.loads(line))
        return cls(events=events)


def start_event_value(
    session_id: str,
    condition: str,
    rng_seed,
    net: Network,
    placement: SeedPlacement | None,
    params: game.GameParams,
    tokens: dict[int, str] | None = None,
) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "session_id": session_id,
        "condition": condition,
        "rng_seed": rng_seed,
        "network": network_snapshot(net),
        "placement": placement_snapshot(placement),
        "params": params_snapshot(params),
        "tokens": {str(p): t for p, t in tokens.items()} if tokens else None,
    }


def replay(log: SessionLog) -> list[dict[int, int]]:
    """Recompute every payoff from the logged contributions and verify the log.

    Returns the recomputed per-round payoff maps (tenths). Raises
    ReplayMismatch when any payoff or the final cumulative totals differ.
    """
    net = log.network()
    params = log.params()
    logged = log.payoffs_tenths()
    cumulative = {v: 0 for v in net.nodes}
    recomputed: list[dict[int, int]] = []
    for r, contribs in enumerate(log.contributions(), start=1):
        if set(contribs) != set(net.nodes):
            raise ReplayMismatch(f"round {r} is missing contributions")
        round_pay = {}
        for v in net.nodes:
            pay = game.payoff_tenths(
                contribs[v], [contribs[u] for u in net.neighbors(v)], params
            )
            round_pay[v] = pay
            cumulative[v] += pay
            if logged and logged[r - 1].get(v) != pay:
                raise ReplayMismatch(
                    f"round {r} player {v}: logged {logged[r - 1].get(v)} != {pay}"
                )
        recomputed.append(round_pay)
    try:
        final = log.final_cumulative_tenths()
    except LogError:
        final = None
    if final is not None and final != cumulative:
        raise ReplayMismatch("final cumulative totals disagree")
    return recomputed
