"""Session configuration files (JSON).

A config names the network, the seed condition, game parameters, agent
strategies for simulation, and the session RNG seed. Example:

    {
      "session_id": "cycle-coop-01",
      "condition": "coop_cover",
      "topology": {"name": "Cycle"},
      "params": {"mpcr": 0.4, "rounds": 10},
      "agents": {"default": "linear:0.6,6,1.5", "overrides": {"3": "freerider"}},
      "rng_seed": 7,
      "miss_schedule": {"4": [2, 11]}
    }

``topology`` accepts a canonical name, a generator request
({"name": ..., "rng_seed": ...}) or {"file": path}. ``placement`` is
normally derived from the condition but can be given explicitly with the
same name/file forms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path

from . import agents as ag, game, topology as tp

ALL_HUMAN = "all_human"
COOP_COVER = "coop_cover"
DEFECT_COVER = "defect_cover"
COOP_CONCENTRATED = "coop_concentrated"

#: display labels matching the experiment design matrix rows
CONDITION_LABELS = {
    ALL_HUMAN: "All Human",
    COOP_COVER: "Cooperative Seeds, Cover",
    DEFECT_COVER: "Defecting Seeds, Cover",
    COOP_CONCENTRATED: "Cooperative Seeds, Concentrated",
}

_CONDITION_PLACEMENTS = {
    ALL_HUMAN: None,
    COOP_COVER: (tp.COVER, tp.FULL_CONTRIBUTE),
    DEFECT_COVER: (tp.COVER, tp.ZERO_CONTRIBUTE),
    COOP_CONCENTRATED: (tp.CONCENTRATED, tp.FULL_CONTRIBUTE),
}


class ConfigError(Exception):
    pass


@dataclass
class SessionConfig:
    session_id: str
    condition: str = ALL_HUMAN
    topology: dict = field(default_factory=lambda: {"name": tp.CYCLE})
    placement: dict | None = None  # derived from condition when omitted
    params: game.GameParams = field(default_factory=game.GameParams)
    agents_default: str = "linear:0.6,6,1.5"
    agents_overrides: dict[int, str] = field(default_factory=dict)
    rng_seed: int = 0
    miss_schedule: dict[int, list[int]] = field(default_factory=dict)
    tokens: dict[int, str] | None = None
    time_scale: float = 1.0

    # -- resolution ----------------------------------------------------------

    def resolve_network(self) -> tp.Network:
        spec = self.topology
        if "file" in spec:
            return tp.load_network(spec["file"])
        name = spec.get("name")
        if name is None:
            raise ConfigError("topology needs a name or a file")
        if "rng_seed" in spec:
            if name == tp.SMALL_WORLD:
                return tp.build_small_world(spec["rng_seed"])
            if name == tp.RANDOM_REGULAR:
                return tp.build_random_regular(
                    spec.get("n", 24), spec.get("k", 5), spec["rng_seed"]
                )
            raise ConfigError(f"{name} is deterministic; rng_seed not applicable")
        if name in tp.TOPOLOGY_NAMES:
            return tp.canonical_network(name)
        if name == tp.CALIBRATION_CLIQUE:
            return tp.build_cliques(spec.get("num_cliques", 6), spec.get("clique_size", 4))
        raise ConfigError(f"unknown topology {name!r}")

    def resolve_placement(self, net: tp.Network) -> tp.SeedPlacement | None:
        if self.placement is not None:
            spec = self.placement
            if "file" in spec:
                return tp.load_placement(spec["file"])
            return tp.place_seeds(
                net, spec["arrangement"], behavior=spec.get("behavior", tp.FULL_CONTRIBUTE)
            )
        if self.condition not in _CONDITION_PLACEMENTS:
            raise ConfigError(f"unknown condition {self.condition!r}")
        derived = _CONDITION_PLACEMENTS[self.condition]
        if derived is None:
            return None
        arrangement, behavior = derived
        if self.topology.get("name") in tp.TOPOLOGY_NAMES and "rng_seed" not in self.topology:
            return tp.canonical_placement(
                self.topology["name"], arrangement, behavior=behavior
            )
        return tp.place_seeds(net, arrangement, behavior=behavior)

    def resolve_agents(
        self, net: tp.Network, placement: tp.SeedPlacement | None
    ) -> dict[int, ag.Strategy]:
        bound = ag.bind_agents(net, placement, ag.parse_strategy(self.agents_default))
        for node, spec in self.agents_overrides.items():
            if placement and node in placement.seeds:
                raise ConfigError(f"node {node} is a seed; its strategy is fixed")
            bound[node] = ag.parse_strategy(spec)
        return bound

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "condition": self.condition,
            "topology": self.topology,
            "placement": self.placement,
            "params": {
                "endowment": self.params.endowment,
                "mpcr": self.params.mpcr,
                "rounds": self.params.rounds,
                "round_durations": list(self.params.round_durations),
                "point_value": str(self.params.point_value),
                "base_pay": str(self.params.base_pay),
            },
            "agents": {
                "default": self.agents_default,
                "overrides": {str(n): s for n, s in self.agents_overrides.items()},
            },
            "rng_seed": self.rng_seed,
            "miss_schedule": {str(r): ps for r, ps in self.miss_schedule.items()},
            "tokens": {str(p): t for p, t in self.tokens.items()} if self.tokens else None,
            "time_scale": self.time_scale,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "SessionConfig":
        p = raw.get("params", {})
        mpcr = p.get("mpcr", 0.4)
        mpcr_tenths = round(mpcr * 10)
        if abs(mpcr_tenths - mpcr * 10) > 1e-9:
            raise ConfigError("mpcr must be a multiple of 0.1 (exact-arithmetic currency)")
        rounds = p.get("rounds", 10)
        durations = p.get("round_durations")
        if durations is None:
            durations = (
                game.DEFAULT_ROUND_DURATIONS
                if rounds == 10
                else tuple([45.0, 45.0][:rounds] + [30.0] * max(0, rounds - 2))
            )
        params = game.GameParams(
            endowment=p.get("endowment", 10),
            mpcr_tenths=mpcr_tenths,
            rounds=rounds,
            round_durations=tuple(durations),
            point_value=Decimal(str(p.get("point_value", "0.02"))),
            base_pay=Decimal(str(p.get("base_pay", "0.50"))),
        )
        agents_raw = raw.get("agents", {})
        tokens_raw = raw.get("tokens")
        return cls(
            session_id=raw["session_id"],
            condition=raw.get("condition", ALL_HUMAN),
            topology=raw.get("topology", {"name": tp.CYCLE}),
            placement=raw.get("placement"),
            params=params,
            agents_default=agents_raw.get("default", "linear:0.6,6,1.5"),
            agents_overrides={
                int(n): s for n, s in agents_raw.get("overrides", {}).items()
            },
            rng_seed=raw.get("rng_seed", 0),
            miss_schedule={
                int(r): list(ps) for r, ps in raw.get("miss_schedule", {}).items()
            },
            tokens={int(p_): t for p_, t in tokens_raw.items()} if tokens_raw else None,
            time_scale=raw.get("time_scale", 1.0),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "SessionConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))
