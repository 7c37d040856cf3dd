"""Deterministic offline session runner.

Executes full sessions round by round through the same economic engine
the live server uses, emitting logs in the identical schema. Round
timers are skipped entirely: payoff logic is time-independent and the
virtual clock only stamps events.
"""

from __future__ import annotations

import argparse
import json
import random
from pathlib import Path

from . import agents as ag, game, logs
from .config import (
    ALL_HUMAN,
    COOP_CONCENTRATED,
    COOP_COVER,
    DEFECT_COVER,
    SessionConfig,
)
from .topology import CLIQUES, TOPOLOGY_NAMES


def fill_rng(rng_seed) -> random.Random:
    """Session stream used for dropout auto-fills; replayable by seed."""
    return random.Random(f"{rng_seed}/fill")


def _neighbor_order(net, v):
    return sorted(net.neighbors(v))


def _drive_session(config: SessionConfig, submissions_for_round) -> logs.SessionLog:
    """Shared round loop: ``submissions_for_round(state, r)`` yields the
    pre-deadline submissions; seeds and fills are handled by close_round."""
    net = config.resolve_network()
    placement = config.resolve_placement(net)
    params = config.params
    state = game.SessionState(net=net, placement=placement, params=params)
    log = logs.SessionLog()
    log.append(
        event=logs.SESSION_START,
        value=logs.start_event_value(
            config.session_id,
            config.condition,
            config.rng_seed,
            net,
            placement,
            params,
            tokens=config.tokens,
        ),
        timestamp=0.0,
    )
    fills = fill_rng(config.rng_seed)
    clock = 0.0
    for r in range(1, params.rounds + 1):
        state.begin_round()
        log.append(event=logs.ROUND_START, round=r, timestamp=clock)
        records = game.close_round(state, submissions_for_round(state, r), fills)
        clock += params.round_durations[r - 1]
        for rec in records:
            log.append(
                event=logs.CONTRIBUTION,
                round=r,
                player=rec.player,
                value=rec.contribution,
                origin=rec.origin.value,
                timestamp=clock,
            )
        for rec in records:
            log.append(
                event=logs.PAYOFF,
                round=r,
                player=rec.player,
                value=rec.payoff_tenths,
                timestamp=clock,
            )
        log.append(event=logs.ROUND_END, round=r, timestamp=clock)
    log.append(
        event=logs.SESSION_END,
        value={"cumulative_tenths": {str(v): t for v, t in state.cumulative_tenths.items()}},
        timestamp=clock,
    )
    return log


def run_session(
    config: SessionConfig,
    bound_agents: dict[int, ag.Strategy] | None = None,
) -> logs.SessionLog:
    """Play every round with the configured agents and return the log."""
    net = config.resolve_network()
    placement = config.resolve_placement(net)
    if bound_agents is None:
        bound_agents = config.resolve_agents(net, placement)
    missing_nodes = [v for v in net.nodes if v not in bound_agents]
    if missing_nodes:
        raise ag.AgentError(f"no strategy bound for nodes {missing_nodes}")
    rngs = {v: ag.agent_rng(config.rng_seed, v) for v in net.nodes}

    def submissions(state: game.SessionState, r: int) -> dict[int, int]:
        submitted: dict[int, int] = {}
        for v in state.human_positions():
            if v in config.miss_schedule.get(r, ()):
                continue  # scripted dropout; the fill rule takes over
            nbr = [
                [row[u] for u in _neighbor_order(net, v)] for row in state.contributions
            ]
            submitted[v] = ag.decide(
                bound_agents[v], state.history(v), nbr, r, rngs[v],
                endowment=config.params.endowment,
            )
        return submitted

    return _drive_session(config, submissions)


def run_scripted(
    config: SessionConfig, contributions: list[dict[int, int | None]]
) -> logs.SessionLog:
    """Play a session from a fixed contribution script (fixture building).

    One dict per round mapping non-seed positions to points; a missing or
    None entry falls through to the dropout fill rule. Scripted values are
    logged with human origin.
    """
    if len(contributions) != config.params.rounds:
        raise game.GameError(
            f"script covers {len(contributions)} rounds, params say {config.params.rounds}"
        )

    def submissions(state: game.SessionState, r: int) -> dict[int, int]:
        row = contributions[r - 1]
        return {
            v: row[v] for v in state.human_positions() if row.get(v) is not None
        }

    return _drive_session(config, submissions)


def run_batch(
    configs: list[SessionConfig], replications: int, base_seed: int
) -> list[logs.SessionLog]:
    """Independent replications of each config; unique seed per realization."""
    if replications < 1:
        raise ValueError("replications must be >= 1")
    out = []
    for c_idx, config in enumerate(configs):
        for rep in range(replications):
            seed = base_seed + 10_000 * c_idx + rep
            rep_config = SessionConfig.from_dict(config.to_dict())
            rep_config.rng_seed = seed
            rep_config.session_id = f"{config.session_id}-r{rep:02d}"
            out.append(run_session(rep_config))
    return out


#: realizations per topology, mirroring the published design matrix
DESIGN_MATRIX = {
    ALL_HUMAN: {"Cliques": 4, "PairedCliques": 3, "Cycle": 8, "SmallWorld": 4, "RandomRegular": 4},
    COOP_COVER: {"Cliques": 3, "PairedCliques": 2, "Cycle": 4, "SmallWorld": 2, "RandomRegular": 2},
    DEFECT_COVER: {"Cliques": 2, "PairedCliques": 2, "Cycle": 9, "SmallWorld": 2, "RandomRegular": 2},
    COOP_CONCENTRATED: {"PairedCliques": 4, "Cycle": 5, "SmallWorld": 5, "RandomRegular": 6},
}


def design_matrix_configs(
    base_seed: int, agents_default: str = "linear:0.6,6,1.5"
) -> list[SessionConfig]:
    """One config per realization of the full design matrix (73 sessions)."""
    out = []
    idx = 0
    for condition, row in DESIGN_MATRIX.items():
        for name in TOPOLOGY_NAMES:
            count = row.get(name, 0)
            if count == 0:
                continue
            if condition == COOP_CONCENTRATED and name == CLIQUES:
                continue
            for rep in range(count):
                out.append(
                    SessionConfig(
                        session_id=f"{name.lower()}-{condition}-{rep:02d}",
                        condition=condition,
                        topology={"name": name},
                        agents_default=agents_default,
                        rng_seed=base_seed + idx,
                    )
                )
                idx += 1
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="netgoods-simulate",
        description="Run simulated sessions and write one log file per realization.",
    )
    parser.add_argument("--config", required=True, help="session config JSON file")
    parser.add_argument("--replications", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0, help="base RNG seed")
    parser.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args(argv)

    config = SessionConfig.load(args.config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    batch = run_batch([config], args.replications, args.seed)
    manifest = []
    for log in batch:
        filename = f"{log.session_id}.jsonl"
        log.write(out_dir / filename)
        manifest.append(
            {
                "file": filename,
                "session_id": log.session_id,
                "condition": log.condition,
                "topology": log.network().name,
                "rng_seed": log.rng_seed,
            }
        )
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(batch)} session logs to {out_dir}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
