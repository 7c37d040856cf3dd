"""Statistics over session logs: aggregates, tests and comparisons.

The unit of statistical independence is the realization (one session);
within-session rounds are serially dependent, so confidence intervals
are Student-t intervals over session-level means. The per-round
Kruskal-Wallis test pools individual contributions within a round, which
is the form the published comparisons take.

All operations are pure functions of the logs: the same input files
produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from scipy import stats as sps

from . import game, logs
from .config import ALL_HUMAN, COOP_CONCENTRATED, COOP_COVER, DEFECT_COVER
from .topology import Network, SeedPlacement, seed_distance_classes


class AnalysisError(Exception):
    pass


class NoValidSessions(AnalysisError):
    pass


class MissingBaseline(AnalysisError):
    pass


class EmptyClass(AnalysisError):
    pass


class DegenerateAllTied(AnalysisError):
    pass


# ---------------------------------------------------------------------------
# session parsing


@dataclass
class SessionData:
    """One realization, parsed out of its log for fast aggregation."""

    session_id: str
    condition: str
    net: Network
    placement: SeedPlacement | None
    endowment: int
    rounds: int
    contributions: list[dict[int, int]]
    origins: list[dict[int, game.Origin]]
    tokens: dict[int, str] | None
    start_time: float
    validity: float
    valid: bool

    @property
    def topology(self) -> str:
        return self.net.name

    @property
    def seeds(self) -> frozenset[int]:
        return self.placement.seeds if self.placement else frozenset()

    @property
    def humans(self) -> list[int]:
        """Non-seed positions actually played by (possibly auto-filled) humans."""
        out = []
        for v in self.net.nodes:
            if v in self.seeds:
                continue
            if all(row[v] == game.Origin.BOT for row in self.origins):
                continue  # position filled by a server-side agent
            out.append(v)
        return out

    def human_values(self, r: int) -> list[int]:
        row = self.contributions[r - 1]
        return [row[v] for v in self.humans]

    def round_mean(self, r: int, normalize: bool = False) -> float:
        values = self.human_values(r)
        mean = sum(values) / len(values)
        return mean / self.endowment if normalize else mean

    def human_total(self) -> int:
        return sum(sum(self.human_values(r)) for r in range(1, self.rounds + 1))

    def positions_total(self, positions) -> int:
        return sum(
            self.contributions[r][v] for r in range(self.rounds) for v in positions
        )

    def overall_human_mean(self) -> float:
        total = self.human_total()
        return total / (len(self.humans) * self.rounds)


def session_data(log: logs.SessionLog) -> SessionData:
    net = log.network()
    origins = log.origins()
    contributions = log.contributions()
    fraction, valid = game.session_validity(log.records())
    return SessionData(
        session_id=log.session_id,
        condition=log.condition,
        net=net,
        placement=log.placement(),
        endowment=log.params().endowment,
        rounds=len(contributions),
        contributions=contributions,
        origins=origins,
        tokens=log.tokens(),
        start_time=log.events[0]["timestamp"],
        validity=fraction,
        valid=valid,
    )


def load_sessions(paths) -> list[SessionData]:
    return [session_data(logs.SessionLog.read(p)) for p in sorted(paths)]


def _require_valid(sessions: list[SessionData]) -> list[SessionData]:
    usable = [s for s in sessions if s.valid]
    if not usable:
        raise NoValidSessions("no session passed the 90% human-data rule")
    return usable


# ---------------------------------------------------------------------------
# means and intervals


@dataclass
class PerRoundStats:
    means: list[float]
    ci_low: list[float]
    ci_high: list[float]
    n_sessions: int


def _t_interval(values: list[float]) -> tuple[float, float, float]:
    n = len(values)
    mean = sum(values) / n
    if n == 1:
        return mean, mean, mean
    sd = math.sqrt(sum((v - mean) ** 2 for v in values) / (n - 1))
    half = sps.t.ppf(0.975, n - 1) * sd / math.sqrt(n)
    return mean, mean - half, mean + half


def per_round_mean_ci(
    sessions: list[SessionData], normalize_endowment: bool = False
) -> PerRoundStats:
    """Round means over human contributions with 95% t-intervals across sessions."""
    usable = _require_valid(sessions)
    rounds = usable[0].rounds
    means, lows, highs = [], [], []
    for r in range(1, rounds + 1):
        session_means = [s.round_mean(r, normalize=normalize_endowment) for s in usable]
        mean, low, high = _t_interval(session_means)
        means.append(mean)
        lows.append(low)
        highs.append(high)
    return PerRoundStats(means=means, ci_low=lows, ci_high=highs, n_sessions=len(usable))


def shift_to_common_start(curves: dict[str, list[float]]) -> dict[str, list[float]]:
    """Shift each curve vertically so all start at the grand round-1 mean."""
    if not curves:
        return {}
    grand = sum(curve[0] for curve in curves.values()) / len(curves)
    return {
        label: [v - (curve[0] - grand) for v in curve]
        for label, curve in curves.items()
    }


# ---------------------------------------------------------------------------
# rank test


@dataclass
class KWResult:
    H: float
    df: int
    p: float
    tie_correction: float
    degenerate: bool = False


def kruskal_wallis(groups: list[list[float]]) -> KWResult:
    """Rank-based k-sample test with tie correction; p from the chi² tail.

    When every observation is identical the statistic is undefined; that
    case is reported as no evidence (H=0, p=1) with the degenerate flag.
    """
    if len(groups) < 2:
        raise AnalysisError("need at least two groups")
    if any(len(g) == 0 for g in groups):
        raise AnalysisError("groups must be nonempty")
    df = len(groups) - 1
    pooled = [v for g in groups for v in g]
    n_total = len(pooled)

    order = sorted(range(n_total), key=lambda i: pooled[i])
    ranks = [0.0] * n_total
    tie_sizes = []
    i = 0
    while i < n_total:
        j = i
        while j + 1 < n_total and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        avg_rank = (i + j) / 2 + 1
        for idx in range(i, j + 1):
            ranks[order[idx]] = avg_rank
        tie_sizes.append(j - i + 1)
        i = j + 1

    if tie_sizes == [n_total]:  # every value identical
        return KWResult(H=0.0, df=df, p=1.0, tie_correction=0.0, degenerate=True)

    h = 0.0
    offset = 0
    for g in groups:
        r_sum = sum(ranks[offset : offset + len(g)])
        offset += len(g)
        h += r_sum * r_sum / len(g)
    h = 12.0 / (n_total * (n_total + 1)) * h - 3.0 * (n_total + 1)
    correction = 1.0 - sum(t**3 - t for t in tie_sizes) / (n_total**3 - n_total)
    h /= correction
    return KWResult(
        H=h, df=df, p=float(sps.chi2.sf(h, df)), tie_correction=correction
    )


# ---------------------------------------------------------------------------
# group- and individual-level views


def group_fraction_at_least(
    sessions: list[SessionData], threshold: float
) -> list[float]:
    """Per round: fraction of (group, session) cells whose human mean >= threshold."""
    usable = _require_valid(sessions)
    rounds = usable[0].rounds
    out = []
    for r in range(1, rounds + 1):
        hits = 0
        cells = 0
        for s in usable:
            humans = set(s.humans)
            for g in sorted(set(s.net.groups)):
                members = [v for v in s.net.group_members(g) if v in humans]
                if not members:
                    continue
                row = s.contributions[r - 1]
                mean = sum(row[v] for v in members) / len(members)
                cells += 1
                if mean >= threshold:
                    hits += 1
        out.append(hits / cells if cells else 0.0)
    return out


def contribution_distribution(sessions: list[SessionData]) -> list[list[int]]:
    """Per round histogram of human contributions over 0..endowment."""
    usable = _require_valid(sessions)
    rounds = usable[0].rounds
    endowment = max(s.endowment for s in usable)
    hist = [[0] * (endowment + 1) for _ in range(rounds)]
    for s in usable:
        for r in range(1, rounds + 1):
            for v in s.human_values(r):
                hist[r - 1][v] += 1
    return hist


def overall_human_mean(sessions: list[SessionData], ordering: str = "session") -> float:
    """Grand mean over humans and rounds.

    ``session``: average the per-session means (each realization weighs
    equally); ``pooled``: average over every individual observation.
    """
    usable = _require_valid(sessions)
    if ordering == "session":
        return sum(s.overall_human_mean() for s in usable) / len(usable)
    if ordering == "pooled":
        total = sum(s.human_total() for s in usable)
        count = sum(len(s.humans) * s.rounds for s in usable)
        return total / count
    raise AnalysisError(f"unknown ordering {ordering!r}")


def seed_condition_means(
    sessions_by_condition: dict[str, list[SessionData]], ordering: str = "session"
) -> dict[str, dict[str, float]]:
    """Per topology, the overall human mean under each seed condition."""
    out: dict[str, dict[str, float]] = {}
    for condition, sessions in sessions_by_condition.items():
        by_topology: dict[str, list[SessionData]] = {}
        for s in sessions:
            by_topology.setdefault(s.topology, []).append(s)
        for topology, subset in by_topology.items():
            out.setdefault(topology, {})[condition] = overall_human_mean(
                subset, ordering=ordering
            )
    return out


# ---------------------------------------------------------------------------
# structural comparisons

PAIR_CLASSES = (
    ("adjacent", "pos"),
    ("adjacent", "neg"),
    ("adjacent", "none"),
    ("nonadjacent", "pos"),
    ("nonadjacent", "neg"),
    ("nonadjacent", "none"),
)


@dataclass
class PairwiseDiffs:
    per_class: dict[tuple[str, str], list[float] | None]
    empty_classes: list[tuple[str, str]]


def _pair_class(s: SessionData, u: int, v: int) -> tuple[str, str]:
    adjacency = "adjacent" if v in s.net.neighbors(u) else "nonadjacent"
    shared = any(
        seed in s.net.neighbors(u) and seed in s.net.neighbors(v) for seed in s.seeds
    )
    if not shared:
        return adjacency, "none"
    sign = "pos" if s.placement.behavior > 0 else "neg"
    return adjacency, sign


def pairwise_difference(sessions: list[SessionData]) -> PairwiseDiffs:
    """Mean |c_u - c_v| per round for each structural pair class.

    Every unordered human pair lands in exactly one class: adjacent or
    not, crossed with the sign of a shared seed neighbor (or none).
    """
    usable = _require_valid(sessions)
    rounds = usable[0].rounds
    sums = {c: [0.0] * rounds for c in PAIR_CLASSES}
    counts = {c: [0] * rounds for c in PAIR_CLASSES}
    for s in usable:
        humans = s.humans
        classes = {}
        for i, u in enumerate(humans):
            for v in humans[i + 1 :]:
                classes[(u, v)] = _pair_class(s, u, v)
        for r in range(rounds):
            row = s.contributions[r]
            for (u, v), cls in classes.items():
                sums[cls][r] += abs(row[u] - row[v])
                counts[cls][r] += 1
    per_class: dict[tuple[str, str], list[float] | None] = {}
    empty = []
    for cls in PAIR_CLASSES:
        if counts[cls][0] == 0:
            per_class[cls] = None
            empty.append(cls)
        else:
            per_class[cls] = [sums[cls][r] / counts[cls][r] for r in range(rounds)]
    return PairwiseDiffs(per_class=per_class, empty_classes=empty)


@dataclass
class ClassStat:
    mean: float
    ci_low: float
    ci_high: float
    n_sessions: int
    positions: int


@dataclass
class DistanceClassReport:
    by_adjacent_seeds: dict[int, ClassStat]
    two_hop: ClassStat
    two_hop_baseline: ClassStat


def _class_stat(per_session_means: list[float], positions: int) -> ClassStat:
    mean, low, high = _t_interval(per_session_means)
    return ClassStat(
        mean=mean, ci_low=low, ci_high=high,
        n_sessions=len(per_session_means), positions=positions,
    )


def distance_class_means(
    concentrated: list[SessionData], baseline: list[SessionData]
) -> DistanceClassReport:
    """Human means by number of adjacent seeds, plus the two-hop comparison.

    The two-hop class (humans at hop distance exactly 2 from the seed set)
    is compared against the identical node positions in matched all-human
    sessions of the same topology.
    """
    usable = _require_valid(concentrated)
    topologies = {s.topology for s in usable}
    if len(topologies) != 1:
        raise AnalysisError(f"mixed topologies {topologies}; compare one at a time")

    by_class_sessions: dict[int, list[float]] = {0: [], 1: [], 2: []}
    class_positions = {0: set(), 1: set(), 2: set()}
    two_hop_means = []
    two_hop_positions: set[int] = set()
    for s in usable:
        if s.placement is None:
            raise AnalysisError(f"session {s.session_id} has no seed placement")
        classes = seed_distance_classes(s.net, s.placement)
        humans = set(s.humans)
        members = {0: [], 1: [], 2: []}
        hop2 = []
        for v, (adj, dist) in classes.items():
            if v not in humans:
                continue
            members[adj].append(v)
            if dist == 2:
                hop2.append(v)
        for adj, nodes in members.items():
            if nodes:
                total = s.positions_total(nodes)
                by_class_sessions[adj].append(total / (len(nodes) * s.rounds))
                class_positions[adj].update(nodes)
        if hop2:
            two_hop_means.append(s.positions_total(hop2) / (len(hop2) * s.rounds))
            two_hop_positions.update(hop2)

    if not two_hop_means:
        raise EmptyClass("no human is exactly two hops from the seed set")

    matched = [
        b for b in _require_valid(baseline) if b.topology == usable[0].topology
    ]
    if not matched:
        raise MissingBaseline(
            f"no all-human sessions for topology {usable[0].topology}"
        )
    positions = sorted(two_hop_positions)
    baseline_means = [
        b.positions_total(positions) / (len(positions) * b.rounds) for b in matched
    ]

    return DistanceClassReport(
        by_adjacent_seeds={
            adj: _class_stat(vals, len(class_positions[adj]))
            for adj, vals in by_class_sessions.items()
            if vals
        },
        two_hop=_class_stat(two_hop_means, len(positions)),
        two_hop_baseline=_class_stat(baseline_means, len(positions)),
    )


# ---------------------------------------------------------------------------
# return on investment


def roi_table(
    all_human: list[SessionData], coop_cover: list[SessionData]
) -> dict[str, float | None]:
    """Per topology: marginal human gain per point of seed subsidy.

    Uses whole-game totals averaged over realizations; None marks a
    topology where the seeds cost nothing over their counterfactual.
    """
    seeded_by_top: dict[str, list[SessionData]] = {}
    for s in _require_valid(coop_cover):
        seeded_by_top.setdefault(s.topology, []).append(s)
    base_by_top: dict[str, list[SessionData]] = {}
    for s in _require_valid(all_human):
        base_by_top.setdefault(s.topology, []).append(s)

    out: dict[str, float | None] = {}
    for topology, seeded in sorted(seeded_by_top.items()):
        if topology not in base_by_top:
            raise MissingBaseline(f"no all-human sessions for {topology}")
        seeds = sorted(seeded[0].seeds)
        humans = [v for v in seeded[0].net.nodes if v not in seeded[0].seeds]
        mean = lambda xs: sum(xs) / len(xs)
        seeded_humans = mean([s.positions_total(humans) for s in seeded])
        seeded_seeds = mean([s.positions_total(seeds) for s in seeded])
        base_humans = mean([b.positions_total(humans) for b in base_by_top[topology]])
        base_seedpos = mean([b.positions_total(seeds) for b in base_by_top[topology]])
        try:
            out[topology] = game.roi(seeded_humans, base_humans, seeded_seeds, base_seedpos)
        except game.ZeroCost:
            out[topology] = None
    return out


# ---------------------------------------------------------------------------
# learning effects


@dataclass
class LearningReport:
    by_experience: dict[int, float]
    slope: float
    slope_ci: tuple[float, float]
    observations: int


def learning_curves(sessions: list[SessionData]) -> LearningReport:
    """Mean contribution as a function of how many sessions a token has played."""
    usable = [s for s in _require_valid(sessions) if s.tokens]
    if not usable:
        raise AnalysisError("no session carries player tokens")
    ordered = sorted(usable, key=lambda s: (s.start_time, s.session_id))
    seen: dict[str, int] = {}
    points: list[tuple[int, float]] = []
    for s in ordered:
        humans = set(s.humans)
        for pos, token in s.tokens.items():
            if pos not in humans:
                continue
            experience = seen.get(token, 0) + 1
            seen[token] = experience
            mean = s.positions_total([pos]) / s.rounds
            points.append((experience, mean))
    by_level: dict[int, list[float]] = {}
    for level, value in points:
        by_level.setdefault(level, []).append(value)
    by_experience = {
        level: sum(vals) / len(vals) for level, vals in sorted(by_level.items())
    }
    if len(by_level) > 1 and len(points) > 2:
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        fit = sps.linregress(xs, ys)
        half = sps.t.ppf(0.975, len(points) - 2) * fit.stderr
        slope, ci = float(fit.slope), (float(fit.slope - half), float(fit.slope + half))
    else:
        slope, ci = 0.0, (0.0, 0.0)
    return LearningReport(
        by_experience=by_experience, slope=slope, slope_ci=ci, observations=len(points)
    )


def early_late_comparison(
    sessions: list[SessionData],
) -> tuple[PerRoundStats, PerRoundStats]:
    """Per-round means for the first half of realizations vs the second."""
    usable = sorted(_require_valid(sessions), key=lambda s: (s.start_time, s.session_id))
    if len(usable) < 2:
        raise AnalysisError("need at least two sessions to compare early vs late")
    half = len(usable) // 2
    return per_round_mean_ci(usable[:half]), per_round_mean_ci(usable[half:])


# ---------------------------------------------------------------------------
# full report


@dataclass
class StatReport:
    data: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"


def _stats_dict(stats: PerRoundStats) -> dict:
    return {
        "means": stats.means,
        "ci_low": stats.ci_low,
        "ci_high": stats.ci_high,
        "n_sessions": stats.n_sessions,
    }


def build_report(sessions: list[SessionData]) -> StatReport:
    by_condition: dict[str, list[SessionData]] = {}
    for s in sessions:
        by_condition.setdefault(s.condition, []).append(s)

    report: dict = {
        "schema": 1,
        "sessions": {
            "total": len(sessions),
            "valid": sum(1 for s in sessions if s.valid),
            "by_condition": {c: len(ss) for c, ss in sorted(by_condition.items())},
        },
    }

    # per-round means per condition x topology, plus the shifted view
    per_round: dict = {}
    for condition, group in sorted(by_condition.items()):
        by_top: dict[str, list[SessionData]] = {}
        for s in group:
            by_top.setdefault(s.topology, []).append(s)
        per_round[condition] = {}
        for topology, subset in sorted(by_top.items()):
            try:
                per_round[condition][topology] = _stats_dict(per_round_mean_ci(subset))
            except NoValidSessions:
                continue
    report["per_round_means"] = per_round

    if ALL_HUMAN in per_round and per_round[ALL_HUMAN]:
        curves = {t: d["means"] for t, d in per_round[ALL_HUMAN].items()}
        report["shifted_means"] = shift_to_common_start(curves)

        # per-round rank test across topologies over individual contributions
        all_human = [s for s in by_condition.get(ALL_HUMAN, []) if s.valid]
        by_top = {}
        for s in all_human:
            by_top.setdefault(s.topology, []).append(s)
        if len(by_top) >= 2:
            rounds = all_human[0].rounds
            kw = {}
            for r in range(1, rounds + 1):
                groups = [
                    [v for s in subset for v in s.human_values(r)]
                    for _, subset in sorted(by_top.items())
                ]
                result = kruskal_wallis(groups)
                kw[str(r)] = {
                    "H": result.H,
                    "df": result.df,
                    "p": result.p,
                    "degenerate": result.degenerate,
                }
            report["kw_tests"] = kw

        report["group_fraction"] = {
            str(x): group_fraction_at_least(all_human, x) for x in range(1, 11)
        }
        dist = {}
        for topology, subset in sorted(by_top.items()):
            dist[topology] = contribution_distribution(subset)
        report["distribution"] = dist

    conditions_present = {
        c: ss for c, ss in by_condition.items()
        if c in (ALL_HUMAN, COOP_COVER, DEFECT_COVER)
    }
    if len(conditions_present) > 1:
        report["seed_condition_means"] = seed_condition_means(conditions_present)

    seeded = [
        s
        for c in (COOP_COVER, DEFECT_COVER)
        for s in by_condition.get(c, [])
        if s.valid
    ]
    if seeded:
        diffs = pairwise_difference(seeded)
        report["pairwise_difference"] = {
            f"{adj}_{sign}": values for (adj, sign), values in diffs.per_class.items()
        }

    if ALL_HUMAN in by_condition and COOP_COVER in by_condition:
        try:
            roi = roi_table(by_condition[ALL_HUMAN], by_condition[COOP_COVER])
            report["roi"] = {t: v for t, v in roi.items()}
        except (MissingBaseline, NoValidSessions):
            pass

    if COOP_CONCENTRATED in by_condition and ALL_HUMAN in by_condition:
        by_top = {}
        for s in by_condition[COOP_CONCENTRATED]:
            by_top.setdefault(s.topology, []).append(s)
        distance: dict = {}
        for topology, subset in sorted(by_top.items()):
            try:
                rep = distance_class_means(subset, by_condition[ALL_HUMAN])
            except (EmptyClass, MissingBaseline, NoValidSessions):
                continue
            distance[topology] = {
                "by_adjacent_seeds": {
                    str(adj): vars(stat) for adj, stat in rep.by_adjacent_seeds.items()
                },
                "two_hop": vars(rep.two_hop),
                "two_hop_baseline": vars(rep.two_hop_baseline),
            }
        if distance:
            report["distance_classes"] = distance

    if any(s.tokens for s in sessions):
        learn = learning_curves([s for s in sessions if s.tokens])
        report["learning"] = {
            "by_experience": {str(k): v for k, v in learn.by_experience.items()},
            "slope": learn.slope,
            "slope_ci": list(learn.slope_ci),
            "observations": learn.observations,
        }

    return StatReport(data=report)


# ---------------------------------------------------------------------------
# CLI


def _write_figure_csvs(report: StatReport, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    data = report.data

    def write(name, header, rows):
        with open(out_dir / name, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)

    rows = []
    for condition, by_top in sorted(data.get("per_round_means", {}).items()):
        for topology, st in sorted(by_top.items()):
            for r, (m, lo, hi) in enumerate(
                zip(st["means"], st["ci_low"], st["ci_high"]), start=1
            ):
                rows.append([condition, topology, r, m, lo, hi, st["n_sessions"]])
    write(
        "per_round_means.csv",
        ["condition", "topology", "round", "mean", "ci_low", "ci_high", "n_sessions"],
        rows,
    )

    if "shifted_means" in data:
        rows = [
            [topology, r, v]
            for topology, means in sorted(data["shifted_means"].items())
            for r, v in enumerate(means, start=1)
        ]
        write("shifted_means.csv", ["topology", "round", "shifted_mean"], rows)

    if "kw_tests" in data:
        rows = [
            [r, st["H"], st["df"], st["p"]]
            for r, st in sorted(data["kw_tests"].items(), key=lambda kv: int(kv[0]))
        ]
        write("kw_tests.csv", ["round", "H", "df", "p"], rows)

    if "group_fraction" in data:
        rows = [
            [x, r, frac]
            for x, fractions in sorted(data["group_fraction"].items(), key=lambda kv: int(kv[0]))
            for r, frac in enumerate(fractions, start=1)
        ]
        write("group_fraction.csv", ["threshold", "round", "fraction"], rows)

    if "distribution" in data:
        rows = []
        for topology, hist in sorted(data["distribution"].items()):
            for r, counts in enumerate(hist, start=1):
                for value, count in enumerate(counts):
                    rows.append([topology, r, value, count])
        write("distribution.csv", ["topology", "round", "value", "count"], rows)

    if "seed_condition_means" in data:
        rows = [
            [topology, condition, mean]
            for topology, by_c in sorted(data["seed_condition_means"].items())
            for condition, mean in sorted(by_c.items())
        ]
        write("seed_condition_means.csv", ["topology", "condition", "mean"], rows)

    if "pairwise_difference" in data:
        rows = []
        for cls, values in sorted(data["pairwise_difference"].items()):
            if values is None:
                continue
            for r, v in enumerate(values, start=1):
                rows.append([cls, r, v])
        write("pairwise_difference.csv", ["pair_class", "round", "mean_abs_diff"], rows)

    if "roi" in data:
        write("roi.csv", ["topology", "roi"], sorted(data["roi"].items()))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="netgoods-analyze",
        description="Build a machine-readable statistics report from session logs.",
    )
    parser.add_argument("--logs", required=True, help="directory of .jsonl session logs")
    parser.add_argument("--report", required=True, help="output report JSON path")
    parser.add_argument("--figures", help="directory for plot-ready CSV files")
    args = parser.parse_args(argv)

    log_dir = Path(args.logs)
    paths = sorted(log_dir.glob("*.jsonl"))
    if not paths:
        parser.error(f"no .jsonl logs under {log_dir}")
    sessions = load_sessions(paths)
    report = build_report(sessions)
    Path(args.report).write_text(report.to_json())
    if args.figures:
        _write_figure_csvs(report, Path(args.figures))
    print(
        f"analyzed {len(sessions)} sessions "
        f"({report.data['sessions']['valid']} valid) -> {args.report}"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
