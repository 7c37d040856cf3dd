"""Experiment network construction, structural metrics and seed placement.

The five 24-node designs are all degree-5 regular and derive from a base
layout of four 6-cliques by degree-preserving edge swaps; the calibration
design uses independent 4-cliques (degree 3). Graphs carry a group label
per node (the clique a node originated from), which later analysis uses
even on topologies where the groups have no structural meaning.

Graph file format (one graph per file):

    n k name
    u v            <- one line per edge, 0-indexed
    ...
    groups
    node group     <- one line per node
    ...

Seed placement file format:

    arrangement behavior
    node           <- one line per seed node
    ...
"""

from __future__ import annotations

import itertools
import math
import random
from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

CLIQUES = "Cliques"
PAIRED_CLIQUES = "PairedCliques"
CYCLE = "Cycle"
SMALL_WORLD = "SmallWorld"
RANDOM_REGULAR = "RandomRegular"
CALIBRATION_CLIQUE = "CalibrationClique"

TOPOLOGY_NAMES = (CLIQUES, PAIRED_CLIQUES, CYCLE, SMALL_WORLD, RANDOM_REGULAR)

COVER = "cover"
CONCENTRATED = "concentrated"

FULL_CONTRIBUTE = 10
ZERO_CONTRIBUTE = 0

Edge = tuple[int, int]

_SWAP_ATTEMPT_LIMIT = 10_000


class TopologyError(Exception):
    """Base error for graph construction and placement."""


class SwapCollision(TopologyError):
    """Edge swap would duplicate an edge or reuse an endpoint."""


class GenerationFailure(TopologyError):
    """Random generator exhausted its retry budget."""


class NoValidPlacement(TopologyError):
    """No seed arrangement satisfies the placement constraints."""


def _norm_edge(u: int, v: int) -> Edge:
    if u == v:
        raise TopologyError(f"self-loop at node {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Network:
    """Undirected degree-regular graph with per-node group labels."""

    name: str
    n: int
    k: int
    edges: frozenset[Edge]
    groups: tuple[int, ...]
    _adj: dict[int, frozenset[int]] = field(
        init=False, repr=False, compare=False, hash=False, default=None
    )

    def __post_init__(self):
        adj: dict[int, set[int]] = {v: set() for v in range(self.n)}
        for a, b in self.edges:
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise TopologyError(f"edge ({a},{b}) outside node range")
            adj[a].add(b)
            adj[b].add(a)
        object.__setattr__(
            self, "_adj", {v: frozenset(nbrs) for v, nbrs in adj.items()}
        )

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    @property
    def nodes(self) -> range:
        return range(self.n)

    def group_members(self, g: int) -> list[int]:
        return [v for v in self.nodes if self.groups[v] == g]

    @property
    def num_groups(self) -> int:
        return len(set(self.groups))

    def validate(self) -> None:
        """Check degree regularity and the block structure of groups."""
        for v in self.nodes:
            if self.degree(v) != self.k:
                raise TopologyError(f"node {v} has degree {self.degree(v)} != k={self.k}")
        if self.n % (self.k + 1) == 0:
            sizes = [len(self.group_members(g)) for g in sorted(set(self.groups))]
            if sizes != [self.k + 1] * (self.n // (self.k + 1)):
                raise TopologyError(f"groups are not {self.k + 1}-sized blocks: {sizes}")


@dataclass(frozen=True)
class SeedPlacement:
    """Positions played by automated seed players and their fixed behavior."""

    seeds: frozenset[int]
    arrangement: str  # COVER or CONCENTRATED
    behavior: int = FULL_CONTRIBUTE  # contribution forced every round

    def humans(self, net: Network) -> list[int]:
        return [v for v in net.nodes if v not in self.seeds]


@dataclass(frozen=True)
class TopologyMetrics:
    clustering: float
    avg_path_length: float
    diameter: float  # math.inf when the graph is disconnected


# ---------------------------------------------------------------------------
# constructions


def _block_groups(n: int, block: int) -> tuple[int, ...]:
    if n % block == 0:
        return tuple(v // block for v in range(n))
    return tuple(0 for _ in range(n))


def build_cliques(num_cliques: int, clique_size: int) -> Network:
    """Disjoint complete graphs; groups coincide with the cliques."""
    if clique_size < 2:
        raise TopologyError("clique_size must be at least 2")
    n = num_cliques * clique_size
    edges = set()
    for c in range(num_cliques):
        base = c * clique_size
        for a, b in itertools.combinations(range(base, base + clique_size), 2):
            edges.add((a, b))
    name = CLIQUES if (num_cliques, clique_size) == (4, 6) else CALIBRATION_CLIQUE
    return Network(
        name=name,
        n=n,
        k=clique_size - 1,
        edges=frozenset(edges),
        groups=_block_groups(n, clique_size),
    )


def swap_edge_pair(net: Network, e1: Edge, e2: Edge) -> Network:
    """Replace edges (a,b),(c,d) with (a,c),(b,d), preserving all degrees."""
    a, b = e1
    c, d = e2
    e1 = _norm_edge(a, b)
    e2 = _norm_edge(c, d)
    if e1 not in net.edges or e2 not in net.edges:
        raise SwapCollision(f"edges {e1} and {e2} must both be present")
    if {a, b} & {c, d}:
        raise SwapCollision(f"edges {e1} and {e2} share an endpoint")
    n1 = _norm_edge(a, c)
    n2 = _norm_edge(b, d)
    if n1 in net.edges or n2 in net.edges:
        raise SwapCollision(f"replacement edge {n1 if n1 in net.edges else n2} already present")
    edges = set(net.edges)
    edges.discard(e1)
    edges.discard(e2)
    edges.add(n1)
    edges.add(n2)
    return Network(name=net.name, n=net.n, k=net.k, edges=frozenset(edges), groups=net.groups)


def build_paired_cliques() -> Network:
    """Two 12-node components: one partner swap joins each pair of 6-cliques."""
    net = build_cliques(4, 6)
    net = swap_edge_pair(net, (0, 1), (6, 7))
    net = swap_edge_pair(net, (12, 13), (18, 19))
    return Network(
        name=PAIRED_CLIQUES, n=net.n, k=net.k, edges=net.edges, groups=net.groups
    )


def build_cycle_of_cliques() -> Network:
    """Connected ring of near-cliques: one swap between clique i and i+1 (mod 4)."""
    net = build_cliques(4, 6)
    for i in range(4):
        j = (i + 1) % 4
        net = swap_edge_pair(net, (6 * i + 2, 6 * i + 3), (6 * j + 0, 6 * j + 1))
    return Network(name=CYCLE, n=net.n, k=net.k, edges=net.edges, groups=net.groups)


def _random_swap(net: Network, rng: random.Random) -> Network:
    e1, e2 = rng.sample(sorted(net.edges), 2)
    if rng.random() < 0.5:  # orientation decides which endpoints pair up
        e2 = (e2[1], e2[0])
    return swap_edge_pair(net, e1, e2)


def build_small_world(rng_seed: int) -> Network:
    """Apply four random valid partner swaps to the cycle of near-cliques."""
    rng = random.Random(rng_seed)
    net = build_cycle_of_cliques()
    done = 0
    attempts = 0
    while done < 4:
        attempts += 1
        if attempts > _SWAP_ATTEMPT_LIMIT:
            raise GenerationFailure("could not find four valid edge swaps")
        try:
            net = _random_swap(net, rng)
        except SwapCollision:
            continue
        done += 1
    return Network(
        name=SMALL_WORLD, n=net.n, k=net.k, edges=net.edges, groups=net.groups
    )


def build_random_regular(n: int, k: int, rng_seed: int) -> Network:
    """k-regular simple graph via the pairing model, rejecting bad matchings."""
    if n * k % 2 != 0:
        raise TopologyError("n*k must be even")
    if k >= n:
        raise TopologyError("k must be smaller than n")
    rng = random.Random(rng_seed)
    for _ in range(_SWAP_ATTEMPT_LIMIT):
        stubs = [v for v in range(n) for _ in range(k)]
        rng.shuffle(stubs)
        edges: set[Edge] = set()
        ok = True
        for i in range(0, len(stubs), 2):
            a, b = stubs[i], stubs[i + 1]
            if a == b or _norm_edge(a, b) in edges:
                ok = False
                break
            edges.add(_norm_edge(a, b))
        if ok:
            return Network(
                name=RANDOM_REGULAR,
                n=n,
                k=k,
                edges=frozenset(edges),
                groups=_block_groups(n, k + 1),
            )
    raise GenerationFailure("pairing model kept producing self-loops or duplicates")


# ---------------------------------------------------------------------------
# metrics


def local_clustering(net: Network) -> dict[int, float | None]:
    """Per-node triangle fraction; None flags degenerate nodes (degree < 2)."""
    out: dict[int, float | None] = {}
    for v in net.nodes:
        nbrs = sorted(net.neighbors(v))
        kv = len(nbrs)
        if kv < 2:
            out[v] = None
            continue
        triangles = sum(
            1 for a, b in itertools.combinations(nbrs, 2) if b in net.neighbors(a)
        )
        out[v] = 2.0 * triangles / (kv * (kv - 1))
    return out


def clustering_coefficient(net: Network) -> float:
    """Average local triangle fraction over non-degenerate nodes."""
    per_node = [c for c in local_clustering(net).values() if c is not None]
    if not per_node:
        raise TopologyError("no node has degree >= 2")
    return sum(per_node) / len(per_node)


def bfs_distances(net: Network, source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in net.neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def avg_path_length(net: Network) -> float:
    """Mean hop distance over node pairs within the same component."""
    total = 0
    count = 0
    for i in net.nodes:
        for j, d in bfs_distances(net, i).items():
            if j > i:
                total += d
                count += 1
    if count == 0:
        raise TopologyError("no connected pair of nodes")
    return total / count


def diameter(net: Network) -> float:
    """Largest hop distance; infinite when the graph is disconnected."""
    best = 0
    for i in net.nodes:
        dist = bfs_distances(net, i)
        if len(dist) < net.n:
            return math.inf
        best = max(best, max(dist.values()))
    return float(best)


def metrics(net: Network) -> TopologyMetrics:
    return TopologyMetrics(
        clustering=clustering_coefficient(net),
        avg_path_length=avg_path_length(net),
        diameter=diameter(net),
    )


def is_connected(net: Network) -> bool:
    return len(bfs_distances(net, 0)) == net.n


# ---------------------------------------------------------------------------
# seed placement


def _seed_adjacency_counts(net: Network, seeds: frozenset[int]) -> dict[int, int]:
    return {
        v: sum(1 for s in seeds if s in net.neighbors(v))
        for v in net.nodes
        if v not in seeds
    }


def _one_per_group_candidates(net: Network):
    per_group = [net.group_members(g) for g in sorted(set(net.groups))]
    for combo in itertools.product(*per_group):
        yield frozenset(combo)


def _cover_split(net: Network, seeds: frozenset[int]) -> tuple[int, int, int]:
    counts = _seed_adjacency_counts(net, seeds)
    twos = sum(1 for c in counts.values() if c == 2)
    zeros = sum(1 for c in counts.values() if c == 0)
    ones = sum(1 for c in counts.values() if c == 1)
    return twos, zeros, ones


def _find_cover(net: Network) -> frozenset[int]:
    humans = net.n - net.num_groups
    perfect = None
    near = None  # the 2-covered/2-uncovered split seen on random regular graphs
    for seeds in _one_per_group_candidates(net):
        twos, zeros, ones = _cover_split(net, seeds)
        if ones == humans and perfect is None:
            perfect = seeds
            break  # candidates are enumerated in canonical order
        if (twos, zeros, ones) == (2, 2, humans - 4) and near is None:
            near = seeds
    if perfect is not None:
        return perfect
    if net.name == RANDOM_REGULAR and near is not None:
        return near
    raise NoValidPlacement(f"no covering seed arrangement on {net.name}")


def _concentrated_candidates(net: Network):
    elist = sorted(net.edges)
    for (a, b), (c, d) in itertools.combinations(elist, 2):
        quad = frozenset((a, b, c, d))
        if len(quad) < 4:
            continue
        induced = sum(
            1
            for u, v in itertools.combinations(sorted(quad), 2)
            if v in net.neighbors(u)
        )
        if induced == 2:  # exactly the two pair edges, nothing else
            yield quad


def _find_concentrated(net: Network) -> frozenset[int]:
    """Two disjoint adjacent seed pairs, preferring overlap with the cover seeds
    and a nonempty two-hop class."""
    try:
        cover_seeds = _find_cover(net)
    except NoValidPlacement:
        cover_seeds = frozenset()
    best: tuple[int, int, tuple[int, ...]] | None = None
    best_seeds = None
    for quad in _concentrated_candidates(net):
        overlap = len(quad & cover_seeds)
        dist = seed_distance_classes(
            net, SeedPlacement(seeds=quad, arrangement=CONCENTRATED)
        )
        has_two_hop = any(d == 2 for _, d in dist.values())
        key = (-overlap, -int(has_two_hop), tuple(sorted(quad)))
        if best is None or key < best:
            best = key
            best_seeds = quad
    if best_seeds is None:
        raise NoValidPlacement(f"no pair of disjoint adjacent seed pairs on {net.name}")
    return best_seeds


def place_seeds(
    net: Network,
    arrangement: str,
    behavior: int = FULL_CONTRIBUTE,
    rng_seed: int | None = None,
) -> SeedPlacement:
    """Choose the four seed positions for the given arrangement.

    The search is deterministic (canonical enumeration order), so repeated
    calls on the same graph always return the same placement; rng_seed is
    accepted for interface symmetry with the graph generators.
    """
    del rng_seed
    if arrangement == COVER:
        seeds = _find_cover(net)
    elif arrangement == CONCENTRATED:
        if net.name in (CLIQUES, CALIBRATION_CLIQUE):
            raise NoValidPlacement("adjacent seed pairs cannot be placed on disjoint cliques")
        seeds = _find_concentrated(net)
    else:
        raise TopologyError(f"unknown arrangement {arrangement!r}")
    return SeedPlacement(seeds=seeds, arrangement=arrangement, behavior=behavior)


def seed_distance_classes(
    net: Network, placement: SeedPlacement
) -> dict[int, tuple[int, float]]:
    """Per non-seed node: (number of adjacent seeds, min hop distance to a seed)."""
    adjacency = _seed_adjacency_counts(net, placement.seeds)
    dist: dict[int, float] = {v: math.inf for v in net.nodes}
    queue = deque()
    for s in placement.seeds:
        dist[s] = 0
        queue.append(s)
    while queue:
        u = queue.popleft()
        for v in net.neighbors(u):
            if dist[v] == math.inf:
                dist[v] = dist[u] + 1
                queue.append(v)
    return {v: (adjacency[v], dist[v]) for v in net.nodes if v not in placement.seeds}


# ---------------------------------------------------------------------------
# file formats and canonical instances


def save_network(net: Network, path: str | Path) -> None:
    lines = [f"{net.n} {net.k} {net.name}"]
    lines += [f"{a} {b}" for a, b in sorted(net.edges)]
    lines.append("groups")
    lines += [f"{v} {net.groups[v]}" for v in net.nodes]
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_network(text: str) -> Network:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    n_str, k_str, name = lines[0].split()
    n, k = int(n_str), int(k_str)
    edges = set()
    groups = [0] * n
    section = "edges"
    for ln in lines[1:]:
        if ln == "groups":
            section = "groups"
            continue
        a, b = ln.split()
        if section == "edges":
            edges.add(_norm_edge(int(a), int(b)))
        else:
            groups[int(a)] = int(b)
    return Network(name=name, n=n, k=k, edges=frozenset(edges), groups=tuple(groups))


def load_network(path: str | Path) -> Network:
    return _parse_network(Path(path).read_text())


def save_placement(placement: SeedPlacement, path: str | Path) -> None:
    lines = [f"{placement.arrangement} {placement.behavior}"]
    lines += [str(s) for s in sorted(placement.seeds)]
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_placement(text: str) -> SeedPlacement:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    arrangement, behavior = lines[0].split()
    seeds = frozenset(int(ln) for ln in lines[1:])
    return SeedPlacement(seeds=seeds, arrangement=arrangement, behavior=int(behavior))


def load_placement(path: str | Path) -> SeedPlacement:
    return _parse_placement(Path(path).read_text())


_CANONICAL_FILES = {
    CLIQUES: "cliques",
    PAIRED_CLIQUES: "paired_cliques",
    CYCLE: "cycle",
    SMALL_WORLD: "small_world",
    RANDOM_REGULAR: "random_regular",
}


def _data_text(filename: str) -> str:
    return (
        resources.files("netgoods").joinpath("data/topologies").joinpath(filename)
    ).read_text()


def canonical_network(name: str) -> Network:
    """Load one of the five shipped 24-node instances."""
    if name not in _CANONICAL_FILES:
        raise TopologyError(f"no canonical instance named {name!r}")
    return _parse_network(_data_text(f"{_CANONICAL_FILES[name]}.graph"))


def canonical_placement(
    name: str, arrangement: str, behavior: int = FULL_CONTRIBUTE
) -> SeedPlacement:
    """Load the shipped seed placement for a canonical instance."""
    if name not in _CANONICAL_FILES:
        raise TopologyError(f"no canonical instance named {name!r}")
    placement = _parse_placement(
        _data_text(f"{_CANONICAL_FILES[name]}.{arrangement}.seeds")
    )
    if placement.behavior != behavior:
        placement = SeedPlacement(
            seeds=placement.seeds, arrangement=placement.arrangement, behavior=behavior
        )
    return placement
