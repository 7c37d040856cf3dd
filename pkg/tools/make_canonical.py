"""Generate the committed canonical topology instances and placements.

The three deterministic designs are rebuilt directly. The two random
designs are found by scanning generator seeds until an instance matches
the reference structural metrics and admits the required seed
arrangements; the winning adjacency lists are frozen as data files so
the shipped instances never depend on generator internals again.

Run from the repository root:  python tools/make_canonical.py
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from netgoods import topology as tp

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "netgoods" / "data" / "topologies"

# reference cells: clustering, avg path length, diameter
TARGETS = {
    tp.SMALL_WORLD: (0.41, 2.23, 4.0),
    tp.RANDOM_REGULAR: (0.09, 2.01, 3.0),
}
METRIC_TOL = 0.01


def _within(net: tp.Network, name: str) -> bool:
    c_ref, l_ref, d_ref = TARGETS[name]
    m = tp.metrics(net)
    return (
        abs(m.clustering - c_ref) <= METRIC_TOL
        and abs(m.avg_path_length - l_ref) <= METRIC_TOL
        and m.diameter == d_ref
    )


def _has_perfect_cover(net: tp.Network) -> bool:
    try:
        placement = tp.place_seeds(net, tp.COVER)
    except tp.NoValidPlacement:
        return False
    counts = [c for c, _ in tp.seed_distance_classes(net, placement).values()]
    return all(c == 1 for c in counts)


def _concentrated_ok(net: tp.Network, cover: tp.SeedPlacement) -> bool:
    try:
        conc = tp.place_seeds(net, tp.CONCENTRATED)
    except tp.NoValidPlacement:
        return False
    classes = tp.seed_distance_classes(net, conc)
    two_hop = any(d == 2 for _, d in classes.values())
    return two_hop and len(conc.seeds & cover.seeds) == 2


def find_small_world() -> tuple[int, tp.Network]:
    for seed in range(100_000):
        net = tp.build_small_world(seed)
        if not _within(net, tp.SMALL_WORLD):
            continue
        if not _has_perfect_cover(net):
            continue
        if not _concentrated_ok(net, tp.place_seeds(net, tp.COVER)):
            continue
        return seed, net
    raise RuntimeError("no small-world instance found")


def find_random_regular() -> tuple[int, tp.Network]:
    for seed in range(100_000):
        net = tp.build_random_regular(24, 5, seed)
        if not tp.is_connected(net):
            continue
        if not _within(net, tp.RANDOM_REGULAR):
            continue
        if _has_perfect_cover(net):
            continue  # want the published near-cover situation (2/2/20 split)
        try:
            cover = tp.place_seeds(net, tp.COVER)
        except tp.NoValidPlacement:
            continue
        if not _concentrated_ok(net, cover):
            continue
        return seed, net
    raise RuntimeError("no random regular instance found")


def emit(net: tp.Network, stem: str, concentrated: bool = True) -> None:
    tp.save_network(net, DATA_DIR / f"{stem}.graph")
    cover = tp.place_seeds(net, tp.COVER)
    tp.save_placement(cover, DATA_DIR / f"{stem}.cover.seeds")
    if concentrated:
        conc = tp.place_seeds(net, tp.CONCENTRATED)
        tp.save_placement(conc, DATA_DIR / f"{stem}.concentrated.seeds")
    m = tp.metrics(net)
    d = "inf" if math.isinf(m.diameter) else int(m.diameter)
    print(f"{stem}: C={m.clustering:.4f} L={m.avg_path_length:.4f} D={d} "
          f"cover={sorted(cover.seeds)}")


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    emit(tp.build_cliques(4, 6), "cliques", concentrated=False)
    emit(tp.build_paired_cliques(), "paired_cliques")
    emit(tp.build_cycle_of_cliques(), "cycle")

    sw_seed, sw = find_small_world()
    print(f"small world generator seed: {sw_seed}")
    emit(sw, "small_world")

    rr_seed, rr = find_random_regular()
    print(f"random regular generator seed: {rr_seed}")
    emit(rr, "random_regular")


if __name__ == "__main__":
    main()
