"""Bond percolation on the n x n box and resistance on its largest cluster."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .electrical import GroundedSolver, level_order, solve_voltages
from .graph import Graph, GraphError, VertexSet, double_sweep, grid2d
from .isoperimetry import ball_profile, prefix_boundaries
from .report import Report


@dataclass(frozen=True)
class PercConfig:
    n: int
    p: float = 0.7
    seed: int = 0
    trials: int = 20
    pair_budget: int = 32

    def __post_init__(self):
        if self.n < 2:
            raise GraphError(f"box side must be >= 2, got {self.n}")
        if not (0.0 < self.p <= 1.0):
            raise GraphError(f"retention probability must lie in (0, 1], got {self.p}")
        if self.trials < 1 or self.pair_budget < 0:
            raise GraphError("trials must be positive and pair_budget nonnegative")


class DisjointSet:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=key)))


def percolate(n: int, p: float, seed: int, trial: int = 0) -> Graph:
    """Keep each edge of ``grid2d(n)`` independently with probability ``p``.

    The uniforms depend only on ``(seed, n, trial)``, so configurations at
    different ``p`` are coupled monotonically.
    """
    box = grid2d(n)
    u = _stream(seed, n, trial, 0).random(len(box.edges))
    kept = [e for e, x in zip(box.edges, u) if x < p]
    return Graph(n * n, kept)


def giant_component(G: Graph) -> VertexSet:
    """Largest cluster by union-find; ties go to the cluster with the smallest vertex."""
    dsu = DisjointSet(G.vertex_count)
    for a, b, _ in G.edges:
        dsu.union(a, b)
    best_root, best_size = None, 0
    for v in range(G.vertex_count):
        r = dsu.find(v)
        if dsu.size[r] > best_size:
            best_root, best_size = r, dsu.size[r]
    if best_root is None:
        return VertexSet(G, ())
    return VertexSet(G, tuple(v for v in range(G.vertex_count) if dsu.find(v) == best_root))


def cluster_resistance_sample(
    cluster: Graph, rng: np.random.Generator, pair_budget: int
) -> tuple[float, tuple[int, int], int]:
    """Largest resistance over the double-sweep pair and ``pair_budget`` random pairs."""
    N = cluster.vertex_count
    solver = GroundedSolver(cluster, range(N))
    a, b, _ = double_sweep(cluster)
    pairs = [(min(a, b), max(a, b))]
    for _ in range(pair_budget):
        x, y = (int(z) for z in rng.choice(N, size=2, replace=False))
        pairs.append((min(x, y), max(x, y)))
    best, best_pair = -1.0, pairs[0]
    for x, y in pairs:
        r = solver.resistance(x, y)
        if r > best:
            best, best_pair = r, (x, y)
    return best, best_pair, len(pairs)


def percolation_resistance(
    n_list: list[int], p: float = 0.7, seed: int = 0, trials: int = 20, pair_budget: int = 32
) -> Report:
    """Sampled maximal resistance on the largest cluster, per box size and trial.

    The sampled maximum is a lower bound on the true maximum over all pairs.
    """
    t0 = time.perf_counter()
    records = []
    per_n = {}
    for n in n_list:
        cfg = PercConfig(n, p, seed, trials, pair_budget)
        log_n = math.log2(n)
        stats = []
        skipped = 0
        for trial in range(cfg.trials):
            G = percolate(n, p, seed, trial)
            giant = giant_component(G)
            rec = {"n": n, "trial": trial, "giant_size": giant.size}
            if giant.size < 2:
                skipped += 1
                records.append({**rec, "skipped": True})
                continue
            cluster, labels = G.induced_subgraph(giant.members)
            r, (x, y), npairs = cluster_resistance_sample(cluster, _stream(seed, n, trial, 1), pair_budget)
            stats.append(r / log_n)
            records.append({
                **rec,
                "skipped": False,
                "R_hat": r,
                "R_hat_over_log2n": r / log_n,
                "pair": [labels[x], labels[y]],
                "pairs_sampled": npairs,
            })
        per_n[str(n)] = {
            "max_R_over_log2n": max(stats) if stats else None,
            "mean_R_over_log2n": float(np.mean(stats)) if stats else None,
            "max_R_hat": max(s * log_n for s in stats) if stats else None,
            "trials_used": len(stats),
            "trials_skipped": skipped,
        }
    first, last = str(n_list[0]), str(n_list[-1])
    growth = None
    if per_n[first]["max_R_over_log2n"] and per_n[last]["max_R_over_log2n"] is not None:
        growth = per_n[last]["max_R_over_log2n"] / per_n[first]["max_R_over_log2n"]
    results = {
        "regime": "supercritical" if p > 0.5 else "exploratory",
        "per_n": per_n,
        "growth_ratio_last_over_first": growth,
        "max_R_hat_over_log2n_overall": max(
            (r["R_hat_over_log2n"] for r in records if not r["skipped"]), default=None
        ),
        "lower_bound": True,
    }
    config = {"n_list": list(n_list), "p": p, "seed": seed, "trials": trials, "pair_budget": pair_budget}
    return Report("percolation", config, results, records, time.perf_counter() - t0)


def percolation_boundary_probe(
    n: int,
    p: float = 0.7,
    seed: int = 0,
    trial: int = 0,
    size_floor: int | None = None,
    floor_constant: float = 7.0,
    centers: int = 8,
) -> Report:
    """Smallest ``|dS| / |S|^(1/2)`` over sampled connected ``S`` in the largest cluster.

    Candidates are breadth-first balls around random centers and the low-voltage
    level sets of one battery solve; only sets with
    ``size_floor <= |S| <= |cluster|/2`` count.  Boundaries are taken inside the cluster.  The
    result is an upper bound on the true minimum and is reported, not judged.
    """
    t0 = time.perf_counter()
    if size_floor is None:
        size_floor = math.ceil(floor_constant * math.log2(n))
    G = percolate(n, p, seed, trial)
    giant = giant_component(G)
    cluster, labels = G.induced_subgraph(giant.members)
    N = cluster.vertex_count
    rng = _stream(seed, n, trial, 2)
    best = {"ratio": math.inf, "size": None, "boundary": None, "kind": None}
    examined = 0

    def consider(size: int, boundary: int, kind: str) -> None:
        nonlocal examined
        if size < size_floor or size > N // 2:
            return
        examined += 1
        ratio = boundary / math.sqrt(size)
        if ratio < best["ratio"]:
            best.update(ratio=ratio, size=size, boundary=boundary, kind=kind)

    if N >= 2:
        for c in rng.choice(N, size=min(centers, N), replace=False):
            for _, size, boundary in ball_profile(cluster, int(c)):
                consider(size, boundary, "ball")
        x, y = (int(z) for z in rng.choice(N, size=2, replace=False))
        profile = solve_voltages(cluster, x, y, method="direct")
        order = level_order(profile, cluster)
        stop = order.anomalies[0] if order.anomalies else len(order.order)
        for m, b in enumerate(prefix_boundaries(cluster, order.order[:stop]), start=1):
            consider(m, int(b), "level_set")
    results = {
        "giant_size": N,
        "size_floor": size_floor,
        "sets_examined": examined,
        "min_boundary_over_sqrt_size": best["ratio"],
        "argmin": {k: v for k, v in best.items() if k != "ratio"},
        "heuristic_upper_bound": True,
    }
    config = {"n": n, "p": p, "seed": seed, "trial": trial, "size_floor": size_floor, "centers": centers}
    return Report("perc-boundary", config, results, [], time.perf_counter() - t0)

