"""Continuous-time random walk where each unit edge rings at rate 1.

From ``x`` the walk leaves after an exponential time of rate ``deg_w(x)``
(the multiplicity-weighted degree) and jumps to ``y`` with probability
``m(x, y) / deg_w(x)``; this is the same law as racing independent
exponential clocks on the parallel edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .electrical import DEFAULT_TOLERANCE, effective_resistance, solve_dirichlet
from .graph import Graph, GraphError, bfs_distances, double_sweep

EXACT_TAU_CUTOFF = 300
BLOCK = 1024


@dataclass(frozen=True)
class HittingTimes:
    """Expected times to hit ``target``; ``inf`` off its component."""

    target: int
    values: np.ndarray = field(repr=False)
    residual: float


def exact_hitting(G: Graph, u: int, tolerance: float = DEFAULT_TOLERANCE, method: str = "auto") -> HittingTimes:
    """Solve ``deg_w(v) h(v) - sum_x m(v,x) h(x) = 1`` off ``u`` with ``h(u) = 0``."""
    comp = G.component_of(u)
    values, residual = solve_dirichlet(G, comp, {u: 0.0}, 1.0, tolerance, method)
    mask = np.ones(G.vertex_count, dtype=bool)
    mask[list(comp)] = False
    values[mask] = math.inf
    return HittingTimes(u, values, residual)


def commute_time(G: Graph, v: int, u: int, tolerance: float = DEFAULT_TOLERANCE) -> float:
    """``E_v T_u + E_u T_v``; ``inf`` across components."""
    G.check_vertex(v)
    G.check_vertex(u)
    if v == u:
        raise GraphError("commute time needs two distinct vertices")
    if not G.same_component(v, u):
        return math.inf
    return float(exact_hitting(G, u, tolerance).values[v] + exact_hitting(G, v, tolerance).values[u])


def discrete_commute_time(G: Graph, v: int, u: int, tolerance: float = DEFAULT_TOLERANCE) -> float:
    """Commute time of the discrete-time walk, ``2 * (total multiplicity) * R``.

    Textbook identity for the jump chain, kept as an auxiliary cross-check.
    """
    comp = set(G.component_of(v))
    total = sum(m for a, _, m in G.edges if a in comp)
    return 2.0 * total * effective_resistance(G, v, u, tolerance)


@dataclass(frozen=True)
class TauStar:
    value: float
    pair: tuple[int, int]
    exact: bool
    pairs_examined: int

    @property
    def flag(self) -> str:
        return "exact" if self.exact else "sampled lower bound"


def tau_star(
    G: Graph, tolerance: float = DEFAULT_TOLERANCE, pair_budget: int = 32, seed: int = 0
) -> TauStar:
    """Largest commute time over vertex pairs.

    Exact (one hitting solve per target) up to ``EXACT_TAU_CUTOFF`` vertices.
    Above it, the maximum over the double-sweep pair, the farthest BFS layer of
    each of its endpoints (at most ``pair_budget`` vertices each) and
    ``pair_budget`` seeded random pairs, which is a lower bound.
    """
    if not G.is_connected():
        raise GraphError("tau_star needs a connected graph")
    N = G.vertex_count
    if N < 2:
        raise GraphError("tau_star needs at least two vertices")
    if N <= EXACT_TAU_CUTOFF:
        H = np.empty((N, N))
        for t in range(N):
            H[:, t] = exact_hitting(G, t, tolerance).values
        C = H + H.T
        i, j = np.unravel_index(int(np.argmax(C)), C.shape)
        a, b = sorted((int(i), int(j)))
        return TauStar(float(C[a, b]), (a, b), True, N * (N - 1) // 2)

    a, b, _ = double_sweep(G)
    pairs = {(min(a, b), max(a, b))}
    for end in (a, b):
        dist = bfs_distances(G, end)
        far = np.flatnonzero(dist == dist.max())[:pair_budget]
        pairs.update((min(end, int(x)), max(end, int(x))) for x in far if int(x) != end)
    rng = np.random.default_rng([seed, N])
    for _ in range(pair_budget):
        x, y = (int(z) for z in rng.choice(N, size=2, replace=False))
        pairs.add((min(x, y), max(x, y)))
    cache: dict[int, np.ndarray] = {}

    def hit(t: int) -> np.ndarray:
        if t not in cache:
            cache[t] = exact_hitting(G, t, tolerance).values
        return cache[t]

    best, best_pair = -1.0, None
    for x, y in sorted(pairs):
        c = float(hit(y)[x] + hit(x)[y])
        if c > best:
            best, best_pair = c, (x, y)
    return TauStar(best, best_pair, False, len(pairs))


@dataclass(frozen=True)
class SimulationResult:
    mean: float
    stderr: float
    trials: int
    seed: int
    samples: np.ndarray = field(repr=False)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(block,))))


def _simulate_block(G: Graph, v: int, u: int, rng: np.random.Generator, size: int, max_steps: int) -> np.ndarray:
    C = G.conductance
    indptr, indices = C.indptr, C.indices
    cw = np.cumsum(C.data)
    base = np.concatenate([[0.0], cw])[indptr[:-1]]
    deg = G.weighted_degree
    pos = np.full(size, v, dtype=np.int64)
    times = np.zeros(size)
    active = np.flatnonzero(pos != u)
    steps = 0
    while active.size:
        steps += 1
        if steps > max_steps:
            raise RuntimeError(f"walk did not hit {u} within {max_steps} steps")
        x = pos[active]
        d = deg[x]
        times[active] += rng.standard_exponential(active.size) / d
        target = base[x] + rng.random(active.size) * d
        k = np.searchsorted(cw, target, side="right")
        k = np.minimum(k, indptr[x + 1] - 1)
        pos[active] = indices[k]
        active = active[pos[active] != u]
    return times


def simulate_hitting(G: Graph, v: int, u: int, seed: int, trials: int, max_steps: int = 10_000_000) -> SimulationResult:
    """Monte Carlo estimate of ``E_v T_u``.

    Trials run in blocks of ``BLOCK`` walkers, block ``k`` drawing from the
    stream keyed by ``(seed, k)``; blocks are always simulated in full and
    truncated, so raising ``trials`` never changes earlier samples.
    """
    G.check_vertex(v)
    G.check_vertex(u)
    if trials < 1:
        raise GraphError("need at least one trial")
    if not G.same_component(v, u):
        raise GraphError(f"{u} is unreachable from {v}; hitting time is infinite")
    blocks = []
    for k in range(-(-trials // BLOCK)):
        blocks.append(_simulate_block(G, v, u, _block_rng(seed, k), BLOCK, max_steps))
    samples = np.concatenate(blocks)[:trials]
    mean = float(np.mean(samples))
    stderr = float(np.std(samples, ddof=1) / math.sqrt(trials)) if trials > 1 else math.inf
    return SimulationResult(mean, stderr, trials, seed, samples)
