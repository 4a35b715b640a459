"""Dyadic-band isoperimetric sums bounding effective resistance.

For an anchor ``v`` and band index ``n`` the band holds the integer sizes
``|G| 2^-(n+1) < |A| <= |G| 2^-n``.  Over connected sets ``A`` containing
``v`` with size in the band we maximize ``|A|/|dA|^2 + 1/|dA|`` (``dA`` the
external vertex boundary); ``L_v`` sums these maxima for
``n = 1 .. floor(log2 |G|)``.

Exact mode enumerates connected sets with branch-and-bound and is gated to
small graphs.  Heuristic mode only evaluates candidate sets (voltage level
sets, breadth-first balls, local search), so it bounds the maximum from below
and band minima of the boundary from above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

import numpy as np

from .electrical import level_order, solve_voltages
from .graph import Graph, GraphError, VertexSet, bfs_distances, bfs_order, is_connected_subset

EXACT_GATE = 18
LOCAL_SEARCH_MAX_SIZE = 64

EXACT = "exact"
HEURISTIC = "heuristic"


class GateError(GraphError):
    """Exact enumeration refused on a graph above the size gate."""


def check_gate(G: Graph, override: bool = False) -> None:
    if G.vertex_count > EXACT_GATE and not override:
        raise GateError(
            f"exact mode is limited to {EXACT_GATE} vertices (graph has {G.vertex_count}); use heuristic mode"
        )


def band_count(N: int) -> int:
    """``floor(log2 N)`` in integer arithmetic (0 for ``N <= 1``)."""
    return max(N.bit_length() - 1, 0)


def band_range(N: int, n: int, modified: bool = False) -> tuple[int, int]:
    """Inclusive integer size range of band ``n``; ``lo > hi`` means the band is empty.

    ``modified`` lowers the upper endpoint to ``|G| 2^-n - 1``.
    """
    lo = N // (1 << (n + 1)) + 1
    hi = N // (1 << n)
    if modified:
        hi -= 1
    return lo, hi


def term_value(size: int, boundary: int, reciprocal: bool = True) -> float:
    if boundary == 0:
        return math.inf
    t = size / boundary**2
    return t + 1.0 / boundary if reciprocal else t


@dataclass(frozen=True)
class BandTerm:
    n: int
    band: tuple[int, int]
    best_set: VertexSet | None
    boundary: int | None
    term: float
    mode: str
    empty: bool = False

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "band": list(self.band),
            "set": list(self.best_set.members) if self.best_set is not None else None,
            "boundary": self.boundary,
            "term": self.term,
            "empty": self.empty,
        }


@dataclass(frozen=True)
class IsoBound:
    v: int
    terms: tuple[BandTerm, ...]
    total: float
    mode: str
    modified: bool = False

    def to_dict(self) -> dict:
        return {
            "v": self.v,
            "terms": [t.to_dict() for t in self.terms],
            "total": self.total,
            "mode": self.mode,
            "modified": self.modified,
        }


# ---------------------------------------------------------------------------
# exact enumeration


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _search(
    G: Graph,
    v: int,
    lo: int,
    hi: int,
    visit: Callable[[int, int, int], None],
    prune: Callable[[int, int, int, int], bool] | None = None,
) -> None:
    """Depth-first walk over connected sets containing ``v`` of size ``<= hi``.

    Each set is reached exactly once: at every node a frontier vertex is either
    added (branch) or forbidden for the rest of the siblings.  ``visit(S, size,
    N)`` is called for sets with ``size >= lo``; ``N`` is the union of the
    members' neighborhoods.  ``prune(S, size, N, forb)`` cuts a subtree.
    """
    nbr = G.neighbor_masks
    v = int(v)

    def rec(S: int, size: int, N: int, ext: int, forb: int) -> None:
        if size >= lo:
            visit(S, size, N)
        if size == hi or (prune is not None and prune(S, size, N, forb)):
            return
        while ext:
            low = ext & -ext
            ext ^= low
            w = low.bit_length() - 1
            S2 = S | low
            rec(S2, size + 1, N | nbr[w], ext | (nbr[w] & ~S2 & ~forb), forb)
            forb |= low

    start = 1 << v
    rec(start, 1, nbr[v], nbr[v], 0)


def enumerate_connected_sets(
    G: Graph, v: int, sizes: tuple[int, int] | Iterable[int], override: bool = False
) -> Iterator[VertexSet]:
    """Yield every connected vertex set containing ``v`` whose size is in ``sizes``.

    ``sizes`` is an inclusive ``(lo, hi)`` pair or an iterable of sizes.
    """
    check_gate(G, override)
    G.check_vertex(v)
    if isinstance(sizes, tuple) and len(sizes) == 2:
        wanted = set(range(sizes[0], sizes[1] + 1))
    else:
        wanted = set(sizes)
    wanted = {s for s in wanted if 1 <= s <= G.vertex_count}
    if not wanted:
        return
    found: list[int] = []
    _search(G, v, min(wanted), max(wanted), lambda S, size, N: found.append(S) if size in wanted else None)
    for S in found:
        yield VertexSet.from_mask(G, S)


def _exact_band_max(G: Graph, v: int, lo: int, hi: int, reciprocal: bool) -> tuple[int | None, int | None, float]:
    comp_size = len(G.component_of(v))
    best = [None, None, -1.0]

    def visit(S, size, N):
        b = _popcount(N & ~S)
        t = term_value(size, b, reciprocal)
        if t > best[2]:
            best[0], best[1], best[2] = S, b, t

    def prune(S, size, N, forb):
        if best[2] == math.inf:
            return True
        if best[0] is None:
            return False
        bd = N & ~S
        b = max(_popcount(bd & forb), _popcount(bd) - (hi - size), 1 if comp_size > hi else 0)
        return term_value(hi, b, reciprocal) <= best[2]

    _search(G, v, lo, hi, visit, prune)
    return best[0], best[1], best[2]


def _exact_band_min_boundary(G: Graph, v: int, lo: int, hi: int) -> tuple[int | None, int | None]:
    best = [None, None]

    def visit(S, size, N):
        b = _popcount(N & ~S)
        if best[1] is None or b < best[1]:
            best[0], best[1] = S, b

    def prune(S, size, N, forb):
        return best[1] is not None and _popcount(N & ~S & forb) >= best[1]

    _search(G, v, lo, hi, visit, prune)
    return best[0], best[1]


# ---------------------------------------------------------------------------
# heuristic candidates


def prefix_boundaries(G: Graph, order: Iterable[int]) -> np.ndarray:
    """External boundary size of every prefix of ``order`` (index ``k`` is the prefix of length ``k+1``)."""
    inside = np.zeros(G.vertex_count, dtype=bool)
    touched = np.zeros(G.vertex_count, dtype=np.int64)
    nbrs = G.neighbor_sets
    out = []
    b = 0
    for x in order:
        if touched[x] > 0:
            b -= 1
        inside[x] = True
        for y in nbrs[x]:
            if not inside[y]:
                if touched[y] == 0:
                    b += 1
                touched[y] += 1
        out.append(b)
    return np.array(out, dtype=np.int64)


@dataclass
class _Candidates:
    """Nested candidate orders around an anchor; every prefix contains the anchor and is connected."""

    orders: list[tuple[int, ...]] = field(default_factory=list)
    boundaries: list[np.ndarray] = field(default_factory=list)


def _candidate_orders(G: Graph, v: int, tolerance: float = 1e-10) -> _Candidates:
    cand = _Candidates()
    bo = bfs_order(G, v)
    cand.orders.append(tuple(bo))
    if len(bo) > 1:
        dist = bfs_distances(G, v)
        far = int(np.argmax(dist))
        profile = solve_voltages(G, far, v, tolerance)
        lo = level_order(profile, G)
        order = lo.order
        if lo.anomalies:
            order = order[: lo.anomalies[0]]
        cand.orders.append(tuple(order))
    for order in cand.orders:
        cand.boundaries.append(prefix_boundaries(G, order))
    return cand


def _local_search(
    G: Graph,
    v: int,
    members: set[int],
    lo: int,
    hi: int,
    score: Callable[[int, int], float],
    budget: int,
) -> tuple[set[int], float]:
    """First-improvement search over add/remove/swap moves keeping ``v`` and connectivity."""
    def evaluate(S: set[int]) -> float:
        return score(len(S), _boundary_size(G, S))

    current = set(members)
    cur = evaluate(current)
    evals = 0
    improved = True
    while improved and evals < budget:
        improved = False
        bd = sorted(_boundary(G, current))
        removable = sorted(x for x in current if x != v)
        for add, rem in _moves(bd, removable, len(current) < hi, len(current) > lo):
            if evals >= budget:
                break
            trial = (current | set(add)) - set(rem)
            if rem and not is_connected_subset(G, trial):
                continue
            evals += 1
            val = evaluate(trial)
            if val > cur:
                current, cur = trial, val
                improved = True
                break
    return current, cur


def _moves(bd, removable, can_grow, can_shrink):
    if can_grow:
        for y in bd:
            yield (y,), ()
    if can_shrink:
        for x in removable:
            yield (), (x,)
    for x in removable:
        for y in bd:
            yield (y,), (x,)


def _boundary(G: Graph, S: set[int]) -> set[int]:
    out: set[int] = set()
    for x in S:
        out.update(G.neighbor_sets[x])
    return out - S


def _boundary_size(G: Graph, S: set[int]) -> int:
    return len(_boundary(G, S))


# ---------------------------------------------------------------------------
# band terms and totals


def _heuristic_band(
    G: Graph,
    v: int,
    lo: int,
    hi: int,
    cand: _Candidates,
    maximize_term: bool,
    reciprocal: bool,
    budget: int,
) -> tuple[tuple[int, ...] | None, int | None, float]:
    """Best candidate in the band: max term, or (``maximize_term=False``) min boundary."""
    def score(size: int, b: int) -> float:
        return term_value(size, b, reciprocal) if maximize_term else -b

    best_set, best_b, best_score = None, None, -math.inf
    for order, bds in zip(cand.orders, cand.boundaries):
        top = min(hi, len(order))
        for m in range(lo, top + 1):
            s = score(m, int(bds[m - 1]))
            if s > best_score:
                best_set, best_b, best_score = order[:m], int(bds[m - 1]), s
    if best_set is not None and budget > 0 and best_score != math.inf and len(best_set) <= LOCAL_SEARCH_MAX_SIZE:
        improved, val = _local_search(G, v, set(best_set), lo, hi, score, budget)
        if val > best_score:
            best_set, best_score = tuple(sorted(improved)), val
            best_b = _boundary_size(G, improved)
    return best_set, best_b, best_score


def band_term(
    G: Graph,
    v: int,
    n: int,
    mode: str = EXACT,
    *,
    modified: bool = False,
    reciprocal: bool = True,
    override: bool = False,
    local_search_budget: int = 2000,
    _cand: _Candidates | None = None,
) -> BandTerm:
    """Maximum of ``|A|/|dA|^2 + 1/|dA|`` over connected ``A`` containing ``v`` in band ``n``.

    A band with no admissible set (empty size range, or ``v``'s component
    smaller than the band) contributes 0 and is flagged ``empty``.
    """
    G.check_vertex(v)
    N = G.vertex_count
    if not (1 <= n <= band_count(N)):
        raise GraphError(f"band index {n} outside 1..{band_count(N)}")
    lo, hi = band_range(N, n, modified)
    if lo > hi:
        return BandTerm(n, (lo, hi), None, None, 0.0, mode, empty=True)
    if mode == EXACT:
        check_gate(G, override)
        S, b, t = _exact_band_max(G, v, lo, hi, reciprocal)
        best = VertexSet.from_mask(G, S) if S is not None else None
    elif mode == HEURISTIC:
        cand = _cand or _candidate_orders(G, v)
        members, b, t = _heuristic_band(G, v, lo, hi, cand, True, reciprocal, local_search_budget)
        best = VertexSet.of(G, members) if members is not None else None
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if best is None:
        return BandTerm(n, (lo, hi), None, None, 0.0, mode, empty=True)
    return BandTerm(n, (lo, hi), best, b, t, mode)


def L_v(
    G: Graph,
    v: int,
    mode: str = EXACT,
    *,
    modified: bool = False,
    reciprocal: bool = True,
    override: bool = False,
    local_search_budget: int = 2000,
) -> IsoBound:
    """The band sum for anchor ``v`` over ``n = 1 .. floor(log2 |G|)``."""
    G.check_vertex(v)
    if mode == EXACT:
        check_gate(G, override)
    cand = _candidate_orders(G, v) if mode == HEURISTIC else None
    terms = tuple(
        band_term(
            G, v, n, mode,
            modified=modified, reciprocal=reciprocal, override=override,
            local_search_budget=local_search_budget, _cand=cand,
        )
        for n in range(1, band_count(G.vertex_count) + 1)
    )
    total = math.inf if any(t.term == math.inf for t in terms) else math.fsum(t.term for t in terms)
    return IsoBound(v, terms, total, mode, modified)


def L_v_modified_band(G: Graph, v: int, override: bool = False) -> IsoBound:
    """Exact band sum with every band's upper endpoint lowered by one."""
    return L_v(G, v, EXACT, modified=True, override=override)


@dataclass(frozen=True)
class BandMinimum:
    n: int
    band: tuple[int, int]
    value: int | None
    witness: VertexSet | None
    mode: str


def r_n(G: Graph, u: int, n: int, mode: str = EXACT, *, override: bool = False, local_search_budget: int = 2000) -> BandMinimum:
    """Smallest boundary over connected sets containing ``u`` with size in band ``n``."""
    G.check_vertex(u)
    N = G.vertex_count
    if not (1 <= n <= band_count(N)):
        raise GraphError(f"band index {n} outside 1..{band_count(N)}")
    lo, hi = band_range(N, n)
    if mode == EXACT:
        check_gate(G, override)
        S, b = _exact_band_min_boundary(G, u, lo, hi)
        witness = VertexSet.from_mask(G, S) if S is not None else None
    elif mode == HEURISTIC:
        cand = _candidate_orders(G, u)
        members, b, _ = _heuristic_band(G, u, lo, hi, cand, False, True, local_search_budget)
        witness = VertexSet.of(G, members) if members is not None else None
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return BandMinimum(n, (lo, hi), b, witness, mode)


# ---------------------------------------------------------------------------
# Cheeger constant, ratio profiles and balls


def _all_subsets(G: Graph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Masks, sizes and external boundary sizes of every vertex subset."""
    n = G.vertex_count
    masks = np.arange(1 << n, dtype=np.int64)
    N = np.zeros(1 << n, dtype=np.int64)
    for i, nb in enumerate(G.neighbor_masks):
        N[1 << i : 1 << (i + 1)] = N[: 1 << i] | nb
    sizes = np.bitwise_count(masks).astype(np.int64)
    bsizes = np.bitwise_count(N & ~masks).astype(np.int64)
    return masks, sizes, bsizes


def _heuristic_sets(G: Graph, starts: Iterable[int], max_size: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Prefixes (size <= max_size) of BFS and level-set orders from several starts, with boundary sizes."""
    for s in starts:
        cand = _candidate_orders(G, s)
        for order, bds in zip(cand.orders, cand.boundaries):
            for m in range(1, min(max_size, len(order)) + 1):
                yield order[:m], int(bds[m - 1])


def ratio_profile_min(
    G: Graph, exponent: float, mode: str = EXACT, *, override: bool = False, starts: Iterable[int] | None = None
) -> tuple[float, VertexSet]:
    """``min |dS| / |S|^exponent`` over ``1 <= |S| <= |G|/2``; heuristic mode gives an upper bound."""
    N = G.vertex_count
    if N < 2:
        raise GraphError("need at least two vertices")
    half = N // 2
    if mode == EXACT:
        check_gate(G, override)
        masks, sizes, bsizes = _all_subsets(G)
        ok = (sizes >= 1) & (sizes <= half)
        vals = np.full(masks.shape, np.inf)
        vals[ok] = bsizes[ok] / sizes[ok].astype(float) ** exponent
        i = int(np.argmin(vals))
        return float(vals[i]), VertexSet.from_mask(G, int(masks[i]))
    if mode != HEURISTIC:
        raise ValueError(f"unknown mode {mode!r}")
    if starts is None:
        starts = sorted({0, N // 2, N - 1})
    best_val, best_set = math.inf, None
    for members, b in _heuristic_sets(G, starts, half):
        val = b / len(members) ** exponent
        if val < best_val:
            best_val, best_set = val, members
    return best_val, VertexSet.of(G, best_set)


def cheeger(G: Graph, mode: str = EXACT, *, override: bool = False) -> tuple[float, VertexSet]:
    """Vertex Cheeger constant ``min |dS|/|S|`` over ``1 <= |S| <= |G|/2``."""
    if not G.is_connected():
        raise GraphError("cheeger needs a connected graph")
    return ratio_profile_min(G, 1.0, mode, override=override)


def ball_profile(G: Graph, v: int) -> list[tuple[int, int, int]]:
    """``(r, |B(v, r)|, |dB(v, r)|)`` for ``r = 0 .. ecc(v)``."""
    dist = bfs_distances(G, v)
    reach = dist[dist >= 0]
    counts = np.bincount(reach)
    sizes = np.cumsum(counts)
    out = []
    for r in range(len(counts)):
        shell = int(counts[r + 1]) if r + 1 < len(counts) else 0
        out.append((r, int(sizes[r]), shell))
    return out
