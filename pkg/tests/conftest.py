from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction

import pytest

from isoresist import graph as g


def exact_resistance(G: g.Graph, w: int, u: int) -> Fraction:
    """Rational Gauss-Jordan elimination on the pinned Laplacian (w at 1, u at 0)."""
    comp = [v for v in G.component_of(w) if v not in (w, u)]
    idx = {v: i for i, v in enumerate(comp)}
    n = len(comp)
    A = [[Fraction(0)] * (n + 1) for _ in range(n)]
    for a, b, m in G.edges:
        for x, y in ((a, b), (b, a)):
            if x in idx:
                A[idx[x]][idx[x]] += m
                if y in idx:
                    A[idx[x]][idx[y]] -= m
                elif y == w:
                    A[idx[x]][n] += m
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    V = {w: Fraction(1), u: Fraction(0)}
    for v, i in idx.items():
        V[v] = A[i][n] / A[i][i]
    current = sum(m * (1 - V[x]) for x, m in G.adjacency[w])
    return 1 / current


def bfs_connected(G: g.Graph, members: set[int]) -> bool:
    if not members:
        return False
    start = min(members)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for a, b, _ in G.edges:
            for p, q in ((a, b), (b, a)):
                if p == x and q in members and q not in seen:
                    seen.add(q)
                    queue.append(q)
    return seen == members


def naive_boundary(G: g.Graph, members: set[int]) -> set[int]:
    out = set()
    for a, b, _ in G.edges:
        if a in members and b not in members:
            out.add(b)
        if b in members and a not in members:
            out.add(a)
    return out


def brute_force_band(G: g.Graph, v: int, lo: int, hi: int) -> tuple[float, int | None]:
    """Max term and min boundary over all subsets in the band (connected, containing v)."""
    best_term, best_b = -1.0, None
    for size in range(lo, hi + 1):
        for rest in itertools.combinations([x for x in range(G.vertex_count) if x != v], size - 1):
            S = {v, *rest}
            if not bfs_connected(G, S):
                continue
            b = len(naive_boundary(G, S))
            term = float("inf") if b == 0 else size / b**2 + 1 / b
            best_term = max(best_term, term)
            best_b = b if best_b is None else min(best_b, b)
    return best_term, best_b


def small_corpus() -> list[tuple[str, g.Graph]]:
    """Connected graphs with at most 9 vertices."""
    out = []
    for n in range(2, 10):
        out += [(f"path:{n}", g.path(n)), (f"complete:{n}", g.complete(n)), (f"star:{n - 1}", g.star(n - 1))]
    for n in range(3, 10):
        out += [(f"cycle:{n}", g.cycle(n)), (f"multi_edge_cycle:{n}", g.multi_edge_cycle(n))]
    for n in range(5, 10):
        out.append((f"circulant:{n},1,2", g.circulant(n, 1, 2)))
    out += [
        ("grid2d:2", g.grid2d(2)),
        ("grid2d:3", g.grid2d(3)),
        ("torus2d:3", g.torus2d(3)),
        ("hypercube:1", g.hypercube(1)),
        ("hypercube:2", g.hypercube(2)),
        ("hypercube:3", g.hypercube(3)),
        ("layered_example:1", g.layered_example(1)),
    ]
    for n in range(4, 10):
        for seed in range(3):
            out.append((f"random_connected:{n},{seed},{seed}", g.random_connected(n, seed + 1, 100 * n + seed)))
    out.append(("parallel:2", g.Graph(2, [(0, 1, 2)])))
    out.append(("weighted", g.Graph(5, [(0, 1, 3), (1, 2, 1), (2, 3, 2), (3, 4, 5), (0, 4, 1), (1, 3, 2)])))
    return out


def transitive_corpus() -> list[tuple[str, g.Graph]]:
    """Vertex-transitive generator outputs within the exact gate."""
    out = [(f"cycle:{n}", g.cycle(n)) for n in range(3, 19)]
    out += [(f"complete:{n}", g.complete(n)) for n in range(2, 19)]
    out += [(f"hypercube:{d}", g.hypercube(d)) for d in range(1, 5)]
    out += [("torus2d:3", g.torus2d(3)), ("torus2d:4", g.torus2d(4))]
    out += [(f"circulant:{n},1,2", g.circulant(n, 1, 2)) for n in range(5, 19)]
    out += [(f"circulant:{n},1,3", g.circulant(n, 1, 3)) for n in range(7, 19)]
    return out


@pytest.fixture(scope="session")
def corpus9():
    return small_corpus()
