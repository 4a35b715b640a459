"""Unit-voltage battery solves, effective resistance and low-voltage level sets.

The battery pins ``V(w) = 1`` and ``V(u) = 0`` and the remaining vertices of
their component are harmonic for the multiplicity-weighted Laplacian.  Small
components are solved densely; larger ones by Jacobi-preconditioned conjugate
gradients.  Vertices outside the battery component carry voltage 0 and are
ignored by everything downstream.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .graph import Graph, GraphError, VertexSet, external_boundary

DEFAULT_TOLERANCE = 1e-10
DENSE_CUTOFF = 200
TIE_SLACK = 1e-12


class ConvergenceError(RuntimeError):
    def __init__(self, residual: float, iterations: int):
        super().__init__(f"conjugate gradients stalled at relative residual {residual:.3e} after {iterations} iterations")
        self.residual = residual
        self.iterations = iterations


class DisconnectedError(ValueError):
    """The battery terminals lie in different components: the resistance is infinite."""


def pcg(A, b: np.ndarray, diag: np.ndarray, tol: float, maxiter: int) -> tuple[np.ndarray, float, int]:
    """Jacobi-preconditioned CG for SPD ``A``; stops at ``||Ax - b|| <= tol * ||b||``."""
    bnorm = float(np.linalg.norm(b))
    x = np.zeros_like(b)
    if bnorm == 0.0:
        return x, 0.0, 0
    inv_diag = 1.0 / diag
    r = b.copy()
    z = inv_diag * r
    p = z.copy()
    rz = float(r @ z)
    rel = 1.0
    for it in range(1, maxiter + 1):
        Ap = A @ p
        alpha = rz / float(p @ Ap)
        x += alpha * p
        r -= alpha * Ap
        rel = float(np.linalg.norm(r)) / bnorm
        if rel <= tol:
            # recompute from scratch; the recursive residual drifts
            rel = float(np.linalg.norm(b - A @ x)) / bnorm
            if rel <= tol:
                return x, rel, it
            r = b - A @ x
        z = inv_diag * r
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise ConvergenceError(rel, maxiter)


def solve_dirichlet(
    G: Graph,
    component: Iterable[int],
    pinned: Mapping[int, float],
    source: float | np.ndarray = 0.0,
    tolerance: float = DEFAULT_TOLERANCE,
    method: str = "auto",
) -> tuple[np.ndarray, float]:
    """Solve ``(L x)(v) = source(v)`` on the free vertices of ``component`` with ``pinned`` values fixed.

    Returns the full-length vertex vector (zero off the component) and the
    relative residual of the reduced system.  ``source`` is a scalar or an
    array indexed by vertex id.
    """
    comp = np.fromiter(component, dtype=np.int64)
    values = np.zeros(G.vertex_count)
    pin_ids = np.array(sorted(pinned), dtype=np.int64)
    for v, val in pinned.items():
        values[v] = val
    free = comp[~np.isin(comp, pin_ids)]
    if free.size == 0:
        return values, 0.0
    L = G.laplacian
    L_ff = L[free][:, free]
    b = np.broadcast_to(np.asarray(source, dtype=float), (G.vertex_count,))[free].copy()
    if pin_ids.size:
        b -= L[free][:, pin_ids] @ values[pin_ids]
    if method == "auto":
        method = "dense" if comp.size < DENSE_CUTOFF else "cg"
    if method == "dense":
        x = np.linalg.solve(L_ff.toarray(), b)
    elif method == "cg":
        x, _, _ = pcg(L_ff, b, L_ff.diagonal(), tolerance, 20 * comp.size)
    elif method == "direct":
        x = splu(sp.csc_matrix(L_ff)).solve(b)
    else:
        raise ValueError(f"unknown solver method {method!r}")
    bnorm = float(np.linalg.norm(b))
    residual = float(np.linalg.norm(L_ff @ x - b)) / bnorm if bnorm > 0 else float(np.linalg.norm(L_ff @ x))
    values[free] = x
    return values, residual


@dataclass(frozen=True)
class VoltageProfile:
    w: int
    u: int
    voltages: np.ndarray = field(repr=False)
    current: float
    residual: float
    component: tuple[int, ...] = field(repr=False)

    @property
    def resistance(self) -> float:
        return 1.0 / self.current if self.current > 0 else math.inf

    def to_dict(self) -> dict:
        return {
            "w": self.w,
            "u": self.u,
            "voltages": [float(x) for x in self.voltages],
            "current": self.current,
            "residual": self.residual,
        }


def solve_voltages(
    G: Graph, w: int, u: int, tolerance: float = DEFAULT_TOLERANCE, method: str = "auto"
) -> VoltageProfile:
    G.check_vertex(w)
    G.check_vertex(u)
    if w == u:
        raise GraphError("battery terminals must differ")
    if not G.same_component(w, u):
        raise DisconnectedError(f"vertices {w} and {u} are in different components")
    comp = G.component_of(w)
    V, residual = solve_dirichlet(G, comp, {w: 1.0, u: 0.0}, 0.0, tolerance, method)
    current = math.fsum(m * (1.0 - V[x]) for x, m in G.adjacency[w])
    return VoltageProfile(w, u, V, current, residual, comp)


def effective_resistance(
    G: Graph, w: int, u: int, tolerance: float = DEFAULT_TOLERANCE, method: str = "auto"
) -> float:
    """Resistance between ``w`` and ``u``; ``inf`` when they are disconnected."""
    try:
        return solve_voltages(G, w, u, tolerance, method).resistance
    except DisconnectedError:
        return math.inf


def vertex_current(profile: VoltageProfile, G: Graph, v: int, A: VertexSet | Iterable[int]) -> float:
    """Current through boundary vertex ``v`` into ``A``: sum over edges to ``A`` of ``m (V(v) - V(x))``."""
    inside = A.as_set if isinstance(A, VertexSet) else frozenset(A)
    if v in inside or not any(x in inside for x in G.neighbor_sets[v]):
        raise GraphError(f"vertex {v} is not in the external boundary of the set")
    V = profile.voltages
    return math.fsum(m * (V[v] - V[x]) for x, m in G.adjacency[v] if x in inside)


class GroundedSolver:
    """Pairwise resistances on one component from a single sparse factorization.

    The component's Laplacian with one vertex grounded is factorized once; each
    pair then costs one triangular solve.
    """

    def __init__(self, G: Graph, component: Iterable[int] | None = None):
        comp = np.fromiter(component if component is not None else G.components[0], dtype=np.int64)
        self.G = G
        self.component = comp
        self.ground = int(comp[0])
        self._pos = {int(v): i for i, v in enumerate(comp[1:])}
        self._lu = None
        if comp.size > 1:
            rest = comp[1:]
            self._lu = splu(sp.csc_matrix(G.laplacian[rest][:, rest]))
        self._n = comp.size - 1

    def potentials(self, a: int, b: int) -> np.ndarray:
        rhs = np.zeros(self._n)
        if a != self.ground:
            rhs[self._pos[a]] += 1.0
        if b != self.ground:
            rhs[self._pos[b]] -= 1.0
        return self._lu.solve(rhs)

    def resistance(self, a: int, b: int) -> float:
        if a == b:
            return 0.0
        if a not in self._pos and a != self.ground or b not in self._pos and b != self.ground:
            return math.inf
        x = self.potentials(a, b)
        xa = 0.0 if a == self.ground else x[self._pos[a]]
        xb = 0.0 if b == self.ground else x[self._pos[b]]
        return float(xa - xb)

    def all_pairs(self) -> np.ndarray:
        """Dense resistance matrix indexed like ``self.component``; for small components only."""
        k = self.component.size
        X = np.zeros((k, k))
        if k > 1:
            X[1:, 1:] = self._lu.solve(np.eye(k - 1))
        d = np.diag(X)
        return d[:, None] + d[None, :] - 2 * X


# ---------------------------------------------------------------------------
# level sets


@dataclass(frozen=True)
class LevelSet:
    m: int
    members: VertexSet
    theta: float


@dataclass(frozen=True)
class LevelOrder:
    """The nested sequence of low-voltage sets grown from the sink.

    ``order[:m]`` is the level set of size ``m``; ``thetas[m-1]`` its maximum
    voltage.  ``anomalies`` lists the positions where no equal-voltage candidate
    touched the current set, so connectivity could not be kept.
    """

    order: tuple[int, ...]
    thetas: np.ndarray
    anomalies: tuple[int, ...]


def level_order(profile: VoltageProfile, G: Graph) -> LevelOrder:
    V = profile.voltages
    comp = profile.component
    by_voltage = sorted(comp, key=lambda x: (V[x], x))
    taken = set()
    order: list[int] = []
    thetas: list[float] = []
    anomalies: list[int] = []
    frontier: list[tuple[float, int]] = []
    in_frontier: set[int] = set()
    ptr = 0

    def admit(x: int) -> None:
        taken.add(x)
        order.append(x)
        thetas.append(max(thetas[-1], V[x]) if thetas else V[x])
        for y in G.neighbor_sets[x]:
            if y not in taken and y not in in_frontier:
                in_frontier.add(y)
                heapq.heappush(frontier, (V[y], y))

    admit(profile.u)
    while len(order) < len(comp):
        while by_voltage[ptr] in taken:
            ptr += 1
        global_min = V[by_voltage[ptr]]
        while frontier and frontier[0][1] in taken:
            heapq.heappop(frontier)
        if frontier and frontier[0][0] <= global_min + TIE_SLACK:
            _, x = heapq.heappop(frontier)
        else:
            x = by_voltage[ptr]
            anomalies.append(len(order))
        admit(x)
    return LevelOrder(tuple(order), np.array(thetas), tuple(anomalies))


def level_set(profile: VoltageProfile, G: Graph, m: int, order: LevelOrder | None = None) -> LevelSet:
    """The ``m`` lowest-voltage vertices, grown connected from the sink ``u``."""
    size = len(profile.component)
    if not (1 <= m <= size):
        raise GraphError(f"level set size {m} outside 1..{size}")
    order = order or level_order(profile, G)
    return LevelSet(m, VertexSet.of(G, order.order[:m]), float(order.thetas[m - 1]))


def check_maximum_principle(
    profile: VoltageProfile, G: Graph, tolerance: float = 1e-9
) -> tuple[bool, int | None]:
    """Every non-terminal vertex must sit between its neighbors' extreme voltages."""
    V = profile.voltages
    for v in profile.component:
        if v in (profile.w, profile.u) or not G.adjacency[v]:
            continue
        nb = [V[x] for x, _ in G.adjacency[v]]
        if V[v] > max(nb) + tolerance or V[v] < min(nb) - tolerance:
            return False, v
    return True, None


def separating_boundary_current(profile: VoltageProfile, G: Graph, A: Iterable[int]) -> float:
    """Total current through the external boundary of ``A`` into ``A``."""
    bd = external_boundary(G, A)
    inside = frozenset(A)
    return math.fsum(vertex_current(profile, G, v, inside) for v in bd)
