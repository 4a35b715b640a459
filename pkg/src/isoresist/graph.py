"""Finite undirected multigraphs, vertex sets, generators and the text format.

Edges are unit resistors; ``m`` parallel edges between a pair are stored as a
single record with multiplicity ``m`` (conductance ``m``).  Vertex ids are the
dense integers ``0..vertex_count-1``.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np
import scipy.sparse as sp


class GraphError(ValueError):
    """Invalid graph parameters, vertex ids or family specs."""


class GraphParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True, eq=False)
class Graph:
    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]

    def __init__(self, vertex_count: int, edges: Iterable[Sequence[int]] = ()):
        if vertex_count < 0:
            raise GraphError(f"negative vertex count {vertex_count}")
        records: dict[tuple[int, int], int] = {}
        for rec in edges:
            if len(rec) == 2:
                a, b, m = rec[0], rec[1], 1
            else:
                a, b, m = rec
            a, b, m = int(a), int(b), int(m)
            if a == b:
                raise GraphError(f"self-loop at vertex {a}")
            if not (0 <= a < vertex_count and 0 <= b < vertex_count):
                raise GraphError(f"edge ({a}, {b}) out of range for {vertex_count} vertices")
            if m < 1:
                raise GraphError(f"multiplicity must be positive, got {m}")
            key = (a, b) if a < b else (b, a)
            if key in records:
                raise GraphError(f"duplicate edge record {key}")
            records[key] = m
        object.__setattr__(self, "vertex_count", int(vertex_count))
        object.__setattr__(self, "edges", tuple((a, b, m) for (a, b), m in sorted(records.items())))

    def __len__(self) -> int:
        return self.vertex_count

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges))

    def __repr__(self) -> str:
        return f"Graph(vertex_count={self.vertex_count}, edge_records={len(self.edges)})"

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, the ``(neighbor, multiplicity)`` pairs in increasing neighbor order."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.vertex_count)]
        for a, b, m in self.edges:
            adj[a].append((b, m))
            adj[b].append((a, m))
        return tuple(tuple(sorted(row)) for row in adj)

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(x for x, _ in row) for row in self.adjacency)

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        """Neighborhoods as integer bitmasks (bit ``x`` set for neighbor ``x``)."""
        masks = []
        for row in self.adjacency:
            mask = 0
            for x, _ in row:
                mask |= 1 << x
            masks.append(mask)
        return tuple(masks)

    @cached_property
    def weighted_degree(self) -> np.ndarray:
        deg = np.zeros(self.vertex_count)
        for a, b, m in self.edges:
            deg[a] += m
            deg[b] += m
        return deg

    @cached_property
    def conductance(self) -> sp.csr_matrix:
        """Symmetric sparse matrix of multiplicities."""
        n = self.vertex_count
        if not self.edges:
            return sp.csr_matrix((n, n))
        arr = np.array(self.edges, dtype=np.int64)
        rows = np.concatenate([arr[:, 0], arr[:, 1]])
        cols = np.concatenate([arr[:, 1], arr[:, 0]])
        vals = np.concatenate([arr[:, 2], arr[:, 2]]).astype(float)
        return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))

    @cached_property
    def laplacian(self) -> sp.csr_matrix:
        return (sp.diags(self.weighted_degree) - self.conductance).tocsr()

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components, each sorted, ordered by smallest member."""
        seen = [False] * self.vertex_count
        comps = []
        for s in range(self.vertex_count):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.neighbor_sets[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        queue.append(y)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    @cached_property
    def component_index(self) -> np.ndarray:
        idx = np.empty(self.vertex_count, dtype=np.int64)
        for i, comp in enumerate(self.components):
            idx[list(comp)] = i
        return idx

    def component_of(self, v: int) -> tuple[int, ...]:
        self.check_vertex(v)
        return self.components[self.component_index[v]]

    def same_component(self, a: int, b: int) -> bool:
        self.check_vertex(a)
        self.check_vertex(b)
        return bool(self.component_index[a] == self.component_index[b])

    def is_connected(self) -> bool:
        return len(self.components) == 1

    def check_vertex(self, v: int) -> None:
        if not (0 <= v < self.vertex_count):
            raise GraphError(f"vertex {v} out of range for {self.vertex_count} vertices")

    def total_multiplicity(self) -> int:
        return sum(m for _, _, m in self.edges)

    def scaled(self, k: int) -> Graph:
        """Every multiplicity multiplied by ``k``."""
        return Graph(self.vertex_count, [(a, b, m * k) for a, b, m in self.edges])

    def without_edge(self, a: int, b: int) -> Graph:
        key = (min(a, b), max(a, b))
        return Graph(self.vertex_count, [e for e in self.edges if (e[0], e[1]) != key])

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
        """Subgraph on ``vertices`` relabeled densely; also returns new-to-old labels."""
        old = sorted(set(vertices))
        new_of = {v: i for i, v in enumerate(old)}
        edges = [
            (new_of[a], new_of[b], m)
            for a, b, m in self.edges
            if a in new_of and b in new_of
        ]
        return Graph(len(old), edges), old

    def relabeled(self, perm: Sequence[int]) -> Graph:
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        if sorted(perm) != list(range(self.vertex_count)):
            raise GraphError("relabeling must be a permutation")
        return Graph(self.vertex_count, [(perm[a], perm[b], m) for a, b, m in self.edges])


@dataclass(frozen=True)
class VertexSet:
    """An ordered set of vertices of ``graph``; ``boundary`` is computed on demand."""

    graph: Graph = field(repr=False, compare=False)
    members: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.members)) != len(self.members):
            raise GraphError("vertex set has repeated members")
        for v in self.members:
            self.graph.check_vertex(v)

    @classmethod
    def of(cls, graph: Graph, members: Iterable[int]) -> VertexSet:
        return cls(graph, tuple(sorted(set(int(v) for v in members))))

    @classmethod
    def from_mask(cls, graph: Graph, mask: int) -> VertexSet:
        return cls(graph, tuple(v for v in range(graph.vertex_count) if mask >> v & 1))

    @property
    def size(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v: object) -> bool:
        return v in self.as_set

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    @cached_property
    def as_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def boundary(self) -> VertexSet:
        return external_boundary(self.graph, self)

    @property
    def boundary_size(self) -> int:
        return self.boundary.size


def _members(G: Graph, A: VertexSet | Iterable[int]) -> frozenset[int]:
    if isinstance(A, VertexSet):
        if A.graph is not G and A.graph != G:
            for v in A.members:
                G.check_vertex(v)
        return A.as_set
    members = frozenset(int(v) for v in A)
    for v in members:
        G.check_vertex(v)
    return members


def external_boundary(G: Graph, A: VertexSet | Iterable[int]) -> VertexSet:
    """Vertices outside ``A`` with at least one neighbor in ``A``."""
    inside = _members(G, A)
    out: set[int] = set()
    for v in inside:
        out.update(G.neighbor_sets[v])
    out -= inside
    return VertexSet(G, tuple(sorted(out)))


def is_connected_subset(G: Graph, A: VertexSet | Iterable[int]) -> bool:
    """Whether ``A`` induces a connected subgraph.  The empty set is not connected."""
    inside = _members(G, A)
    if not inside:
        return False
    start = next(iter(inside))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in G.neighbor_sets[x]:
            if y in inside and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(inside)


def bfs_distances(G: Graph, source: int) -> np.ndarray:
    """Hop distances from ``source``; ``-1`` outside its component."""
    G.check_vertex(source)
    dist = np.full(G.vertex_count, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    nbrs = G.neighbor_sets
    while queue:
        x = queue.popleft()
        d = dist[x] + 1
        for y in nbrs[x]:
            if dist[y] < 0:
                dist[y] = d
                queue.append(y)
    return dist


def bfs_order(G: Graph, source: int) -> list[int]:
    """Breadth-first visiting order from ``source`` with neighbors in id order.

    Every prefix of the order induces a connected set.
    """
    G.check_vertex(source)
    seen = {source}
    order = [source]
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y, _ in G.adjacency[x]:
            if y not in seen:
                seen.add(y)
                order.append(y)
                queue.append(y)
    return order


def eccentricity(G: Graph, v: int) -> int:
    return int(bfs_distances(G, v).max())


def diameter(G: Graph) -> int:
    """Exact diameter of a connected graph (all-sources BFS)."""
    if not G.is_connected():
        raise GraphError("diameter of a disconnected graph is infinite")
    return max((eccentricity(G, v) for v in range(G.vertex_count)), default=0)


def double_sweep(G: Graph, start: int = 0) -> tuple[int, int, int]:
    """Two BFS sweeps; returns a far pair ``(a, b)`` and their distance (a diameter lower bound)."""
    d0 = bfs_distances(G, start)
    a = int(np.argmax(d0))
    da = bfs_distances(G, a)
    b = int(np.argmax(da))
    return a, b, int(da[b])


# ---------------------------------------------------------------------------
# generators


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise GraphError(msg)


def path(n: int) -> Graph:
    _need(n >= 1, f"path needs n >= 1, got {n}")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    _need(n >= 3, f"cycle needs n >= 3, got {n}")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    _need(n >= 1, f"complete needs n >= 1, got {n}")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def grid2d(n: int) -> Graph:
    """``n x n`` box of the square lattice, vertex ``r*n + c`` at row ``r``, column ``c``."""
    _need(n >= 1, f"grid2d needs n >= 1, got {n}")
    edges = []
    for r in range(n):
        for c in range(n):
            v = r * n + c
            if c + 1 < n:
                edges.append((v, v + 1))
            if r + 1 < n:
                edges.append((v, v + n))
    return Graph(n * n, edges)


def torus2d(n: int) -> Graph:
    """``n x n`` discrete torus, row-major labels; ``n >= 3`` keeps it simple."""
    _need(n >= 3, f"torus2d needs n >= 3, got {n}")
    edges = []
    for r in range(n):
        for c in range(n):
            v = r * n + c
            edges.append((v, r * n + (c + 1) % n))
            edges.append((v, ((r + 1) % n) * n + c))
    return Graph(n * n, edges)


def hypercube(d: int) -> Graph:
    """``d``-cube on bitstrings; vertex ``x`` is adjacent to ``x ^ (1 << i)``."""
    _need(d >= 1, f"hypercube needs d >= 1, got {d}")
    edges = [(x, x ^ (1 << i)) for x in range(1 << d) for i in range(d) if not x >> i & 1]
    return Graph(1 << d, edges)


def circulant(n: int, *steps: int) -> Graph:
    """Vertex ``i`` adjacent to ``i +- s (mod n)`` for every step ``s``; simple graph."""
    _need(n >= 2, f"circulant needs n >= 2, got {n}")
    _need(len(steps) >= 1, "circulant needs at least one step")
    pairs = set()
    for s in steps:
        _need(1 <= s < n, f"circulant step {s} out of range for n={n}")
        for i in range(n):
            j = (i + s) % n
            pairs.add((min(i, j), max(i, j)))
    return Graph(n, sorted(pairs))


def star(n: int) -> Graph:
    """Center ``0`` joined to ``n`` leaves ``1..n``."""
    _need(n >= 1, f"star needs n >= 1, got {n}")
    return Graph(n + 1, [(0, i) for i in range(1, n + 1)])


def layered_example(n: int) -> Graph:
    """Five layers of sizes ``1, n, n^2, n, 1``, consecutive layers completely joined.

    Labels run layer by layer, so vertex ``0`` is the first singleton layer and
    vertex ``2n^2 + 2n + 1`` the last.
    """
    _need(n >= 1, f"layered_example needs n >= 1, got {n}")
    sizes = [1, n, n * n, n, 1]
    starts = np.cumsum([0] + sizes).tolist()
    layers = [range(starts[i], starts[i + 1]) for i in range(5)]
    edges = [(a, b) for i in range(4) for a in layers[i] for b in layers[i + 1]]
    return Graph(starts[-1], edges)


def layer_ranges(n: int) -> list[range]:
    """Vertex ranges of the five layers of ``layered_example(n)``."""
    sizes = [1, n, n * n, n, 1]
    starts = np.cumsum([0] + sizes).tolist()
    return [range(starts[i], starts[i + 1]) for i in range(5)]


def multi_edge_cycle(n: int) -> Graph:
    """``n``-cycle whose every edge has multiplicity ``ceil(n^(2/3))``."""
    _need(n >= 3, f"multi_edge_cycle needs n >= 3, got {n}")
    return Graph(n, [(i, (i + 1) % n, ceil_two_thirds_power(n)) for i in range(n)])


def ceil_two_thirds_power(n: int) -> int:
    """Exact ``ceil(n^(2/3))``: the least ``k`` with ``k^3 >= n^2``."""
    k = max(1, round(n ** (2 / 3)))
    while k**3 < n * n:
        k += 1
    while k > 1 and (k - 1) ** 3 >= n * n:
        k -= 1
    return k


def disjoint_union(*graphs: Graph) -> Graph:
    """Components placed side by side; the ``i``-th graph's labels are shifted by the sizes before it."""
    _need(len(graphs) >= 1, "disjoint_union needs at least one graph")
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((a + offset, b + offset, m) for a, b, m in g.edges)
        offset += g.vertex_count
    return Graph(offset, edges)


def random_connected(n: int, extra: int, seed: int) -> Graph:
    """Uniform random labeled tree plus ``extra`` further distinct edges, seeded."""
    _need(n >= 1, f"random_connected needs n >= 1, got {n}")
    rng = random.Random(seed)
    pairs = set()
    for v in range(1, n):
        u = rng.randrange(v)
        pairs.add((u, v))
    missing = [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in pairs]
    rng.shuffle(missing)
    pairs.update(missing[: max(0, extra)])
    perm = list(range(n))
    rng.shuffle(perm)
    return Graph(n, [(perm[a], perm[b]) for a, b in sorted(pairs)])


FAMILIES = {
    "path": path,
    "cycle": cycle,
    "complete": complete,
    "grid2d": grid2d,
    "torus2d": torus2d,
    "hypercube": hypercube,
    "circulant": circulant,
    "star": star,
    "layered_example": layered_example,
    "multi_edge_cycle": multi_edge_cycle,
    "random_connected": random_connected,
}

_ARITY = {"circulant": None, "random_connected": 3}


def generate(family: str, *args: int) -> Graph:
    """Build a graph from a family name and integer parameters.

    >>> generate("layered_example", 2).vertex_count
    14
    """
    if family == "disjoint_union":
        raise GraphError("use disjoint_union() or the 'a+b' spec syntax")
    try:
        fn = FAMILIES[family]
    except KeyError:
        raise GraphError(f"unknown family {family!r}; known: {', '.join(sorted(FAMILIES))}") from None
    arity = _ARITY.get(family, 1)
    if arity is not None and len(args) != arity:
        raise GraphError(f"{family} takes {arity} integer parameter(s), got {len(args)}")
    return fn(*args)


def parse_family(spec: str) -> Graph:
    """Parse ``name:i,j,...``; ``a+b`` builds the disjoint union of two specs."""
    spec = spec.strip()
    if "+" in spec:
        return disjoint_union(*(parse_family(part) for part in spec.split("+")))
    name, _, rest = spec.partition(":")
    try:
        args = [int(x) for x in rest.split(",")] if rest.strip() else []
    except ValueError:
        raise GraphError(f"bad family parameters in {spec!r}") from None
    return generate(name.strip(), *args)


# ---------------------------------------------------------------------------
# text format


def read_graph(text: str) -> Graph:
    header = None
    edges: list[tuple[int, int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise GraphParseError(lineno, f"non-integer field in {line!r}") from None
        if header is None:
            if len(nums) != 2 or nums[0] < 0 or nums[1] < 0:
                raise GraphParseError(lineno, "header must be 'V E' with nonnegative integers")
            header = (nums[0], nums[1])
            continue
        if len(nums) != 3:
            raise GraphParseError(lineno, "edge line must be 'u v m'")
        u, v, m = nums
        V = header[0]
        if u == v:
            raise GraphParseError(lineno, f"self-loop at vertex {u}")
        if not (0 <= u < v < V):
            raise GraphParseError(lineno, f"need 0 <= u < v < {V}, got u={u} v={v}")
        if m < 1:
            raise GraphParseError(lineno, f"multiplicity must be >= 1, got {m}")
        if (u, v) in seen:
            raise GraphParseError(lineno, f"duplicate pair ({u}, {v}), first on line {seen[(u, v)]}")
        seen[(u, v)] = lineno
        edges.append((u, v, m))
    if header is None:
        raise GraphParseError(0, "missing header line")
    if len(edges) != header[1]:
        raise GraphParseError(0, f"header announces {header[1]} edge records, found {len(edges)}")
    return Graph(header[0], edges)


def write_graph(G: Graph) -> str:
    lines = [f"{G.vertex_count} {len(G.edges)}"]
    lines.extend(f"{a} {b} {m}" for a, b, m in G.edges)
    return "\n".join(lines) + "\n"
