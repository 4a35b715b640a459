"""Seeded experiments: empirical checks of the resistance bound, its sharpness
examples, the multi-edge cycle commute-time scaling and vertex-transitive probes.

Every function returns a :class:`~isoresist.report.Report`; re-running with the
same arguments reproduces the report body exactly.
"""

from __future__ import annotations

import itertools
import math
import time
from typing import Iterable, Sequence

import numpy as np

from . import graph as g
from .electrical import DEFAULT_TOLERANCE, GroundedSolver, effective_resistance
from .graph import Graph, GraphError, ceil_two_thirds_power, diameter, double_sweep
from .isoperimetry import EXACT, EXACT_GATE, HEURISTIC, L_v, L_v_modified_band, ratio_profile_min
from .report import Report
from .walks import EXACT_TAU_CUTOFF, tau_star


def fit_power_law(xs: Sequence[float], ys: Sequence[float]) -> dict:
    """Least-squares line through ``(log x, log y)``."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    pred = slope * lx + intercept
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    return {
        "exponent": float(slope),
        "log_prefactor": float(intercept),
        "r2": 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0,
        "points": len(lx),
    }


def _ratio(R: float, L: float) -> tuple[float, str | None]:
    if math.isinf(R) and math.isinf(L):
        return 0.0, "both infinite"
    if math.isinf(L):
        return 0.0, "bound infinite"
    if math.isinf(R):
        return math.inf, "violation"
    return R / L, None


class _BoundCache:
    def __init__(self, G: Graph, mode: str, override: bool):
        self.G, self.mode, self.override = G, mode, override
        self._cache: dict[int, float] = {}

    def __call__(self, v: int) -> float:
        if v not in self._cache:
            self._cache[v] = L_v(self.G, v, self.mode, override=self.override).total
        return self._cache[v]


def _theorem_records(G: Graph, pairs: Iterable[tuple[int, int]], mode: str, tolerance: float, override: bool) -> list[dict]:
    bound = _BoundCache(G, mode, override)
    records = []
    for w, u in pairs:
        R = effective_resistance(G, w, u, tolerance)
        Lw, Lu = bound(w), bound(u)
        ratio, flag = _ratio(R, Lw + Lu)
        records.append({"pair": [w, u], "R": R, "L_w": Lw, "L_u": Lu, "ratio": ratio, "flag": flag})
    return records


def verify_theorem(
    G: Graph,
    pairs: Iterable[tuple[int, int]] | None = None,
    mode: str = EXACT,
    tolerance: float = DEFAULT_TOLERANCE,
    override: bool = False,
) -> Report:
    """Ratios ``R(w,u) / (L_w + L_u)``; all pairs when ``pairs`` is None."""
    t0 = time.perf_counter()
    pairs = list(pairs) if pairs is not None else list(itertools.combinations(range(G.vertex_count), 2))
    records = _theorem_records(G, pairs, mode, tolerance, override)
    finite = [r["ratio"] for r in records if math.isfinite(r["ratio"]) and r["flag"] is None]
    results = {
        "sup_finite_ratio": max(finite, default=None),
        "pairs": len(records),
        "both_infinite": sum(r["flag"] == "both infinite" for r in records),
        "violations": sum(r["flag"] == "violation" for r in records),
    }
    config = {"vertex_count": G.vertex_count, "edge_records": len(G.edges), "mode": mode, "tolerance": tolerance}
    return Report("verify-theorem", config, results, records, time.perf_counter() - t0)


def sweep_corpus(seed: int = 0) -> list[tuple[str, str, Graph]]:
    """Connected graphs within the exact gate: ``(family, label, graph)``."""
    corpus: list[tuple[str, str, Graph]] = []

    def add(family: str, label: str, G: Graph) -> None:
        if 2 <= G.vertex_count <= EXACT_GATE:
            corpus.append((family, label, G))

    for n in range(2, 19):
        add("path", f"path:{n}", g.path(n))
        add("complete", f"complete:{n}", g.complete(n))
        add("star", f"star:{n - 1}", g.star(n - 1))
    for n in range(3, 19):
        add("cycle", f"cycle:{n}", g.cycle(n))
    for n in range(5, 19):
        add("circulant", f"circulant:{n},1,2", g.circulant(n, 1, 2))
    for n in range(2, 5):
        add("grid2d", f"grid2d:{n}", g.grid2d(n))
    for n in (3, 4):
        add("torus2d", f"torus2d:{n}", g.torus2d(n))
    for d in range(1, 5):
        add("hypercube", f"hypercube:{d}", g.hypercube(d))
    for n in range(1, 4):
        add("layered_example", f"layered_example:{n}", g.layered_example(n))
    for n in range(4, 19):
        add("random_connected", f"random_connected:{n},{n // 2},{seed + n}", g.random_connected(n, n // 2, seed + n))
    return corpus


def corpus_pairs(G: Graph, seed: int, all_pairs_up_to: int = 10, samples: int = 20) -> list[tuple[int, int]]:
    """All pairs on small graphs; otherwise the double-sweep pair plus seeded random pairs."""
    N = G.vertex_count
    if N <= all_pairs_up_to:
        return list(itertools.combinations(range(N), 2))
    a, b, _ = double_sweep(G)
    pairs = {(min(a, b), max(a, b))}
    rng = np.random.default_rng([seed, N, len(G.edges)])
    while len(pairs) < samples + 1:
        x, y = (int(z) for z in rng.choice(N, size=2, replace=False))
        pairs.add((min(x, y), max(x, y)))
    return sorted(pairs)


def constant_sweep(
    corpus: list[tuple[str, str, Graph]] | None = None,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
    max_growth: float = 2.0,
) -> Report:
    """Empirical constant ``sup R/(L_w+L_u)`` per family and size, with the doubling check."""
    t0 = time.perf_counter()
    corpus = corpus if corpus is not None else sweep_corpus(seed)
    records = []
    per_family: dict[str, dict[int, float]] = {}
    for family, label, G in corpus:
        recs = _theorem_records(G, corpus_pairs(G, seed), EXACT, tolerance, False)
        ratios = [r["ratio"] for r in recs]
        c_hat = max(ratios)
        argmax = recs[int(np.argmax(ratios))]["pair"]
        records.append({
            "family": family,
            "graph": label,
            "size": G.vertex_count,
            "pairs": len(recs),
            "C_hat": c_hat,
            "argmax_pair": argmax,
            "all_finite": all(math.isfinite(x) for x in ratios),
            "flags": sorted({r["flag"] for r in recs if r["flag"]}),
        })
        sizes = per_family.setdefault(family, {})
        sizes[G.vertex_count] = max(sizes.get(G.vertex_count, 0.0), c_hat)
    doublings = []
    for family, sizes in per_family.items():
        for s, c in sorted(sizes.items()):
            if 2 * s in sizes:
                growth = sizes[2 * s] / c
                doublings.append({"family": family, "size": s, "ratio": growth, "ok": growth <= max_growth})
    summary = {
        "C_hat_overall": max(r["C_hat"] for r in records),
        "C_hat_per_family": {f: max(s.values()) for f, s in per_family.items()},
        "all_ratios_finite": all(r["all_finite"] for r in records),
        "doublings": doublings,
        "no_growth": all(d["ok"] for d in doublings),
        "graphs": len(records),
    }
    config = {"seed": seed, "tolerance": tolerance, "max_growth": max_growth, "graphs": [r["graph"] for r in records]}
    return Report("constant-sweep", config, summary, records, time.perf_counter() - t0)


def falsify_modified_band(ms: Sequence[int] = (4, 8, 16), tolerance: float = DEFAULT_TOLERANCE) -> Report:
    """Two equal complete halves: infinite resistance against a finite shrunken-band sum.

    The exact enumeration is run past the usual size gate here; complete
    halves prune almost immediately.
    """
    t0 = time.perf_counter()
    records = []
    for m in ms:
        G = g.disjoint_union(g.complete(m), g.complete(m))
        w, u = 0, m
        R = effective_resistance(G, w, u, tolerance)
        mod_w = L_v_modified_band(G, w, override=True)
        mod_u = L_v_modified_band(G, u, override=True)
        plain_w = L_v(G, w, override=True).total
        plain_u = L_v(G, u, override=True).total
        records.append({
            "m": m,
            "R": R,
            "modified_L_w": mod_w.total,
            "modified_L_u": mod_u.total,
            "modified_total": mod_w.total + mod_u.total,
            "empty_bands": [t.n for t in mod_w.terms if t.empty],
            "unmodified_L_w": plain_w,
            "unmodified_L_u": plain_u,
            "falsified": math.isinf(R) and math.isfinite(mod_w.total + mod_u.total),
        })
    results = {"all_falsified": all(r["falsified"] for r in records), "cases": len(records)}
    return Report("falsify-band", {"ms": list(ms)}, results, records, time.perf_counter() - t0)


def layered_scaling(n_list: Sequence[int] = (4, 8, 16, 32), tolerance: float = DEFAULT_TOLERANCE) -> Report:
    """Resistance between the two singleton layers, and the band sum without the ``1/|dA|`` part.

    The band sums are heuristic (lower bounds on each band maximum) except on
    graphs within the exact gate, where the exact value is also recorded.
    """
    t0 = time.perf_counter()
    records = []
    for n in n_list:
        if not 1 <= n <= 40:
            raise GraphError(f"layered_scaling takes n in [1, 40], got {n}")
        G = g.layered_example(n)
        w, u = 0, G.vertex_count - 1
        R = effective_resistance(G, w, u, tolerance)
        sig_w = L_v(G, w, HEURISTIC, reciprocal=False).total
        sig_u = L_v(G, u, HEURISTIC, reciprocal=False).total
        full_w = L_v(G, w, HEURISTIC).total
        rec = {
            "n": n,
            "vertices": G.vertex_count,
            "R": R,
            "n_times_R": n * R,
            "sigma_w": sig_w,
            "sigma_u": sig_u,
            "sigma": sig_w + sig_u,
            "L_w_heuristic": full_w,
            "sigma_mode": HEURISTIC,
        }
        if G.vertex_count <= EXACT_GATE:
            rec["sigma_exact"] = L_v(G, w, reciprocal=False).total + L_v(G, u, reciprocal=False).total
        records.append(rec)
    ns = [r["n"] for r in records]
    nR = [r["n_times_R"] for r in records]
    results = {
        "R_fit": fit_power_law(ns, [r["R"] for r in records]),
        "sigma_fit": fit_power_law(ns, [r["sigma"] for r in records]),
        "sigma_fit_flag": HEURISTIC,
        "n_times_R_spread": max(nR) / min(nR),
    }
    return Report("layered-scaling", {"n_list": list(n_list), "tolerance": tolerance}, results, records, time.perf_counter() - t0)


def multi_edge_tau_scaling(
    n_list: Sequence[int] = (16, 32, 64, 128, 256),
    pair_budget: int = 32,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
) -> Report:
    """Maximal commute time on cycles with ``ceil(n^(2/3))``-fold edges.

    Also checks the edge-isoperimetric hypothesis ``e(A, A^c) >= |A|^(2/3)``
    on arcs (the binding sets), and the commute identity against an independent
    resistance solve of the maximizing pair.
    """
    t0 = time.perf_counter()
    records = []
    for n in n_list:
        if not (8 <= n <= 1024 and n % 2 == 0):
            raise GraphError(f"multi_edge_tau_scaling takes even n in [8, 1024], got {n}")
        G = g.multi_edge_cycle(n)
        k = ceil_two_thirds_power(n)
        ts = tau_star(G, tolerance, pair_budget, seed)
        R = effective_resistance(G, *ts.pair, tolerance)
        arc_slack = min(2 * k - a ** (2 / 3) for a in range(1, n // 2 + 1))
        records.append({
            "n": n,
            "multiplicity": k,
            "tau_star": ts.value,
            "pair": list(ts.pair),
            "tau_flag": ts.flag,
            "tau_over_n": ts.value / n,
            "R_pair": R,
            "identity_gap": abs(ts.value - n * R),
            "arc_hypothesis_min_slack": arc_slack,
            "arc_hypothesis_holds": arc_slack >= 0,
        })
    ratios = [r["tau_over_n"] for r in records]
    results = {
        "tau_fit": fit_power_law([r["n"] for r in records], [r["tau_star"] for r in records]),
        "tau_over_n_strictly_increasing": all(b > a for a, b in zip(ratios, ratios[1:])),
        "max_identity_gap": max(r["identity_gap"] for r in records),
        "arc_hypothesis_holds": all(r["arc_hypothesis_holds"] for r in records),
        "hypothesis_scope": "arcs only",
    }
    config = {"n_list": list(n_list), "pair_budget": pair_budget, "seed": seed, "tolerance": tolerance}
    return Report("multiedge-scaling", config, results, records, time.perf_counter() - t0)


def _transitive_check(G: Graph) -> None:
    if not G.is_connected():
        raise GraphError("probe needs a connected graph")
    if G.vertex_count < 2:
        raise GraphError("probe needs at least two vertices")


def conjecture1_probe(G: Graph, label: str = "", mode: str | None = None) -> Report:
    """``min |dS| / |S|^(1-alpha)`` over ``1 <= |S| <= |G|/2`` with ``alpha = log diam / log |G|``.

    Report only; nothing is asserted about the value.
    """
    t0 = time.perf_counter()
    _transitive_check(G)
    mode = mode or (EXACT if G.vertex_count <= EXACT_GATE else HEURISTIC)
    N = G.vertex_count
    diam = diameter(G)
    alpha = math.log(diam) / math.log(N)
    value, witness = ratio_profile_min(G, 1.0 - alpha, mode)
    results = {
        "diameter": diam,
        "alpha": alpha,
        "min_ratio": value,
        "witness_size": witness.size,
        "witness": list(witness.members),
        "mode": mode,
        "upper_bound": mode == HEURISTIC,
    }
    return Report("conj1", {"graph": label, "vertex_count": N, "mode": mode}, results, [], time.perf_counter() - t0)


def max_pair_resistance(G: Graph, pair_budget: int = 32, seed: int = 0) -> tuple[float, tuple[int, int], bool]:
    """Largest resistance over all pairs (up to the tau cutoff) or over a far-pair sample."""
    N = G.vertex_count
    solver = GroundedSolver(G, range(N))
    if N <= EXACT_TAU_CUTOFF:
        Rm = solver.all_pairs()
        i, j = np.unravel_index(int(np.argmax(Rm)), Rm.shape)
        a, b = sorted((int(i), int(j)))
        return float(Rm[a, b]), (a, b), True
    a, b, _ = double_sweep(G)
    pairs = [(min(a, b), max(a, b))]
    rng = np.random.default_rng([seed, N])
    for _ in range(pair_budget):
        x, y = (int(z) for z in rng.choice(N, size=2, replace=False))
        pairs.append((min(x, y), max(x, y)))
    vals = [solver.resistance(x, y) for x, y in pairs]
    i = int(np.argmax(vals))
    return float(vals[i]), pairs[i], False


def conjecture2_probe(G: Graph, label: str = "", pair_budget: int = 32, seed: int = 0) -> Report:
    """Gap between the largest resistance and ``diam^2 log2|G| / |G|`` (additive constant 0).

    Report only; nothing is asserted about the sign of the gap.
    """
    t0 = time.perf_counter()
    _transitive_check(G)
    N = G.vertex_count
    diam = diameter(G) if N <= 4096 else double_sweep(G)[2]
    R, pair, exact = max_pair_resistance(G, pair_budget, seed)
    bound = diam**2 * math.log2(N) / N
    results = {
        "diameter": diam,
        "max_R": R,
        "pair": list(pair),
        "R_exact_max": exact,
        "bound_term": bound,
        "gap": R - bound,
        "R_over_diameter": R / diam,
    }
    config = {"graph": label, "vertex_count": N, "pair_budget": pair_budget, "seed": seed}
    return Report("conj2", config, results, [], time.perf_counter() - t0)
