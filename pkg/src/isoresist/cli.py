"""Command-line entry point.

Usage examples::

    isoresist resistance --family path:5 --pair 0,4
    isoresist lbound --family path:4 --vertex 0 --mode exact
    isoresist percolation --n 32,64 --p 0.7 --trials 10 --seed 7 --out perc.json
"""

from __future__ import annotations

import argparse
import itertools
import math
import sys
import time
from pathlib import Path

from . import experiments as ex
from . import percolation as perc
from .electrical import DEFAULT_TOLERANCE, ConvergenceError, effective_resistance, level_order, solve_voltages, check_maximum_principle
from .graph import Graph, GraphError, diameter, parse_family, read_graph, write_graph
from .isoperimetry import EXACT, HEURISTIC, GateError, L_v, ball_profile, band_count, cheeger, r_n
from .report import Report
from .walks import commute_time, exact_hitting, simulate_hitting, tau_star

RANDOMIZED = {"simulate", "percolation", "perc-boundary", "constant-sweep"}


class UsageError(Exception):
    pass


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A,B got {text!r}") from None
    return a, b


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _common(p: argparse.ArgumentParser, graph: bool = True) -> None:
    if graph:
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--family", help="family spec NAME:ARGS, e.g. circulant:16,1,3; 'A+B' for a disjoint union")
        src.add_argument("--input", type=Path, help="graph file ('V E' header then 'u v m' lines)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isoresist", description="Effective resistance and isoperimetric bounds on finite graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help: str, graph: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        _common(p, graph)
        return p

    p = add("generate", "write a generated graph in the text format")
    p = add("resistance", "effective resistance between two vertices")
    p.add_argument("--pair", type=_pair, required=True)
    p = add("voltages", "battery voltages, current and low-voltage level sets")
    p.add_argument("--pair", type=_pair, required=True, help="W,U with V(W)=1, V(U)=0")
    for name, help in (("lbound", "band sum L_v"), ("rn", "band minima of the boundary")):
        p = add(name, help)
        p.add_argument("--vertex", type=int, required=True)
        p.add_argument("--mode", choices=(EXACT, HEURISTIC), default=EXACT)
        p.add_argument("--override-gate", action="store_true")
    p = add("cheeger", "vertex Cheeger constant")
    p.add_argument("--mode", choices=(EXACT, HEURISTIC), default=EXACT)
    p = add("balls", "breadth-first ball profile")
    p.add_argument("--vertex", type=int, required=True)
    p = add("commute", "exact commute time and the resistance identity")
    p.add_argument("--pair", type=_pair, required=True)
    p = add("tau-star", "maximal commute time")
    p.add_argument("--pair-budget", type=int, default=32)
    p = add("simulate", "Monte Carlo hitting time")
    p.add_argument("--pair", type=_pair, required=True, help="V,U: start V, target U")
    p.add_argument("--trials", type=int, default=10000)
    p = add("verify-theorem", "ratios R/(L_w+L_u)")
    p.add_argument("--pair", type=_pair, action="append", help="repeatable; default all pairs")
    p.add_argument("--mode", choices=(EXACT, HEURISTIC), default=EXACT)
    add("constant-sweep", "empirical constant across the exact corpus", graph=False)
    p = add("falsify-band", "shrunken-band counterexample", graph=False)
    p.add_argument("--ms", type=_int_list, default=[4, 8, 16])
    p = add("layered-scaling", "resistance scaling of the layered example", graph=False)
    p.add_argument("--n-list", type=_int_list, default=[4, 8, 16, 32])
    p = add("multiedge-scaling", "tau* scaling on multi-edge cycles", graph=False)
    p.add_argument("--n-list", type=_int_list, default=[16, 32, 64, 128, 256])
    p.add_argument("--pair-budget", type=int, default=32)
    p = add("percolation", "resistance on the largest percolation cluster", graph=False)
    p.add_argument("--n", type=_int_list, required=True, help="box side(s), comma-separated")
    p.add_argument("--p", type=float, default=0.7)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--pair-budget", type=int, default=32)
    p = add("perc-boundary", "boundary-to-sqrt-size probe on the largest cluster", graph=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.7)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--size-floor", type=int, default=None)
    p.add_argument("--floor-constant", type=float, default=7.0)
    p = add("conj1", "isoperimetric probe on a vertex-transitive graph")
    p.add_argument("--mode", choices=(EXACT, HEURISTIC), default=None)
    p = add("conj2", "resistance versus diam^2 log|G| / |G|")
    p.add_argument("--pair-budget", type=int, default=32)
    return parser


def load_graph(args) -> tuple[Graph, str]:
    if getattr(args, "family", None):
        try:
            return parse_family(args.family), args.family
        except GraphError as exc:
            raise UsageError(str(exc)) from None
    try:
        text = args.input.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    try:
        return read_graph(text), str(args.input)
    except GraphError as exc:
        raise UsageError(f"{args.input}: {exc}") from None


def _pairs_ok(G: Graph, *vs: int) -> None:
    for v in vs:
        if not 0 <= v < G.vertex_count:
            raise UsageError(f"vertex {v} out of range for {G.vertex_count} vertices")


def run_command(args) -> Report | str:
    cmd = args.command
    seed = args.seed if args.seed is not None else 0
    tol = args.tolerance
    config = {"seed": seed, "tolerance": tol}
    if cmd == "constant-sweep":
        return ex.constant_sweep(seed=seed, tolerance=tol)
    if cmd == "falsify-band":
        return ex.falsify_modified_band(args.ms, tol)
    if cmd == "layered-scaling":
        return ex.layered_scaling(args.n_list, tol)
    if cmd == "multiedge-scaling":
        return ex.multi_edge_tau_scaling(args.n_list, args.pair_budget, seed, tol)
    if cmd == "percolation":
        return perc.percolation_resistance(args.n, args.p, seed, args.trials, args.pair_budget)
    if cmd == "perc-boundary":
        return perc.percolation_boundary_probe(args.n, args.p, seed, args.trial, args.size_floor, args.floor_constant)

    G, label = load_graph(args)
    config["graph"] = label
    if getattr(args, "vertex", None) is not None:
        _pairs_ok(G, args.vertex)
    t0 = time.perf_counter()
    if cmd == "generate":
        return write_graph(G)
    if cmd == "resistance":
        w, u = args.pair
        _pairs_ok(G, w, u)
        config["pair"] = [w, u]
        results = {"resistance": effective_resistance(G, w, u, tol)}
    elif cmd == "voltages":
        w, u = args.pair
        _pairs_ok(G, w, u)
        config["pair"] = [w, u]
        profile = solve_voltages(G, w, u, tol)
        order = level_order(profile, G)
        ok, witness = check_maximum_principle(profile, G)
        results = {
            **profile.to_dict(),
            "resistance": profile.resistance,
            "level_order": list(order.order),
            "theta": list(order.thetas),
            "level_anomalies": list(order.anomalies),
            "maximum_principle": ok,
            "maximum_principle_witness": witness,
        }
    elif cmd == "lbound":
        config.update(vertex=args.vertex, mode=args.mode)
        results = L_v(G, args.vertex, args.mode, override=args.override_gate).to_dict()
    elif cmd == "rn":
        config.update(vertex=args.vertex, mode=args.mode)
        bands = []
        for n in range(1, band_count(G.vertex_count) + 1):
            m = r_n(G, args.vertex, n, args.mode, override=args.override_gate)
            bands.append({
                "n": n,
                "band": list(m.band),
                "r_n": m.value,
                "witness": list(m.witness.members) if m.witness is not None else None,
            })
        results = {"u": args.vertex, "mode": args.mode, "bands": bands}
    elif cmd == "cheeger":
        config["mode"] = args.mode
        value, witness = cheeger(G, args.mode)
        results = {"cheeger": value, "witness": list(witness.members), "mode": args.mode}
    elif cmd == "balls":
        config["vertex"] = args.vertex
        prof = ball_profile(G, args.vertex)
        results = {"balls": [{"radius": r, "size": s, "boundary": b} for r, s, b in prof]}
    elif cmd == "commute":
        v, u = args.pair
        _pairs_ok(G, v, u)
        config["pair"] = [v, u]
        c = commute_time(G, v, u, tol)
        R = effective_resistance(G, v, u, tol)
        n_comp = len(G.component_of(v))
        results = {
            "pair": [v, u],
            "commute": c,
            "resistance": R,
            "identity_gap": abs(c - n_comp * R) if math.isfinite(c) else None,
            "hitting_v_to_u": float(exact_hitting(G, u, tol).values[v]),
        }
    elif cmd == "tau-star":
        config["pair_budget"] = args.pair_budget
        ts = tau_star(G, tol, args.pair_budget, seed)
        results = {"tau_star": ts.value, "pair": list(ts.pair), "flag": ts.flag, "pairs_examined": ts.pairs_examined}
    elif cmd == "simulate":
        v, u = args.pair
        _pairs_ok(G, v, u)
        config.update(pair=[v, u], trials=args.trials)
        sim = simulate_hitting(G, v, u, seed, args.trials)
        exact = float(exact_hitting(G, u, tol).values[v])
        results = {
            "pair": [v, u],
            "trials": sim.trials,
            "seed": seed,
            "mean": sim.mean,
            "stderr": sim.stderr,
            "exact": exact,
            "z": (sim.mean - exact) / sim.stderr if sim.stderr > 0 else None,
        }
    elif cmd == "verify-theorem":
        pairs = args.pair if args.pair else None
        return ex.verify_theorem(G, pairs, args.mode, tol)
    elif cmd == "conj1":
        return ex.conjecture1_probe(G, label, args.mode)
    elif cmd == "conj2":
        return ex.conjecture2_probe(G, label, args.pair_budget, seed)
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(f"unknown command {cmd}")
    return Report(cmd, config, results, [], time.perf_counter() - t0)


def emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        out.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command in RANDOMIZED and args.seed is None:
        print(f"isoresist {args.command}: --seed is required", file=sys.stderr)
        return 2
    try:
        result = run_command(args)
    except UsageError as exc:
        print(f"isoresist {args.command}: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, GateError, GraphError, ValueError, RuntimeError) as exc:
        err = {"type": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ConvergenceError):
            err["residual"] = exc.residual
        report = Report(args.command, {"argv": list(argv) if argv is not None else sys.argv[1:]}, {}, error=err)
        emit(report.to_json(), args.out)
        print(f"isoresist {args.command}: {exc}", file=sys.stderr)
        return 1
    if isinstance(result, str):
        emit(result, args.out)
    else:
        emit(result.to_csv() if args.format == "csv" else result.to_json(), args.out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
