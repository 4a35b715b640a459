import json
import math

import pytest

from isoresist import graph as g
from isoresist.experiments import (
    conjecture1_probe,
    conjecture2_probe,
    constant_sweep,
    corpus_pairs,
    falsify_modified_band,
    fit_power_law,
    layered_scaling,
    multi_edge_tau_scaling,
    sweep_corpus,
    verify_theorem,
)
from isoresist.report import Report, from_json_number, jsonable


def test_fit_power_law_recovers_exponent():
    xs = [2, 4, 8, 16]
    fit = fit_power_law(xs, [3 * x**-1.5 for x in xs])
    assert fit["exponent"] == pytest.approx(-1.5)
    assert fit["log_prefactor"] == pytest.approx(math.log(3))
    assert fit["r2"] == pytest.approx(1.0)


def test_verify_theorem_examples():
    r = verify_theorem(g.path(2), [(0, 1)])
    rec = r.trials[0]
    assert rec["R"] == pytest.approx(1.0) and rec["L_w"] + rec["L_u"] == 4.0
    assert rec["ratio"] == pytest.approx(0.25)
    r = verify_theorem(g.path(4), [(0, 3)])
    assert r.trials[0]["L_w"] + r.trials[0]["L_u"] == 10.0
    assert r.trials[0]["ratio"] == pytest.approx(0.3)
    r = verify_theorem(g.disjoint_union(g.complete(4), g.complete(4)), [(0, 4)])
    assert r.trials[0]["flag"] == "both infinite"
    assert r.results["both_infinite"] == 1 and r.results["violations"] == 0


def test_verify_theorem_all_pairs_default():
    r = verify_theorem(g.cycle(6))
    assert r.results["pairs"] == 15
    assert all(math.isfinite(t["ratio"]) for t in r.trials)


def test_sweep_corpus_within_gate():
    corpus = sweep_corpus(0)
    assert all(2 <= G.vertex_count <= 18 and G.is_connected() for _, _, G in corpus)
    families = {f for f, _, _ in corpus}
    assert {"path", "complete", "cycle", "hypercube", "layered_example", "random_connected"} <= families


def test_corpus_pairs():
    assert len(corpus_pairs(g.path(10), 0)) == 45
    pairs = corpus_pairs(g.path(15), 0)
    assert (0, 14) in pairs and len(pairs) == 21
    assert corpus_pairs(g.path(15), 0) == pairs


def test_constant_sweep_on_small_corpus():
    corpus = [(f, lab, G) for f, lab, G in sweep_corpus(0) if f in ("path", "complete") and G.vertex_count <= 8]
    r = constant_sweep(corpus, seed=0)
    assert r.results["all_ratios_finite"]
    per = r.results["C_hat_per_family"]
    # complete graphs: R = 2/n against bands of size ~n/2 with boundary ~n/2
    assert per["complete"] < per["path"]
    assert r.results["C_hat_overall"] == max(per.values())


def test_falsify_modified_band():
    r = falsify_modified_band((4, 8))
    m4, m8 = r.trials
    assert m4["R"] == math.inf and m8["R"] == math.inf
    assert m4["modified_L_w"] == 4.0 and m4["modified_L_u"] == 4.0
    assert m4["unmodified_L_w"] == math.inf and m4["unmodified_L_u"] == math.inf
    assert math.isfinite(m8["modified_total"])
    assert r.results["all_falsified"]


def test_layered_scaling_small():
    r = layered_scaling((1, 2, 3))
    for rec in r.trials:
        n = rec["n"]
        assert rec["R"] == pytest.approx(2 / n + 2 / n**3, rel=1e-9)
        assert rec["sigma_exact"] >= rec["sigma"] - 1e-12


def test_layered_sigma_decays_faster_than_resistance():
    r = layered_scaling((4, 8, 16))
    assert r.results["sigma_fit"]["exponent"] <= -1.5
    assert -1.15 <= r.results["R_fit"]["exponent"] <= -0.85


def test_multi_edge_small():
    r = multi_edge_tau_scaling((8, 16, 32))
    for rec in r.trials:
        assert rec["identity_gap"] <= 1e-6 * rec["n"]
        assert rec["arc_hypothesis_holds"]
        assert rec["tau_flag"] == "exact"
    assert r.results["tau_over_n_strictly_increasing"]


def test_multi_edge_rejects_odd():
    with pytest.raises(ValueError):
        multi_edge_tau_scaling((9,))


def test_conjecture1_probe_examples():
    r = conjecture1_probe(g.cycle(16))
    assert r.results["alpha"] == pytest.approx(0.75)
    assert r.results["min_ratio"] == pytest.approx(2 / 8**0.25)
    assert r.results["witness_size"] == 8
    assert conjecture1_probe(g.complete(8)).results["min_ratio"] == pytest.approx(1.0)
    assert conjecture1_probe(g.hypercube(4)).results["mode"] == "exact"
    assert conjecture1_probe(g.torus2d(6)).results["upper_bound"]


def test_conjecture2_probe_examples():
    r = conjecture2_probe(g.cycle(64)).results
    assert r["max_R"] == pytest.approx(16.0) and r["bound_term"] == pytest.approx(96.0)
    assert r["gap"] < 0
    r = conjecture2_probe(g.complete(16)).results
    assert r["max_R"] == pytest.approx(0.125) and r["bound_term"] == pytest.approx(0.25)
    r = conjecture2_probe(g.torus2d(16)).results
    assert r["R_exact_max"] and r["max_R"] > 0


def test_report_round_trip():
    rep = Report("x", {"a": 1}, {"v": math.inf, "w": [math.inf, 1.0], "n": {"k": -math.inf}}, [{"t": 1}], 0.5)
    data = json.loads(rep.to_json())
    assert data["results"]["v"] == "inf" and data["results"]["n"]["k"] == "-inf"
    assert from_json_number(data["results"]["v"]) == math.inf
    assert "wall_time" in data and "wall_time" not in rep.body_json()
    assert rep.summary_fields() == {"v": "inf", "n.k": "-inf"}
    assert jsonable({"z": (1, 2)}) == {"z": [1, 2]}
    assert jsonable(math.nan) == "nan"
    with pytest.raises(TypeError):
        jsonable(object())
