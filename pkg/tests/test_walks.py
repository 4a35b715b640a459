import itertools
import math

import numpy as np
import pytest

from isoresist import graph as g
from isoresist.electrical import GroundedSolver, effective_resistance
from isoresist.walks import (
    commute_time,
    discrete_commute_time,
    exact_hitting,
    simulate_hitting,
    tau_star,
)

from conftest import small_corpus


def test_hitting_examples():
    assert exact_hitting(g.path(2), 1).values[0] == pytest.approx(1.0)
    assert np.allclose(exact_hitting(g.path(3), 2).values, [3, 2, 0])
    for k in (1, 2, 5):
        assert exact_hitting(g.Graph(2, [(0, 1, k)]), 1).values[0] == pytest.approx(1 / k)


def test_hitting_off_component_is_infinite():
    U = g.disjoint_union(g.path(2), g.path(2))
    h = exact_hitting(U, 0).values
    assert h[1] == pytest.approx(1.0) and math.isinf(h[2]) and math.isinf(h[3])
    assert commute_time(U, 0, 3) == math.inf


def test_commute_examples():
    assert commute_time(g.path(3), 0, 2) == pytest.approx(6.0)
    assert commute_time(g.path(2), 0, 1) == pytest.approx(2.0)
    assert commute_time(g.Graph(2, [(0, 1, 4)]), 0, 1) == pytest.approx(0.5)


@pytest.mark.parametrize("name,G", small_corpus()[::2])
def test_commute_identity(name, G):
    N = G.vertex_count
    for v, u in itertools.combinations(range(N), 2):
        assert abs(commute_time(G, v, u) - N * effective_resistance(G, v, u)) <= 1e-9 * N


def test_discrete_identity_on_regular_graph():
    # on a d-regular simple graph the jump chain is the continuous walk slowed by d
    G = g.cycle(7)
    assert discrete_commute_time(G, 0, 3) == pytest.approx(2 * commute_time(G, 0, 3))


def test_tau_star_examples():
    t = tau_star(g.path(3))
    assert t.value == pytest.approx(6.0) and t.pair == (0, 2) and t.exact
    assert tau_star(g.complete(3)).value == pytest.approx(2.0)
    G = g.multi_edge_cycle(8)
    t = tau_star(G)
    Rmax = GroundedSolver(G, range(8)).all_pairs().max()
    assert t.value == pytest.approx(8 * Rmax, rel=1e-9)
    assert t.flag == "exact"


def test_tau_star_sampled_is_lower_bound():
    G = g.multi_edge_cycle(320)
    t = tau_star(G, pair_budget=8, seed=3)
    assert not t.exact and t.flag == "sampled lower bound"
    # antipodal pairs are maximal on a cycle, and the double sweep finds one
    k = g.ceil_two_thirds_power(320)
    assert t.value == pytest.approx(320 * (160 / k) / 2, rel=1e-8)
    assert tau_star(G, pair_budget=8, seed=3) == t


def test_simulation_examples():
    a = simulate_hitting(g.path(2), 0, 1, seed=11, trials=100_000)
    assert abs(a.mean - 1.0) <= 4 * a.stderr
    b = simulate_hitting(g.path(3), 0, 2, seed=12, trials=100_000)
    assert abs(b.mean - 3.0) <= 4 * b.stderr


def test_simulation_deterministic():
    a = simulate_hitting(g.cycle(6), 0, 3, seed=5, trials=3000)
    b = simulate_hitting(g.cycle(6), 0, 3, seed=5, trials=3000)
    assert a.mean == b.mean and a.stderr == b.stderr
    assert np.array_equal(a.samples, b.samples)
    c = simulate_hitting(g.cycle(6), 0, 3, seed=6, trials=3000)
    assert c.mean != a.mean


def test_simulation_prefix_is_stable():
    # blocks are simulated whole, so fewer trials give a prefix of the same stream
    a = simulate_hitting(g.cycle(6), 0, 3, seed=2, trials=500)
    b = simulate_hitting(g.cycle(6), 0, 3, seed=2, trials=2500)
    assert np.array_equal(a.samples, b.samples[:500])


def test_simulation_uses_multiplicity_rates():
    G = g.Graph(2, [(0, 1, 4)])
    r = simulate_hitting(G, 0, 1, seed=1, trials=50_000)
    assert abs(r.mean - 0.25) <= 4 * r.stderr
