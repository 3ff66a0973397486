import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpdetect import Labeling, brute_force_qcp, build_network, delta_qcp, detect_kmer, plant_cp_network, qcp, sample_er

from conftest import random_graphs


def one_pair_all_core(net):
    n = net.n_nodes
    return Labeling(net.node_ids, np.ones(n, int), np.ones(n, bool))


def singletons(net):
    n = net.n_nodes
    return Labeling(net.node_ids, np.arange(1, n + 1), np.ones(n, bool))


def star_labeling(star):
    return Labeling.from_mappings({v: 1 for v in "abcd"}, {"a": 0, "b": 0, "c": 1, "d": 0}, star)


def dyad_sum_qcp(lab, net):
    """Oracle: literal double loop over dyads."""
    lab = lab.aligned(net)
    rho = net.n_edges / (net.n_nodes * (net.n_nodes - 1) / 2)
    total = 0.0
    for i in range(net.n_nodes):
        for j in range(i):
            if lab.pairs[i] != lab.pairs[j]:
                continue
            xi, xj = int(lab.core[i]), int(lab.core[j])
            total += (int(net.adjacency[i, j]) - rho) * (xi + xj - xi * xj)
    return total


def test_trivial_labelings_are_zero(star):
    assert qcp(one_pair_all_core(star), star) == pytest.approx(0.0, abs=1e-12)
    assert qcp(singletons(star), star) == 0.0


def test_star_value(star):
    assert qcp(star_labeling(star), star) == pytest.approx(1.5, abs=1e-12)


def test_missing_node(star):
    lab = Labeling(("a", "b", "c"), [1, 1, 1], [1, 0, 0])
    with pytest.raises(KeyError):
        qcp(lab, star)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 9), st.data())
def test_qcp_matches_dyad_sum(n, data):
    m = data.draw(st.integers(0, n * (n - 1) // 2))
    net = sample_er(n, m, seed=data.draw(st.integers(0, 2**32)))
    pairs = data.draw(st.lists(st.integers(1, 3), min_size=n, max_size=n))
    core = data.draw(st.lists(st.booleans(), min_size=n, max_size=n))
    lab = Labeling(net.node_ids, pairs, core)
    assert qcp(lab, net) == pytest.approx(dyad_sum_qcp(lab, net), abs=1e-10)


def test_delta_identity_move(star):
    lab = star_labeling(star)
    assert delta_qcp(lab, star, "a", lab.pair_index["a"], 0) == 0.0


def test_delta_star_leaf_joins_center(star):
    lab = Labeling(star.node_ids, [1, 2, 3, 4], [1, 1, 1, 1])
    center_pair = lab.pair_index["c"]
    assert delta_qcp(lab, star, "a", center_pair, 0) == pytest.approx(0.5, abs=1e-12)


def test_delta_fresh_pair(star):
    lab = star_labeling(star)
    moved = Labeling(star.node_ids, [2, 1, 1, 1], lab.core)
    assert delta_qcp(lab, star, "a", 9, 1) == pytest.approx(qcp(moved, star) - qcp(lab, star), abs=1e-12)


def test_detect_star(star):
    lab = detect_kmer(star, runs=10, seed=0)
    assert lab.same_structure(star_labeling(star))
    assert lab.q_value == pytest.approx(1.5)
    assert lab.algorithm == "km-er"


def test_detect_two_disjoint_pairs():
    planted = plant_cp_network([(3, 7, 1.0, 1.0, 0.0), (2, 6, 1.0, 1.0, 0.0)], seed=1)
    lab = detect_kmer(planted.network, runs=10, seed=0)
    assert lab.pair_count == 2
    assert lab.same_structure(planted.truth)
    assert lab.q_value == pytest.approx(qcp(planted.truth, planted.network))


def test_detect_is_deterministic():
    net = sample_er(40, 120, seed=3)
    a, b = detect_kmer(net, runs=4, seed=7), detect_kmer(net, runs=4, seed=7)
    assert np.array_equal(a.pairs, b.pairs) and np.array_equal(a.core, b.core)
    assert a.q_value == b.q_value


def test_callback_sees_increasing_quality():
    net = sample_er(30, 70, seed=4)
    seen = {}
    detect_kmer(net, runs=3, seed=0, check=True, callback=lambda r, q: seen.setdefault(r, []).append(q))
    assert set(seen) == {0, 1, 2}
    for qs in seen.values():
        assert all(b > a for a, b in zip(qs, qs[1:]))


def test_reported_quality_is_exact():
    for net in random_graphs(10, n=12, m_range=(10, 30), base=300):
        lab = detect_kmer(net, runs=3, seed=1)
        assert lab.q_value == pytest.approx(qcp(lab, net), abs=1e-10)


def test_never_beats_oracle():
    for net in random_graphs(10, base=500):
        _, q_star = brute_force_qcp(net)
        assert detect_kmer(net, runs=5, seed=0).q_value <= q_star + 1e-12


def test_bad_arguments():
    with pytest.raises(ValueError):
        detect_kmer(build_network([("a", "b")]), runs=0)
