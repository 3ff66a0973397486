"""Acceptance criteria, each checked at its stated tolerance.

Every test records one PASS/FAIL line, listed together at the end of the
pytest run under "acceptance criteria".
"""
import json
import time

import numpy as np
import pytest

from cpdetect import (
    Labeling,
    StructureClass,
    aggregate,
    block_densities,
    brute_force_be,
    brute_force_qcp,
    classify_structure,
    delta_qcp,
    detect_be,
    detect_kmer,
    detect_minres,
    plant_cp_network,
    qcp,
    sample_er,
    sidak_alpha,
    synth_transactions,
    test_significance,
)

from conftest import random_graphs
from test_cli import run_pipeline, tree, write


def test_01_trivial_labelings(verdict):
    worst = 0.0
    for s in range(50):
        rng = np.random.default_rng(s)
        n = int(rng.integers(5, 40))
        net = sample_er(n, int(rng.integers(1, n * (n - 1) // 2)), rng)
        one = Labeling(net.node_ids, np.ones(n, int), np.ones(n, bool))
        single = Labeling(net.node_ids, np.arange(1, n + 1), np.ones(n, bool))
        worst = max(worst, abs(qcp(one, net)), abs(qcp(single, net)))
    assert verdict(1, worst <= 1e-12, f"max |qcp| over 50 graphs = {worst:.2e} (tol 1e-12)")


@pytest.fixture(scope="module")
def oracle_run():
    """Shared by criteria 2 and 3: KM-ER with full recomputation after every move."""
    start = time.perf_counter()
    kmer_match = kmer_exceed = be_match = moves = 0
    for s in range(100):
        rng = np.random.default_rng(s)
        net = sample_er(8, int(rng.integers(8, 21)), rng)
        _, q_star = brute_force_qcp(net)
        counter = []
        lab = detect_kmer(net, runs=10, seed=s, check=True, callback=lambda r, q: counter.append(q))
        moves += len(counter)
        kmer_exceed += lab.q_value > q_star + 1e-12
        kmer_match += abs(lab.q_value - q_star) <= 1e-12
        _, q_be = brute_force_be(net)
        be_match += abs(detect_be(net, restarts=50, seed=s).quality - q_be) <= 1e-12
    return dict(kmer_match=kmer_match, kmer_exceed=kmer_exceed, be_match=be_match, moves=moves,
                seconds=time.perf_counter() - start)


def test_02_oracle_equivalence(verdict, oracle_run):
    r = oracle_run
    ok = r["kmer_exceed"] == 0 and r["kmer_match"] >= 90 and r["be_match"] >= 95 and r["seconds"] < 300
    detail = (f"KM-ER matches {r['kmer_match']}/100 (>=90), exceeds {r['kmer_exceed']}; "
              f"BE matches {r['be_match']}/100 (>=95); {r['seconds']:.0f}s (<300s)")
    assert verdict(2, ok, detail)


def test_03_monotonicity(verdict, oracle_run):
    # check=True asserts after every committed move; more runs on larger graphs here
    moves = oracle_run["moves"]
    for net in random_graphs(20, n=40, m_range=(60, 200), base=900):
        seen = []
        detect_kmer(net, runs=10, seed=1, check=True, callback=lambda r, q: seen.append((r, q)))
        moves += len(seen)
        for (r0, q0), (r1, q1) in zip(seen, seen[1:]):
            assert r1 != r0 or q1 > q0
    assert verdict(3, True, f"{moves} committed moves, quality never decreased")


def test_04_incremental_delta(verdict):
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(3, 25))
        net = sample_er(n, int(rng.integers(0, n * (n - 1) // 2 + 1)), rng)
        lab = Labeling(net.node_ids, rng.integers(1, 5, n), rng.random(n) < 0.5, _canonical=False)
        i = int(rng.integers(n))
        new_pair = int(rng.integers(1, lab.pair_count + 2))
        new_core = bool(rng.random() < 0.5)
        pairs, core = lab.pairs.copy(), lab.core.copy()
        pairs[i], core[i] = new_pair, new_core
        moved = Labeling(net.node_ids, pairs, core, _canonical=False)
        d = delta_qcp(lab, net, net.node_ids[i], new_pair, new_core)
        worst = max(worst, abs(d - (qcp(moved, net) - qcp(lab, net))))
    assert verdict(4, worst <= 1e-10, f"max |delta - recompute| over 1000 moves = {worst:.2e} (tol 1e-10)")


def test_05_planted_recovery(verdict):
    dense = sparse = two = 0
    for s in range(20):
        p = plant_cp_network([(3, 7, 1.0, 1.0, 0.0)], seed=s)
        be_ok = detect_be(p.network, seed=s).to_labeling(p.network).same_structure(p.truth)
        mr_ok = detect_minres(p.network).to_labeling(p.network).same_structure(p.truth)
        dense += be_ok or mr_ok
        p = plant_cp_network([(5, 30, 1.0, 0.3, 0.0)], seed=s)
        sparse += detect_minres(p.network).to_labeling(p.network).same_structure(p.truth)
        p = plant_cp_network([(3, 7, 1.0, 1.0, 0.0), (2, 6, 1.0, 1.0, 0.0)], seed=s)
        two += detect_kmer(p.network, runs=10, seed=s).same_structure(p.truth)
    ok = dense == sparse == two == 20
    assert verdict(5, ok, f"dense pair (BE or MINRES) {dense}/20, sparse pair (MINRES) {sparse}/20, "
                          f"two pairs (KM-ER) {two}/20")


def test_06_sidak_constant(verdict):
    a = sidak_alpha(0.05, 4)
    assert verdict(6, abs(a - 0.012741) <= 1e-6, f"sidak_alpha(0.05, 4) = {a:.7f} (0.012741 +- 1e-6)")


def test_07_null_calibration(verdict):
    start = time.perf_counter()
    flagged = 0
    for r in range(200):
        net = sample_er(50, 200, np.random.default_rng(10_000 + r))
        lab = detect_be(net, restarts=10, seed=r).to_labeling(net)
        report = test_significance(lab, net, samples=500, alpha_prime=0.05, seed=r)
        flagged += report.pairs[0].significant
    seconds = time.perf_counter() - start
    ok = 4 <= flagged <= 16 and seconds < 600
    assert verdict(7, ok, f"{flagged}/200 significant (10 +- 6); {seconds:.0f}s (<600s)")


def test_08_classification(verdict):
    table_row = classify_structure((0.91, 0.57, 0.13))
    star = plant_cp_network([(1, 3, 0.0, 1.0, 0.0)], seed=0)
    d = block_densities(star.truth, star.network, 1)
    star_exact = (d.rho_cc, d.rho_cp, d.rho_pp) == (0.0, 1.0, 0.0)
    bip = plant_cp_network([(4, 10, 0.2, 0.9, 0.05)], seed=0)
    db = block_densities(bip.truth, bip.network, 1)
    ok = (table_row is StructureClass.STANDARD and star_exact and db.rho_cp > db.rho_cc
          and classify_structure(db) is StructureClass.BIPARTITE_LIKE)
    assert verdict(8, ok, f"(0.91,0.57,0.13) -> {table_row}; star densities "
                          f"({d.rho_cc}, {d.rho_cp}, {d.rho_pp}); planted bipartite-like -> {classify_structure(db)}")


def test_09_regime_switch(verdict):
    regimes = [
        {"start": 0, "pairs": [(8, 24, 0.9, 0.5, 0.05)]},
        {"start": 2, "pairs": [(8, 24, 0.2, 0.6, 0.05)]},
    ]
    hits = 0
    for s in range(20):
        synth = synth_transactions(4, "quarter", regimes, seed=s)
        series = aggregate(synth.log, "quarter")
        classes = []
        for w in series:
            lab = detect_kmer(w.network, runs=10, seed=s)
            classes.append(classify_structure(block_densities(lab, w.network, 1)))
        before, after = classes[:2], classes[2:]
        hits += (len(series) == 4 and all(c is StructureClass.STANDARD for c in before)
                 and all(c is StructureClass.BIPARTITE_LIKE for c in after))
    assert verdict(9, hits >= 18, f"standard before and bipartite-like after the switch in {hits}/20 seeds (>=18)")


def test_10_cli_determinism(verdict, tmp_path):
    config = write(tmp_path / "cfg.json", json.dumps({
        "mode": "transactions", "windows": 4, "scale": "quarter",
        "regimes": [{"pairs": [[6, 12, 0.9, 0.5, 0.05], [3, 5, 1.0, 0.8, 0.0]], "p_inter": 0.01},
                    {"start": 2, "pairs": [[6, 12, 0.2, 0.6, 0.05]]}],
    }))
    outputs = []
    for name in ("first", "second"):
        work = tmp_path / name
        work.mkdir()
        write(work / "small.edges", "a b\nb c\nc d\nd a\na c\ne a\nf e\n")
        run_pipeline(work, config)
        outputs.append(tree(work))
    same = outputs[0] == outputs[1]
    assert verdict(10, same, f"{len(outputs[0])} output files from generate, aggregate, detect x3, test, "
                             f"metrics, oracle; byte-identical on re-run: {same}")
