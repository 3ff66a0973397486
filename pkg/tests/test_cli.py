import json
import subprocess
import sys
from itertools import combinations
from pathlib import Path

import pytest

from cpdetect.cli import main

TRADE_HEADER = "timestamp,lender,borrower,amount\n"


def tree(root: Path) -> dict[str, bytes]:
    return {str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def write(path: Path, text: str) -> Path:
    path.write_text(text)
    return path


@pytest.fixture
def trades(tmp_path):
    return write(
        tmp_path / "trades.csv",
        TRADE_HEADER
        + "2000-01-05T10:00:00,A,B,1.0\n"
        + "2000-02-01T10:00:00,B,C,2.0\n"
        + "2000-04-02T10:00:00,C,A,3.0\n"
        + "2000-04-03T10:00:00,C,D,3.0\n",
    )


def test_aggregate_static_single_trade(tmp_path):
    csv_path = write(tmp_path / "one.csv", TRADE_HEADER + "2000-01-05T10:00:00,A,B,1\n")
    assert main(["aggregate", "--input", str(csv_path), "--scale", "static", "--out", str(tmp_path / "s")]) == 0
    assert main(["aggregate", "--input", str(csv_path), "--scale", "day", "--out", str(tmp_path / "d")]) == 0
    manifest = (tmp_path / "s" / "manifest.csv").read_text().splitlines()
    assert manifest[1] == "static,2000-01-05,2000-01-05,2,1"
    static_edges = (tmp_path / "s" / "static_static.edges").read_bytes()
    assert static_edges == (tmp_path / "d" / "day_2000-01-05.edges").read_bytes()


def test_aggregate_quarter_labels(tmp_path, trades):
    assert main(["aggregate", "--input", str(trades), "--scale", "quarter", "--out", str(tmp_path / "q")]) == 0
    rows = (tmp_path / "q" / "manifest.csv").read_text().splitlines()[1:]
    assert [r.split(",")[0] for r in rows] == ["2000-Q1", "2000-Q2"]


def test_exit_codes(tmp_path):
    bad = write(tmp_path / "bad.csv", TRADE_HEADER + "2000-01-05,A,B,-5\n")
    assert main(["aggregate", "--input", str(bad), "--scale", "day", "--out", str(tmp_path / "o")]) == 2
    assert main(["aggregate", "--input", str(bad), "--scale", "day", "--out", str(tmp_path / "o"), "--lenient"]) == 4
    assert main(["aggregate", "--input", str(tmp_path / "missing.csv"), "--scale", "day", "--out", str(tmp_path / "o")]) == 3
    with pytest.raises(SystemExit) as info:
        main(["aggregate", "--scale", "day"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["detect", "--algorithm", "louvain", "--in", "x", "--out", "y"])
    assert info.value.code == 1
    assert main(["test", "--samples", "10", "--in", "x", "--out", "y"]) == 1


def test_oracle_size_limit(tmp_path):
    big = write(tmp_path / "big.edges", "".join(f"n{i} n{i + 1}\n" for i in range(10)))
    assert main(["oracle", "--in", str(big)]) == 4


def test_oracle_star(tmp_path):
    star = write(tmp_path / "star.edges", "c a\nc b\nc d\n")
    out = tmp_path / "star.oracle.json"
    assert main(["oracle", "--in", str(star), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["q_value"] == pytest.approx(1.5)
    assert [n["id"] for n in doc["nodes"] if n["core"]] == ["c"]


def test_detect_skips_complete_graph(tmp_path):
    net_dir = tmp_path / "nets"
    net_dir.mkdir()
    write(net_dir / "k5.edges", "".join(f"{a} {b}\n" for a, b in combinations("abcde", 2)))
    assert main(["detect", "--algorithm", "be", "--in", str(net_dir), "--out", str(tmp_path / "lab")]) == 0
    skip = json.loads((tmp_path / "lab" / "k5.skip.json").read_text())
    assert skip["reason"] == "constant adjacency" and skip["skipped"] is True
    assert not (tmp_path / "lab" / "k5.labeling.json").exists()


def test_detect_kmer_recovers_generated_fixture(tmp_path):
    config = write(tmp_path / "cfg.json", json.dumps({"mode": "network", "pairs": [[3, 7, 1, 1, 0], [2, 6, 1, 1, 0]]}))
    gen = tmp_path / "gen"
    assert main(["generate", "--config", str(config), "--seed", "1", "--out", str(gen)]) == 0
    assert main(["detect", "--algorithm", "kmer", "--in", str(gen / "network.edges"), "--out", str(tmp_path / "lab")]) == 0
    found = json.loads((tmp_path / "lab" / "network.labeling.json").read_text())
    truth = json.loads((gen / "truth.json").read_text())
    assert max(n["pair"] for n in found["nodes"]) == max(n["pair"] for n in truth["nodes"]) == 2
    assert found["schema"] == 1 and found["algorithm"] == "km-er"


def test_generate_bad_config(tmp_path):
    assert main(["generate", "--config", str(write(tmp_path / "a.json", "{not json")), "--out", str(tmp_path)]) == 2
    assert main(["generate", "--config", str(write(tmp_path / "b.json", '{"mode": "network"}')), "--out", str(tmp_path)]) == 2
    assert main(["generate", "--config", str(tmp_path / "none.json"), "--out", str(tmp_path)]) == 3


def test_metrics_requires_labelings(tmp_path):
    (tmp_path / "empty").mkdir()
    assert main(["metrics", "--in", str(tmp_path / "empty"), "--out", str(tmp_path / "m")]) == 1


def run_pipeline(work: Path, config: Path) -> None:
    attrs = write(work / "attrs.csv", "node_id,attribute\n")
    steps = [
        ["generate", "--config", str(config), "--seed", "7", "--out", str(work / "gen")],
        ["aggregate", "--input", str(work / "gen" / "transactions.csv"), "--scale", "quarter", "--out", str(work / "net")],
        ["detect", "--algorithm", "kmer", "--seed", "3", "--in", str(work / "net"), "--out", str(work / "kmer")],
        ["detect", "--algorithm", "be", "--restarts", "5", "--seed", "3", "--in", str(work / "net"), "--out", str(work / "be")],
        ["detect", "--algorithm", "minres", "--in", str(work / "net"), "--out", str(work / "minres")],
        ["test", "--samples", "100", "--seed", "2", "--in", str(work / "kmer"), "--networks", str(work / "net"), "--out", str(work / "sig")],
    ]
    for argv in steps:
        assert main(argv) == 0, argv
    nodes = set()
    for f in (work / "net").glob("*.edges"):
        nodes |= set(f.read_text().split())
    attrs.write_text("node_id,attribute\n" + "".join(f"{v},{'IT' if int(v[1:]) % 2 else 'FR'}\n" for v in sorted(nodes)))
    assert main(["metrics", "--in", str(work / "sig"), "--networks", str(work / "net"), "--attributes", str(attrs),
                 "--out", str(work / "metrics")]) == 0
    assert main(["oracle", "--in", str(work / "small.edges"), "--out", str(work / "oracle.json")]) == 0


def test_pipeline_is_byte_deterministic(tmp_path):
    config = write(tmp_path / "cfg.json", json.dumps({
        "mode": "transactions", "windows": 3, "scale": "quarter",
        "regimes": [{"pairs": [[4, 8, 0.9, 0.5, 0.05]]}, {"start": 2, "pairs": [[4, 8, 0.2, 0.6, 0.05]]}],
    }))
    outputs = []
    for name in ("run1", "run2"):
        work = tmp_path / name
        work.mkdir()
        write(work / "small.edges", "a b\nb c\nc d\nd a\na c\ne a\n")
        run_pipeline(work, config)
        outputs.append(tree(work))
    assert outputs[0] == outputs[1]
    files = outputs[0]
    assert "metrics/metrics.csv" in files and "metrics/alluvial.csv" in files and "metrics/jaccard.csv" in files
    assert "metrics/attributes.csv" in files and "metrics/pair_counts.csv" in files
    assert any(f.startswith("sig/") and f.endswith(".significance.json") for f in files)
    header = files["metrics/metrics.csv"].decode().splitlines()[0]
    assert header == "window,k,n_core,n_periphery,rho_cc,rho_cp,rho_pp,class,significant"


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "cpdetect.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "aggregate" in proc.stdout
