"""``cpdetect`` command line: aggregate, detect, test, metrics, generate, oracle.

Exit codes: 0 success, 1 usage, 2 parse error, 3 I/O error, 4 domain
precondition (e.g. network too large for the exhaustive oracle).
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from datetime import date
from pathlib import Path

import numpy as np

from . import metrics as mt
from .be import detect_be, default_restarts
from .graph import DegenerateNetworkError, Network, read_attributes, read_edge_list, write_edge_list
from .kmer import detect_kmer
from .labeling import Labeling, labeling_from_json, labeling_to_json
from .minres import detect_minres
from .significance import report_to_json, test_significance
from .synth import OracleSizeError, brute_force_qcp, plant_cp_network, synth_transactions
from .temporal import SCALES, TransactionParseError, aggregate, parse_transactions, write_series, write_transactions

log = logging.getLogger("cpdetect")

EXIT_USAGE, EXIT_PARSE, EXIT_IO, EXIT_DOMAIN = 1, 2, 3, 4


class UsageError(Exception):
    pass


class ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _csv_text(header, rows) -> str:
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "" if np.isnan(x) else repr(x)
    return str(x)


def _edge_files(path: Path) -> list[Path]:
    """Edge-list files of a directory, in manifest order when a manifest exists."""
    if path.is_file():
        return [path]
    if not path.is_dir():
        raise FileNotFoundError(f"no such file or directory: {path}")
    files = sorted(path.glob("*.edges"))
    manifest = path / "manifest.csv"
    if manifest.exists():
        with open(manifest, newline="") as fh:
            labels = [row["window_label"] for row in csv.DictReader(fh)]
        rank = {}
        for i, lab in enumerate(labels):
            for f in files:
                if f.stem.split("_", 1)[-1] == lab:
                    rank.setdefault(f.stem, i)
        files.sort(key=lambda f: (rank.get(f.stem, len(rank)), f.stem))
    return files


def _load_network(path: Path, attributes=None) -> Network:
    try:
        return read_edge_list(path, attributes)
    except DegenerateNetworkError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def cmd_aggregate(args) -> int:
    with open(args.input, newline="") as fh:
        try:
            tlog = parse_transactions(fh, lenient=args.lenient)
        except TransactionParseError as exc:
            raise ParseError(str(exc)) from exc
    series = aggregate(tlog, args.scale)
    write_series(series, args.out)
    print(f"wrote {len(series)} window(s) to {args.out}")
    return 0


def _detect_one(net: Network, args) -> Labeling:
    if args.algorithm == "be":
        restarts = args.restarts if args.restarts is not None else default_restarts(net.n_nodes)
        return detect_be(net, restarts, args.seed).to_labeling(net)
    if args.algorithm == "minres":
        return detect_minres(net).to_labeling(net)
    return detect_kmer(net, args.runs, args.seed)


def cmd_detect(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for f in _edge_files(Path(args.input)):
        window = f.stem
        net = _load_network(f)
        try:
            lab = _detect_one(net, args)
        except DegenerateNetworkError as exc:
            reason = str(exc)
            log.warning("skipping %s: %s", window, reason)
            doc = {"schema": 1, "window": window, "algorithm": args.algorithm, "seed": args.seed,
                   "skipped": True, "reason": reason}
            _write(out / f"{window}.skip.json", json.dumps(doc, indent=2) + "\n")
            continue
        _write(out / f"{window}.labeling.json", labeling_to_json(lab, window, args.seed))
    return 0


def _labelings(path: Path) -> list[tuple[str, Labeling, dict]]:
    if path.is_file():
        files = [path]
    elif path.is_dir():
        files = sorted(path.glob("*.labeling.json"))
    else:
        raise FileNotFoundError(f"no such file or directory: {path}")
    if not files:
        raise UsageError(f"no labeling files in {path}")
    out = []
    for f in files:
        try:
            lab, header = labeling_from_json(f.read_text())
        except (ValueError, KeyError) as exc:
            raise ParseError(f"{f}: {exc}") from exc
        out.append((header.get("window") or f.name.removesuffix(".labeling.json"), lab, header))
    return out


def _network_for(window: str, net_dir: Path, attributes=None) -> Network:
    f = net_dir / f"{window}.edges"
    if not f.exists():
        raise FileNotFoundError(f"network file for window {window!r} not found: {f}")
    return _load_network(f, attributes)


def _ordered(items, net_dir: Path):
    order = {f.stem: i for i, f in enumerate(_edge_files(net_dir))} if net_dir.is_dir() else {}
    return sorted(items, key=lambda t: (order.get(t[0], len(order)), t[0]))


def cmd_test(args) -> int:
    out = Path(args.out)
    net_dir = Path(args.networks or args.input)
    for window, lab, header in _labelings(Path(args.input)):
        net = _network_for(window, net_dir)
        report = test_significance(lab, net, args.samples, args.alpha, args.null, args.seed,
                                   quality_mode=args.quality)
        _write(out / f"{window}.significance.json", report_to_json(report))
        _write(out / f"{window}.labeling.json", labeling_to_json(report.labeling, window, header.get("seed")))
    return 0


def cmd_metrics(args) -> int:
    out = Path(args.out)
    net_dir = Path(args.networks or args.input)
    attrs = read_attributes(args.attributes) if args.attributes else None
    items = _ordered(_labelings(Path(args.input)), net_dir)
    rows, counts, attr_rows, cores, windows, flagged = [], [], [], [], [], []
    for window, lab, _ in items:
        net = _network_for(window, net_dir, attrs)
        lab = lab.aligned(net)
        windows.append(window)
        n_sig = 0
        for k in range(1, lab.pair_count + 1):
            d = mt.block_densities(lab, net, k)
            sig = lab.pair_significant(k)
            n_sig += bool(sig)
            rows.append([window, k, d.n_core, d.n_periphery, _fmt(d.rho_cc), _fmt(d.rho_cp), _fmt(d.rho_pp),
                         str(mt.classify_structure(d)), "" if sig is None else str(sig).lower()])
            if attrs is not None:
                for value, (fc, fp) in mt.attribute_fractions(lab, net, k).items():
                    attr_rows.append([window, k, value, _fmt(fc), _fmt(fp)])
        counts.append([window, lab.pair_count, n_sig if lab.significant is not None else ""])
        cores.append(lab.core_nodes(1))
        if lab.significant is None:
            lab = Labeling(lab.node_ids, lab.pairs, lab.core, lab.q_value,
                           np.ones(len(lab.node_ids), bool), lab.algorithm)
        flagged.append(lab)
    header = ["window", "k", "n_core", "n_periphery", "rho_cc", "rho_cp", "rho_pp", "class", "significant"]
    _write(out / "metrics.csv", _csv_text(header, rows))
    _write(out / "pair_counts.csv", _csv_text(["window", "n_pairs", "n_significant"], counts))
    jm = mt.jaccard_matrix(cores)
    _write(out / "jaccard.csv", _csv_text(["window"] + windows,
                                          [[w] + [_fmt(float(v)) for v in row] for w, row in zip(windows, jm)]))
    flows = []
    for (w0, l0), (w1, l1) in zip(zip(windows, flagged), zip(windows[1:], flagged[1:])):
        flows += [[w0, w1, a, b, c] for a, b, c in mt.alluvial_flows(l0, l1)]
    _write(out / "alluvial.csv", _csv_text(["window_from", "window_to", "group_from", "group_to", "count"], flows))
    if attrs is not None:
        _write(out / "attributes.csv",
               _csv_text(["window", "k", "attribute", "core_fraction", "periphery_fraction"], attr_rows))
    return 0


def cmd_generate(args) -> int:
    try:
        config = json.loads(Path(args.config).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{args.config}: {exc}") from exc
    if not isinstance(config, dict):
        raise ParseError(f"{args.config}: expected a JSON object")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        _generate(config, args.seed, out)
    except KeyError as exc:
        raise ParseError(f"{args.config}: missing key {exc}") from exc
    return 0


def _generate(config: dict, seed: int, out: Path) -> None:
    mode = config.get("mode", "network")
    if mode == "network":
        planted = plant_cp_network(config["pairs"], config.get("p_inter", 0.0), seed)
        write_edge_list(planted.network, out / "network.edges")
        _write(out / "truth.json", labeling_to_json(planted.truth, "network", seed))
        if planted.dropped:
            log.warning("dropped %d isolated node(s)", len(planted.dropped))
    elif mode == "transactions":
        start = date.fromisoformat(config.get("start", "2000-01-01"))
        syn = synth_transactions(config["windows"], config["scale"], config["regimes"], seed, start)
        with open(out / "transactions.csv", "w", newline="") as fh:
            write_transactions(syn.log, fh)
        for label, truth in syn.truth.items():
            window = f"{syn.scale}_{label}"
            _write(out / f"truth_{window}.json", labeling_to_json(truth, window, seed))
    else:
        raise UsageError(f"unknown generator mode {mode!r}")


def cmd_oracle(args) -> int:
    net = _load_network(Path(args.input))
    lab, _ = brute_force_qcp(net)
    text = labeling_to_json(lab, Path(args.input).stem, None)
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cpdetect", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("aggregate", help="bucket a trade CSV into windowed networks")
    a.add_argument("--input", required=True)
    a.add_argument("--scale", required=True, choices=SCALES)
    a.add_argument("--out", required=True)
    a.add_argument("--lenient", action="store_true", help="skip malformed rows instead of failing")
    a.set_defaults(func=cmd_aggregate)

    d = sub.add_parser("detect", help="detect core-periphery pairs in every window")
    d.add_argument("--algorithm", required=True, choices=["be", "minres", "kmer"])
    d.add_argument("--runs", type=int, default=10)
    d.add_argument("--restarts", type=int, default=None)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--in", dest="input", required=True)
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_detect)

    t = sub.add_parser("test", help="test pair significance against random graphs")
    t.add_argument("--samples", type=int, default=1000)
    t.add_argument("--alpha", type=float, default=0.05)
    t.add_argument("--null", choices=["pair", "full"], default="pair")
    t.add_argument("--quality", choices=["subgraph", "network"], default="subgraph")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--in", dest="input", required=True, help="labeling file or directory")
    t.add_argument("--networks", default=None, help="directory of .edges files (default: --in)")
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_test)

    m = sub.add_parser("metrics", help="block densities, Jaccard matrix and group flows")
    m.add_argument("--in", dest="input", required=True)
    m.add_argument("--networks", default=None, help="directory of .edges files (default: --in)")
    m.add_argument("--attributes", default=None)
    m.add_argument("--out", required=True)
    m.set_defaults(func=cmd_metrics)

    g = sub.add_parser("generate", help="planted network or synthetic trade log from a JSON config")
    g.add_argument("--config", required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    o = sub.add_parser("oracle", help="exhaustive optimum for a network with at most 9 nodes")
    o.add_argument("--in", dest="input", required=True)
    o.add_argument("--out", default=None)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    if getattr(args, "samples", 1000) < 100:
        print("cpdetect: error: --samples must be >= 100", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cpdetect: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"cpdetect: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"cpdetect: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (OracleSizeError, DegenerateNetworkError, ValueError, KeyError) as exc:
        print(f"cpdetect: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
