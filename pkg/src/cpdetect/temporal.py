"""Transaction logs and their aggregation into windowed networks.

Windows follow calendar conventions: ISO weeks (Monday start), calendar
months and calendar quarters. ``static`` is one window over the whole log.
A bank appears in a window only if it traded in it.
"""
from __future__ import annotations

import csv
import io
import logging
import os
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from typing import Iterator, TextIO

from .graph import Network, build_network, write_edge_list

__all__ = [
    "SCALES",
    "TransactionRecord",
    "TransactionLog",
    "TransactionParseError",
    "Window",
    "WindowedNetworkSeries",
    "parse_transactions",
    "write_transactions",
    "window_of",
    "aggregate",
    "write_series",
]

log = logging.getLogger(__name__)

SCALES = ("static", "quarter", "month", "week", "day")
HEADER = ["timestamp", "lender", "borrower", "amount"]


class TransactionParseError(ValueError):
    """Malformed transaction input. ``problems`` lists ``(line, message)``."""

    def __init__(self, message: str, problems: list[tuple[int, str]] | None = None):
        self.problems = problems or []
        detail = "; ".join(f"line {n}: {m}" for n, m in self.problems)
        super().__init__(f"{message}: {detail}" if detail else message)


@dataclass(frozen=True)
class TransactionRecord:
    timestamp: datetime
    lender: str
    borrower: str
    amount: float
    line: int = 0


@dataclass(frozen=True)
class TransactionLog:
    records: tuple[TransactionRecord, ...]
    skipped: tuple[tuple[int, str], ...] = ()

    def __len__(self):
        return len(self.records)

    def __iter__(self) -> Iterator[TransactionRecord]:
        return iter(self.records)


def _parse_timestamp(text: str) -> datetime:
    text = text.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    return datetime.fromisoformat(text)


def _parse_row(row: list[str]) -> tuple[datetime, str, str, float]:
    if len(row) != 4:
        raise ValueError(f"expected 4 fields, got {len(row)}")
    ts_text, lender, borrower, amount_text = (c.strip() for c in row)
    try:
        ts = _parse_timestamp(ts_text)
    except ValueError:
        raise ValueError(f"bad timestamp {ts_text!r}") from None
    if not lender or not borrower:
        raise ValueError("empty lender or borrower")
    try:
        amount = float(amount_text)
    except ValueError:
        raise ValueError(f"bad amount {amount_text!r}") from None
    if not amount > 0 or amount == float("inf"):
        raise ValueError(f"amount must be positive, got {amount_text!r}")
    return ts, lender, borrower, amount


def parse_transactions(stream: TextIO | str, lenient: bool = False) -> TransactionLog:
    """Parse a ``timestamp,lender,borrower,amount`` CSV.

    Records keep file order. In strict mode any malformed row raises
    :class:`TransactionParseError` listing every offending line; with
    ``lenient=True`` such rows are skipped and listed in ``log.skipped``.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != HEADER:
        raise TransactionParseError(f"missing header {','.join(HEADER)}")
    records, problems = [], []
    for row in reader:
        line = reader.line_num
        if not row or not "".join(row).strip():
            continue
        try:
            ts, lender, borrower, amount = _parse_row(row)
        except ValueError as exc:
            problems.append((line, str(exc)))
            continue
        records.append(TransactionRecord(ts, lender, borrower, amount, line))
    if problems and not lenient:
        raise TransactionParseError(f"{len(problems)} malformed row(s)", problems)
    for line, msg in problems:
        log.warning("skipping line %d: %s", line, msg)
    return TransactionLog(tuple(records), tuple(problems))


def write_transactions(records, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(HEADER)
    for r in records:
        writer.writerow([r.timestamp.isoformat(), r.lender, r.borrower, repr(float(r.amount))])


def _quarter_start(d: date) -> date:
    return date(d.year, 3 * ((d.month - 1) // 3) + 1, 1)


def _add_months(d: date, months: int) -> date:
    y, m = divmod(d.month - 1 + months, 12)
    return date(d.year + y, m + 1, 1)


def window_of(ts: datetime | date, scale: str) -> tuple[str, date, date]:
    """Label, first day and last day (inclusive) of the window containing ``ts``."""
    d = ts.date() if isinstance(ts, datetime) else ts
    if scale == "day":
        return d.isoformat(), d, d
    if scale == "week":
        year, week, weekday = d.isocalendar()
        start = d - timedelta(days=weekday - 1)
        return f"{year}-W{week:02d}", start, start + timedelta(days=6)
    if scale == "month":
        start = date(d.year, d.month, 1)
        return f"{d.year}-{d.month:02d}", start, _add_months(start, 1) - timedelta(days=1)
    if scale == "quarter":
        start = _quarter_start(d)
        return f"{d.year}-Q{(d.month - 1) // 3 + 1}", start, _add_months(start, 3) - timedelta(days=1)
    raise ValueError(f"unknown scale {scale!r}; expected one of {SCALES}")


@dataclass(frozen=True)
class Window:
    label: str
    start: date
    end: date
    network: Network
    n_trades: int


@dataclass(frozen=True)
class WindowedNetworkSeries:
    scale: str
    windows: tuple[Window, ...] = field(default=())

    def __len__(self):
        return len(self.windows)

    def __iter__(self) -> Iterator[Window]:
        return iter(self.windows)

    @property
    def labels(self) -> list[str]:
        return [w.label for w in self.windows]

    def __getitem__(self, label: str) -> Window:
        for w in self.windows:
            if w.label == label:
                return w
        raise KeyError(label)


def aggregate(log_: TransactionLog, scale: str, attributes=None) -> WindowedNetworkSeries:
    """Bucket trades into windows and build one binary undirected network per window.

    Self-trades are dropped with a warning; windows without any remaining
    trade are omitted.
    """
    if scale not in SCALES:
        raise ValueError(f"unknown scale {scale!r}; expected one of {SCALES}")
    if len(log_) == 0:
        raise ValueError("empty transaction log")
    buckets: dict[tuple, list] = defaultdict(list)
    spans: dict[tuple, tuple[str, date, date]] = {}
    n_self = 0
    first = min(r.timestamp.date() for r in log_)
    last = max(r.timestamp.date() for r in log_)
    for r in log_:
        if r.lender == r.borrower:
            n_self += 1
            continue
        if scale == "static":
            label, start, end = "static", first, last
        else:
            label, start, end = window_of(r.timestamp, scale)
        buckets[(start, label)].append((r.lender, r.borrower))
        spans[(start, label)] = (label, start, end)
    if n_self:
        log.warning("dropped %d self-trade(s)", n_self)
    windows = []
    for key in sorted(buckets):
        label, start, end = spans[key]
        trades = buckets[key]
        net = build_network(trades, attributes)
        windows.append(Window(label, start, end, net, len(trades)))
    return WindowedNetworkSeries(scale, tuple(windows))


def write_series(series: WindowedNetworkSeries, out_dir: str | os.PathLike) -> list[str]:
    """Write ``<scale>_<label>.edges`` per window plus ``manifest.csv``; returns file names."""
    os.makedirs(out_dir, exist_ok=True)
    names = []
    with open(os.path.join(out_dir, "manifest.csv"), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["window_label", "start", "end", "n_nodes", "n_edges"])
        for w in series:
            name = f"{series.scale}_{w.label}.edges"
            write_edge_list(w.network, os.path.join(out_dir, name))
            names.append(name)
            writer.writerow([w.label, w.start.isoformat(), w.end.isoformat(), w.network.n_nodes, w.network.n_edges])
    return names
