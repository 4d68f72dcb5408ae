"""Stats CSV files and their across-replicate aggregate."""

from __future__ import annotations

import csv
import math
from typing import Iterable, Mapping, Sequence

STATS_COLUMNS = ("update", "occupied", "mean_length", "mean_fitness", "mean_gestation", "births",
                 "dominant_abundance", "dominant_length", "dominant_w0", "nu", "F_nu", "w_nu",
                 "equilibrium_gap")
INT_COLUMNS = frozenset({"update", "occupied", "births", "dominant_abundance", "dominant_length"})


def format_value(value) -> str:
    """Integers verbatim, reals to 6 significant digits, ``None`` as empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"non-finite value {value!r}")
    return f"{value:.6g}"


def format_row(row: Mapping[str, object], columns: Sequence[str] = STATS_COLUMNS) -> list[str]:
    return [format_value(row.get(c)) for c in columns]


class StatsWriter:
    """Streams rows to a CSV file; rows must arrive in increasing update order."""

    def __init__(self, path: str, columns: Sequence[str] = STATS_COLUMNS):
        self.path = path
        self.columns = tuple(columns)
        self._fh = open(path, "w", newline="")
        self._csv = csv.writer(self._fh, lineterminator="\n")
        self._csv.writerow(self.columns)
        self._last = None

    def write(self, row: Mapping[str, object]) -> None:
        u = row["update"]
        if self._last is not None and u <= self._last:
            raise ValueError(f"update {u} not after {self._last}")
        self._last = u
        self._csv.writerow(format_row(row, self.columns))

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_stats(path: str) -> tuple[list[str], list[dict[str, float | None]]]:
    """Header and rows; empty cells become ``None``."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            if len(rec) != len(header):
                raise ValueError(f"{path}:{lineno}: expected {len(header)} fields")
            rows.append({k: (float(v) if v != "" else None) for k, v in zip(header, rec)})
    return header, rows


def aggregate_rows(tables: Iterable[list[dict[str, float | None]]],
                   columns: Sequence[str] = STATS_COLUMNS) -> list[dict[str, object]]:
    """Per-update arithmetic mean of each column over the tables that have a value."""
    by_update: dict[float, list[dict]] = {}
    for rows in tables:
        for row in rows:
            by_update.setdefault(row["update"], []).append(row)
    out = []
    for u in sorted(by_update):
        group = by_update[u]
        agg: dict[str, object] = {"update": int(u)}
        for col in columns:
            if col == "update":
                continue
            vals = [r[col] for r in group if r.get(col) is not None]
            if not vals:
                agg[col] = None
                continue
            mean = math.fsum(vals) / len(vals)
            agg[col] = int(mean) if col in INT_COLUMNS and mean.is_integer() else mean
        out.append(agg)
    return out


def write_aggregate(stats_paths: Sequence[str], out_path: str) -> str:
    tables = []
    for p in stats_paths:
        header, rows = read_stats(p)
        if tuple(header) != STATS_COLUMNS:
            raise ValueError(f"{p}: unexpected header")
        tables.append(rows)
    with StatsWriter(out_path) as w:
        for row in aggregate_rows(tables):
            w.write(row)
    return out_path
