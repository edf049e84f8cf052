"""Text formats for every artifact the tool reads or writes.

All floats are rendered with 12 significant digits and files are written
atomically (temp file + rename), so re-running a command on unchanged
input reproduces every output byte for byte.  Nothing here embeds
timestamps or environment details.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
import os
import tempfile

import numpy as np

from .errors import InputError
from .graph import INDEX_NAMES, Ranking
from .ingest import ReturnPanel
from .network import WeightedNetwork
from .pipeline import METHODS, MethodComparison
from .threshold import ThresholdReport


def fmt12(x: float) -> str:
    """12-significant-digit decimal rendering (shortest form)."""
    return format(float(x), ".12g")


def round12(x: float) -> float:
    """The float that :func:`fmt12` prints, as a value."""
    return float(fmt12(x))


def atomic_write_text(path, text: str) -> None:
    """Write ``text`` to ``path`` via a same-directory temp file + rename."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".part-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------------------
# square matrices (correlation or direct): CSV with a leading code column

def matrix_to_csv(codes, values) -> str:
    values = np.asarray(values, dtype=float)
    lines = ["," + ",".join(codes)]
    for code, row in zip(codes, values):
        lines.append(code + "," + ",".join(fmt12(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_matrix_csv(text: str):
    """Inverse of :func:`matrix_to_csv` -> ``(codes, values)``."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise InputError("empty matrix file")
    header = rows[0]
    if header[0].strip() != "":
        raise InputError("matrix header must start with an empty cell")
    codes = [c.strip() for c in header[1:]]
    n = len(codes)
    if n == 0:
        raise InputError("matrix header names no codes")
    if len(rows) - 1 != n:
        raise InputError(f"expected {n} matrix rows, found {len(rows) - 1}")
    values = np.empty((n, n))
    for i, row in enumerate(rows[1:], start=0):
        if len(row) != n + 1:
            raise InputError(f"matrix row {i + 2}: expected {n + 1} cells")
        if row[0].strip() != codes[i]:
            raise InputError(
                f"matrix row {i + 2}: code {row[0]!r} does not match header "
                f"order ({codes[i]!r})"
            )
        for j, cell in enumerate(row[1:]):
            try:
                values[i, j] = float(cell)
            except ValueError:
                raise InputError(
                    f"matrix row {i + 2}, column {codes[j]!r}: non-numeric "
                    f"cell {cell!r}"
                ) from None
    if not np.isfinite(values).all():
        raise InputError("matrix contains non-finite values")
    return codes, values


def matrix_to_json(codes, values, box_size=None) -> str:
    values = np.asarray(values, dtype=float)
    return _json_dumps({
        "codes": list(codes),
        "box_size": box_size,
        "values": [[round12(v) for v in row] for row in values],
    })


def parse_matrix_json(text: str):
    """-> ``(codes, values, box_size)``."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(f"bad JSON: {err}") from None
    try:
        codes = [str(c) for c in obj["codes"]]
        values = np.asarray(obj["values"], dtype=float)
    except (KeyError, TypeError, ValueError) as err:
        raise InputError(f"bad matrix JSON: {err}") from None
    if values.shape != (len(codes), len(codes)):
        raise InputError("matrix JSON: values shape does not match codes")
    if not np.isfinite(values).all():
        raise InputError("matrix contains non-finite values")
    return codes, values, obj.get("box_size")


# ---------------------------------------------------------------------------
# edge lists

def network_to_csv(net: WeightedNetwork) -> str:
    lines = ["source,target,weight"]
    for i, j, w in net.edges:
        lines.append(f"{net.codes[i]},{net.codes[j]},{fmt12(w)}")
    return "\n".join(lines) + "\n"


def network_to_json(net: WeightedNetwork) -> str:
    return _json_dumps({
        "codes": list(net.codes),
        "edges": [
            {"source": net.codes[i], "target": net.codes[j],
             "weight": round12(w)}
            for i, j, w in net.edges
        ],
    })


def parse_network_csv(text: str):
    """Inverse of :func:`network_to_csv` -> list of (source, target, weight)."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows or [c.strip() for c in rows[0]] != ["source", "target",
                                                    "weight"]:
        raise InputError(
            "edge list must start with header 'source,target,weight'"
        )
    edges = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise InputError(f"edge list row {lineno}: expected 3 cells")
        try:
            weight = float(row[2])
        except ValueError:
            raise InputError(
                f"edge list row {lineno}: non-numeric weight {row[2]!r}"
            ) from None
        edges.append((row[0].strip(), row[1].strip(), weight))
    return edges


def parse_network_json(text: str):
    """Inverse of :func:`network_to_json` -> ``(codes, edges)``.

    Edges come back as ``(i, j, weight)`` index triples ready for
    :class:`WeightedNetwork`.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(f"bad JSON: {err}") from None
    try:
        codes = [str(c) for c in obj["codes"]]
        raw = obj["edges"]
    except (KeyError, TypeError) as err:
        raise InputError(f"bad edge-list JSON: {err}") from None
    pos = {code: i for i, code in enumerate(codes)}
    edges = []
    for k, item in enumerate(raw):
        try:
            source, target = item["source"], item["target"]
            weight = float(item["weight"])
        except (KeyError, TypeError, ValueError) as err:
            raise InputError(f"edge-list JSON edge {k}: {err}") from None
        if source not in pos or target not in pos:
            raise InputError(
                f"edge-list JSON edge {k}: unknown code "
                f"{source!r} or {target!r}"
            )
        i, j = pos[source], pos[target]
        edges.append((min(i, j), max(i, j), weight))
    return codes, edges


def threshold_report_to_json(report: ThresholdReport, codes) -> str:
    return _json_dumps({
        "sigma_min": round12(report.sigma_min),
        "kept_edges": report.kept_edges,
        "theta": round12(report.theta),
        "n_components": report.n_components,
        "row_maxima": {
            code: round12(v) for code, v in zip(codes, report.row_maxima)
        },
    })


def parse_threshold_report_json(text: str) -> dict:
    """Inverse of :func:`threshold_report_to_json`, as a plain dict."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(f"bad JSON: {err}") from None
    for key in ("sigma_min", "kept_edges", "theta", "n_components",
                "row_maxima"):
        if key not in obj:
            raise InputError(f"threshold report JSON missing {key!r}")
    return obj


# ---------------------------------------------------------------------------
# rankings and rank series

def ranking_to_csv(ranking: Ranking) -> str:
    lines = ["code,score,rank"]
    for code, score, pos in ranking.entries:
        lines.append(f"{code},{fmt12(score)},{pos}")
    return "\n".join(lines) + "\n"


def ranking_to_json(ranking: Ranking) -> str:
    return _json_dumps({
        "index": ranking.index_name,
        "ranking": [
            {"code": code, "score": round12(score), "rank": pos}
            for code, score, pos in ranking.entries
        ],
    })


def rank_series_to_csv(points) -> str:
    """``points``: iterable of ``(date, rank)`` pairs."""
    lines = ["window_end_date,rank"]
    for date, r in points:
        lines.append(f"{date.isoformat()},{int(r)}")
    return "\n".join(lines) + "\n"


def parse_rank_series_csv(text: str):
    """-> list of ``(date, rank)`` pairs."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows or [c.strip() for c in rows[0]] != ["window_end_date", "rank"]:
        raise InputError(
            "rank series must start with header 'window_end_date,rank'"
        )
    points = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise InputError(f"rank series row {lineno}: expected 2 cells")
        try:
            date = dt.date.fromisoformat(row[0].strip())
        except ValueError:
            raise InputError(
                f"rank series row {lineno}: unparseable date {row[0]!r}"
            ) from None
        try:
            r = int(row[1])
        except ValueError:
            raise InputError(
                f"rank series row {lineno}: non-integer rank {row[1]!r}"
            ) from None
        points.append((date, r))
    if not points:
        raise InputError("rank series has no rows")
    return points


# ---------------------------------------------------------------------------
# stability table and the combined report

def stability_to_csv(volatility: dict) -> str:
    """``volatility``: ``(method, index) -> float``; table rows = methods."""
    lines = ["method," + ",".join(INDEX_NAMES)]
    for method in METHODS:
        cells = [fmt12(volatility[(method, x)]) for x in INDEX_NAMES]
        lines.append(method + "," + ",".join(cells))
    return "\n".join(lines) + "\n"


def parse_stability_csv(text: str) -> dict:
    """Inverse of :func:`stability_to_csv` -> ``(method, index) -> float``."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows or [c.strip() for c in rows[0]] != ["method", *INDEX_NAMES]:
        raise InputError(
            "stability table must start with header "
            f"'method,{','.join(INDEX_NAMES)}'"
        )
    out = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 1 + len(INDEX_NAMES):
            raise InputError(f"stability row {lineno}: wrong cell count")
        method = row[0].strip()
        if method not in METHODS:
            raise InputError(
                f"stability row {lineno}: unknown method {method!r}"
            )
        for index, cell in zip(INDEX_NAMES, row[1:]):
            try:
                out[(method, index)] = float(cell)
            except ValueError:
                raise InputError(
                    f"stability row {lineno}, column {index!r}: non-numeric "
                    f"cell {cell!r}"
                ) from None
    return out


def comparison_to_json(result: MethodComparison) -> str:
    series = {
        method: {
            index: [
                {"window_end": d.isoformat(), "rank": int(r)}
                for d, r in result.series[(method, index)].points
            ]
            for index in INDEX_NAMES
        }
        for method in METHODS
    }
    volatility = {
        method: {
            index: round12(result.volatility[(method, index)])
            for index in INDEX_NAMES
        }
        for method in METHODS
    }
    thresholds = [
        {
            "window_end": d.isoformat(),
            "sigma_min": round12(rep.sigma_min),
            "kept_edges": rep.kept_edges,
            "theta": round12(rep.theta),
            "n_components": rep.n_components,
        }
        for d, rep in zip(result.window_ends, result.threshold_reports)
    ]
    return _json_dumps({
        "target": result.target,
        "window": {
            "sample_window": result.spec.sample_window,
            "step": result.spec.step,
            "box_size": result.spec.box_size,
        },
        "mst_correlation": result.mst_correlation,
        "window_ends": [d.isoformat() for d in result.window_ends],
        "series": series,
        "detrended_volatility": volatility,
        "events": [
            {
                "label": ev.label,
                "date": ev.date.isoformat(),
                "window_end":
                    ev.window_end.isoformat() if ev.window_end else None,
            }
            for ev in result.events
        ],
        "threshold": thresholds,
    })


# ---------------------------------------------------------------------------
# price panels (the ingestion format, also emitted by the generators)

def price_panel_to_csv(panel: ReturnPanel, base: float = 100.0) -> str:
    """Render a return panel as price levels the loader can ingest.

    Levels start at ``base`` one day before the first return date and
    compound through ``exp`` of the cumulative returns, so taking log
    returns of the written file recovers the panel (up to the 12-digit
    cell precision).
    """
    if not base > 0:
        raise InputError("base price must be positive")
    levels = base * np.exp(np.cumsum(panel.returns, axis=0))
    dates = [panel.dates[0] - dt.timedelta(days=1)] + list(panel.dates)
    lines = ["date," + ",".join(panel.codes)]
    first = [fmt12(base)] * panel.n_assets
    lines.append(dates[0].isoformat() + "," + ",".join(first))
    for date, row in zip(dates[1:], levels):
        lines.append(date.isoformat() + "," + ",".join(fmt12(v) for v in row))
    return "\n".join(lines) + "\n"
