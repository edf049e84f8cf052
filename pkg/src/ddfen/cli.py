"""Command line driver.

Subcommands compose along the data path: ``synth`` writes a price panel,
``matrix`` turns a panel into a coefficient matrix, ``deconvolve`` and
``network`` consume a matrix, ``ranks`` runs the full rolling comparison
on a panel, and ``stability`` summarizes a rank-series file.

Exit codes: 0 success, 2 input problem, 3 numerical failure, 4 violated
internal invariant.  Flags override an optional ``key=value`` config file
passed with ``--config``; lines starting with ``#`` are comments.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import os
import sys
from types import SimpleNamespace

import numpy as np

from . import serialize
from .deconv import deconvolve
from .errors import InputError, InvariantError, NumericalError
from .graph import INDEX_NAMES, mst
from .ingest import ALIGN_POLICIES, align_and_clean, load_prices, log_returns
from .pipeline import (DEFAULT_BOX_SIZE, DEFAULT_SAMPLE_WINDOW, DEFAULT_STEP,
                       METHODS, EventMarker, WindowSpec, compare_methods,
                       detrended_volatility)
from .synth import plant_chain, plant_hub
from .threshold import threshold_network

FORMATS = ("csv", "json", "both")

DEFAULTS = {
    "output_dir": ".",
    "format": "csv",
    "box": DEFAULT_BOX_SIZE,
    "window": DEFAULT_SAMPLE_WINDOW,
    "step": DEFAULT_STEP,
    "policy": "drop-row",
    "seed": 0,
    "eigen_scale": 1.0,
    "mst_correlation": "dccc",
    "events": (),
    "n": 8,
    "rho": 0.6,
}


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise InputError(f"expected an integer, got {text!r}") from None


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise InputError(f"expected a number, got {text!r}") from None


def _choice(options):
    def convert(text: str):
        if text not in options:
            raise InputError(
                f"expected one of {', '.join(options)}; got {text!r}"
            )
        return text

    return convert


def _parse_event(text: str) -> EventMarker:
    label, sep, datestr = text.partition("=")
    if not sep or not label.strip():
        raise InputError(
            f"event {text!r} must look like LABEL=YYYY-MM-DD"
        )
    try:
        date = dt.date.fromisoformat(datestr.strip())
    except ValueError:
        raise InputError(
            f"event {text!r}: unparseable date {datestr.strip()!r}"
        ) from None
    return EventMarker(label.strip(), date)


def _events_from_config(text: str):
    return [_parse_event(part) for part in text.split(",") if part.strip()]


# config key -> (merged attribute, converter for config-file strings)
CONFIG_KEYS = {
    "input": ("input", str),
    "output_dir": ("output_dir", str),
    "format": ("format", _choice(FORMATS)),
    "box": ("box", _int),
    "window": ("window", _int),
    "step": ("step", _int),
    "target": ("target", str),
    "method": ("method", _choice(METHODS)),
    "index": ("index", _choice(INDEX_NAMES)),
    "policy": ("policy", _choice(ALIGN_POLICIES)),
    "seed": ("seed", _int),
    "events": ("events", _events_from_config),
    "window_start": ("window_start", _int),
    "eigen_scale": ("eigen_scale", _float),
    "mst_correlation": ("mst_correlation", _choice(("dccc", "pearson"))),
    "n": ("n", _int),
    "rho": ("rho", _float),
    "len": ("length", _int),
}


def _read_config(path: str) -> dict:
    try:
        with open(path, "r") as fh:
            lines = fh.readlines()
    except OSError as err:
        raise InputError(f"cannot read config {path}: {err}") from None
    out = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InputError(
                f"config {path} line {lineno}: expected key=value"
            )
        key = key.strip().lower().replace("-", "_")
        if key not in CONFIG_KEYS:
            raise InputError(
                f"config {path} line {lineno}: unknown key {key!r}"
            )
        out[key] = value.strip()
    return out


def _merge(args, keys, overrides=None):
    """Resolve option values: command line, then config file, then defaults."""
    overrides = overrides or {}
    cfg = _read_config(args.config) if getattr(args, "config", None) else {}
    merged = SimpleNamespace()
    for key in keys:
        attr, convert = CONFIG_KEYS[key]
        value = getattr(args, attr, None)
        if key == "events":
            value = ([_parse_event(e) for e in args.event]
                     if getattr(args, "event", None) else None)
        if value is None and key in cfg:
            value = convert(cfg[key])
        if value is None:
            value = overrides.get(attr, DEFAULTS.get(attr))
        setattr(merged, attr, value)
    return merged


def _require(opts, attr: str, flag: str):
    if getattr(opts, attr, None) is None:
        raise InputError(f"{flag} is required")


def _read_text(path: str) -> str:
    try:
        with open(path, "r", newline="") as fh:
            return fh.read()
    except OSError as err:
        raise InputError(f"cannot read {path}: {err}") from None


def _write(opts, name: str, text: str):
    try:
        os.makedirs(opts.output_dir, exist_ok=True)
        serialize.atomic_write_text(os.path.join(opts.output_dir, name), text)
    except OSError as err:
        raise InputError(f"cannot write {name}: {err}") from None


def _read_matrix(path: str):
    """-> (codes, values); accepts the CSV or JSON matrix format."""
    text = _read_text(path)
    if path.endswith(".json"):
        codes, values, _ = serialize.parse_matrix_json(text)
    else:
        codes, values = serialize.parse_matrix_csv(text)
    asym = np.abs(values - values.T).max(initial=0.0)
    if asym > 1e-9:
        raise InputError(
            f"matrix in {path} is asymmetric (max |A - A^T| = {asym:.3e})"
        )
    return codes, values


def _load_return_panel(opts):
    _require(opts, "input", "--input")
    panel = load_prices(opts.input)
    return log_returns(align_and_clean(panel, opts.policy))


def _write_matrix(opts, stem: str, codes, values, box_size=None):
    if opts.format in ("csv", "both"):
        _write(opts, stem + ".csv", serialize.matrix_to_csv(codes, values))
    if opts.format in ("json", "both"):
        _write(opts, stem + ".json",
               serialize.matrix_to_json(codes, values, box_size))


def cmd_matrix(args) -> int:
    opts = _merge(args, ("input", "output_dir", "format", "box", "window",
                         "window_start", "policy"))
    panel = _load_return_panel(opts)
    n = panel.n_dates
    if opts.window > n:
        raise InputError(
            f"panel has {n} return rows; --window {opts.window} does not fit"
        )
    start = opts.window_start
    if start is None:
        start = n - opts.window
    if not 0 <= start <= n - opts.window:
        raise InputError(
            f"--window-start {start} outside valid range 0..{n - opts.window}"
        )
    from .dcca import dccc_matrix

    matrix = dccc_matrix(panel.slice_rows(start, start + opts.window),
                         opts.box)
    _write_matrix(opts, "matrix", matrix.codes, matrix.values,
                  matrix.box_size)
    return 0


def cmd_deconvolve(args) -> int:
    opts = _merge(args, ("input", "output_dir", "format", "eigen_scale"))
    _require(opts, "input", "--input")
    codes, values = _read_matrix(opts.input)
    direct = deconvolve(SimpleNamespace(codes=codes, values=values),
                        eigen_scale=opts.eigen_scale)
    _write_matrix(opts, "direct_matrix", direct.codes, direct.values)
    return 0


def cmd_network(args) -> int:
    opts = _merge(args, ("input", "output_dir", "format", "method"),
                  overrides={"method": "ddfen"})
    _require(opts, "input", "--input")
    codes, values = _read_matrix(opts.input)
    carrier = SimpleNamespace(codes=codes, values=values)
    if opts.method == "mst":
        net = mst(carrier)
        report = None
    else:
        net, report = threshold_network(deconvolve(carrier))
    if opts.format in ("csv", "both"):
        _write(opts, "edges.csv", serialize.network_to_csv(net))
    if opts.format in ("json", "both"):
        _write(opts, "edges.json", serialize.network_to_json(net))
    if report is not None:
        _write(opts, "threshold_report.json",
               serialize.threshold_report_to_json(report, net.codes))
    return 0


def cmd_ranks(args) -> int:
    opts = _merge(args, ("input", "output_dir", "format", "box", "window",
                         "step", "target", "policy", "events",
                         "mst_correlation", "method", "index"))
    _require(opts, "target", "--target")
    panel = _load_return_panel(opts)
    spec = WindowSpec(sample_window=opts.window, step=opts.step,
                      box_size=opts.box)
    result = compare_methods(panel, spec, opts.target, opts.events,
                             mst_correlation=opts.mst_correlation)
    if opts.format in ("csv", "both"):
        for method in METHODS:
            if opts.method is not None and method != opts.method:
                continue
            for index in INDEX_NAMES:
                if opts.index is not None and index != opts.index:
                    continue
                series = result.series[(method, index)]
                _write(opts, f"ranks_{method}_{index}.csv",
                       serialize.rank_series_to_csv(series.points))
        _write(opts, "stability.csv",
               serialize.stability_to_csv(result.volatility))
    _write(opts, "report.json", serialize.comparison_to_json(result))
    return 0


def cmd_synth(args) -> int:
    keys = ("output_dir", "n", "len", "seed")
    if args.flavor == "chain":
        opts = _merge(args, keys + ("rho",))
    else:
        opts = _merge(args, keys)
    _require(opts, "length", "--len")
    if args.flavor == "chain":
        panel = plant_chain(opts.n, opts.length, opts.rho, opts.seed)
    else:
        panel = plant_hub(opts.n, opts.length, opts.seed)
    _write(opts, "panel.csv", serialize.price_panel_to_csv(panel))
    return 0


def cmd_stability(args) -> int:
    opts = _merge(args, ("input", "output_dir", "format"))
    _require(opts, "input", "--input")
    points = serialize.parse_rank_series_csv(_read_text(opts.input))
    value = detrended_volatility([r for _, r in points])
    if opts.format in ("csv", "both"):
        _write(opts, "volatility.csv",
               f"detrended_volatility\n{serialize.fmt12(value)}\n")
    if opts.format in ("json", "both"):
        payload = {"detrended_volatility": serialize.round12(value)}
        _write(opts, "volatility.json", json.dumps(payload, indent=2) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE",
                        help="key=value option file; flags win")
    common.add_argument("--input", metavar="FILE")
    common.add_argument("--output-dir", dest="output_dir", metavar="DIR")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--box", type=int, metavar="W",
                        help="detrending box width")
    common.add_argument("--window", type=int, metavar="N",
                        help="sample window length in rows")
    common.add_argument("--step", type=int, metavar="S",
                        help="rows between window starts")
    common.add_argument("--target", metavar="CODE")
    common.add_argument("--method", choices=METHODS)
    common.add_argument("--index", choices=INDEX_NAMES)
    common.add_argument("--policy", choices=ALIGN_POLICIES,
                        help="missing-data handling")
    common.add_argument("--event", action="append", metavar="LABEL=DATE",
                        help="calendar marker; repeatable")
    common.add_argument("--seed", type=int)

    parser = argparse.ArgumentParser(
        prog="ddfen",
        description="Detrended deconvolution correlation networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("matrix", parents=[common],
                       help="coefficient matrix for one sample window")
    p.add_argument("--window-start", dest="window_start", type=int,
                   metavar="ROW", help="window start row (default: last fit)")
    p.set_defaults(run=cmd_matrix)

    p = sub.add_parser("deconvolve", parents=[common],
                       help="strip indirect links from a matrix file")
    p.add_argument("--eigen-scale", dest="eigen_scale", type=float,
                   metavar="S", help="spectrum shrink factor in (0, 1]")
    p.set_defaults(run=cmd_deconvolve)

    p = sub.add_parser("network", parents=[common],
                       help="threshold network (or spanning tree) of a matrix")
    p.set_defaults(run=cmd_network)

    p = sub.add_parser("ranks", parents=[common],
                       help="rolling rank comparison for a target asset")
    p.add_argument("--mst-correlation", dest="mst_correlation",
                   choices=("dccc", "pearson"),
                   help="correlation source for the spanning tree")
    p.set_defaults(run=cmd_ranks)

    p = sub.add_parser("synth", parents=[common],
                       help="generate a synthetic price panel")
    flavor = p.add_subparsers(dest="flavor", required=True)
    for name in ("chain", "hub"):
        q = flavor.add_parser(name, parents=[common])
        q.add_argument("--n", type=int, metavar="K", help="number of assets")
        q.add_argument("--len", dest="length", type=int, metavar="T",
                       help="number of return rows")
        if name == "chain":
            q.add_argument("--rho", type=float, metavar="R",
                           help="adjacent-link correlation in (0, 1)")
        q.set_defaults(run=cmd_synth)

    p = sub.add_parser("stability", parents=[common],
                       help="detrended volatility of a rank series file")
    p.set_defaults(run=cmd_stability)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except NumericalError as err:
        print(f"numerical error: {err}", file=sys.stderr)
        return 3
    except InvariantError as err:
        print(f"internal invariant violated: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
