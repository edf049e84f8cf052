"""Price panel ingestion: wide CSV -> aligned panel -> log returns.

The on-disk format is a wide CSV with a date column and one column per
asset code.  Empty cells mark missing observations.  Dates must parse as
ISO ``YYYY-MM-DD``.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, InvariantError

ALIGN_POLICIES = ("drop-row", "forward-fill")


def _check_axes(dates, codes, values, allow_nan):
    if values.ndim != 2:
        raise InvariantError("panel values must be a 2-d array")
    if values.shape != (len(dates), len(codes)):
        raise InvariantError(
            f"panel shape {values.shape} does not match "
            f"{len(dates)} dates x {len(codes)} codes"
        )
    if len(set(codes)) != len(codes):
        raise InvariantError("asset codes must be unique")
    for a, b in zip(dates, dates[1:]):
        if not a < b:
            raise InvariantError(f"dates not strictly increasing at {b}")
    finite = np.isfinite(values)
    if allow_nan:
        finite |= np.isnan(values)
    if not finite.all():
        raise InvariantError("panel contains non-finite values")


@dataclass
class PricePanel:
    """Raw price levels, possibly with missing cells (NaN)."""

    dates: list[dt.date]
    codes: list[str]
    prices: np.ndarray  # shape (n_dates, n_assets); NaN = missing

    def __post_init__(self):
        self.prices = np.asarray(self.prices, dtype=float)
        _check_axes(self.dates, self.codes, self.prices, allow_nan=True)
        present = ~np.isnan(self.prices)
        if not (self.prices[present] > 0).all():
            raise InvariantError("present prices must be strictly positive")

    @property
    def n_dates(self) -> int:
        return len(self.dates)

    @property
    def n_assets(self) -> int:
        return len(self.codes)


@dataclass
class ReturnPanel:
    """Log returns aligned on a common date axis.  No missing cells."""

    dates: list[dt.date]
    codes: list[str]
    returns: np.ndarray  # shape (n_dates, n_assets)

    def __post_init__(self):
        self.returns = np.asarray(self.returns, dtype=float)
        _check_axes(self.dates, self.codes, self.returns, allow_nan=False)

    @property
    def n_dates(self) -> int:
        return len(self.dates)

    @property
    def n_assets(self) -> int:
        return len(self.codes)

    def column(self, code: str) -> np.ndarray:
        try:
            j = self.codes.index(code)
        except ValueError:
            raise InputError(f"unknown asset code {code!r}") from None
        return self.returns[:, j]

    def slice_rows(self, start: int, stop: int) -> "ReturnPanel":
        return ReturnPanel(self.dates[start:stop], list(self.codes),
                           self.returns[start:stop])


def _parse_price_cell(text, row_no, code):
    text = text.strip()
    if text == "":
        return math.nan
    try:
        value = float(text)
    except ValueError:
        raise InputError(
            f"row {row_no}, column {code!r}: non-numeric price {text!r}"
        ) from None
    if not math.isfinite(value) or value <= 0:
        raise InputError(
            f"row {row_no}, column {code!r}: price must be finite and > 0, "
            f"got {text!r}"
        )
    return value


def load_prices_text(text: str, date_column: str = "date") -> PricePanel:
    """Parse a wide CSV given as a string.  See :func:`load_prices`."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputError("empty file: no header row") from None
    header = [h.strip() for h in header]
    if date_column not in header:
        raise InputError(f"missing date column {date_column!r} in header")
    date_idx = header.index(date_column)
    codes = [h for i, h in enumerate(header) if i != date_idx]
    if not codes:
        raise InputError("no asset columns in header")
    if len(set(codes)) != len(codes):
        dupe = sorted({c for c in codes if codes.count(c) > 1})[0]
        raise InputError(f"duplicate asset column {dupe!r}")

    rows: dict[dt.date, list[float]] = {}
    for row_no, row in enumerate(reader, start=2):
        if not row or all(cell.strip() == "" for cell in row):
            continue
        if len(row) != len(header):
            raise InputError(
                f"row {row_no}: expected {len(header)} cells, got {len(row)}"
            )
        try:
            date = dt.date.fromisoformat(row[date_idx].strip())
        except ValueError:
            raise InputError(
                f"row {row_no}: unparseable date {row[date_idx]!r}"
            ) from None
        if date in rows:
            raise InputError(f"row {row_no}: duplicate date {date.isoformat()}")
        cells = [c for i, c in enumerate(row) if i != date_idx]
        rows[date] = [
            _parse_price_cell(cell, row_no, code)
            for cell, code in zip(cells, codes)
        ]
    if not rows:
        raise InputError("no data rows")
    dates = sorted(rows)
    prices = np.array([rows[d] for d in dates], dtype=float)
    return PricePanel(dates, codes, prices)


def load_prices(path, date_column: str = "date") -> PricePanel:
    """Read a wide price CSV from ``path``.

    Raises :class:`InputError` for a missing file, unparseable dates,
    duplicate dates, or non-numeric / non-positive price cells (the message
    names the row and column).
    """
    try:
        with open(path, "r", newline="") as fh:
            text = fh.read()
    except OSError as err:
        raise InputError(f"cannot read {path}: {err}") from None
    return load_prices_text(text, date_column)


def align_and_clean(panel: PricePanel, policy: str = "drop-row") -> PricePanel:
    """Resolve missing cells so every remaining row is fully observed.

    ``drop-row`` keeps only dates where every asset is present;
    ``forward-fill`` carries the last seen price forward, then drops any
    leading rows that still have gaps.  An asset with zero observations is
    an error either way.
    """
    if policy not in ALIGN_POLICIES:
        raise InputError(
            f"unknown alignment policy {policy!r}; expected one of "
            f"{', '.join(ALIGN_POLICIES)}"
        )
    prices = panel.prices.copy()
    observed = ~np.isnan(prices)
    for j, code in enumerate(panel.codes):
        if not observed[:, j].any():
            raise InputError(f"asset {code!r} has zero observations")
    if policy == "forward-fill":
        for j in range(prices.shape[1]):
            col = prices[:, j]
            last = math.nan
            for t in range(col.size):
                if math.isnan(col[t]):
                    col[t] = last
                else:
                    last = col[t]
    keep = ~np.isnan(prices).any(axis=1)
    dates = [d for d, k in zip(panel.dates, keep) if k]
    return PricePanel(dates, list(panel.codes), prices[keep])


def log_returns(panel: PricePanel) -> ReturnPanel:
    """Per-asset log returns: ``ln(p[t] / p[t-1])`` for consecutive rows.

    The panel must already be gap-free (run :func:`align_and_clean` first)
    and hold at least two dates.
    """
    if np.isnan(panel.prices).any():
        raise InputError("panel has missing cells; run align_and_clean first")
    if panel.n_dates < 2:
        raise InputError("need at least two dates to form returns")
    rets = np.log(panel.prices[1:] / panel.prices[:-1])
    return ReturnPanel(panel.dates[1:], list(panel.codes), rets)
