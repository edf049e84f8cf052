"""Rolling-window analysis: per-window networks, target rank series,
and the detrended stability statistic that compares them.

Two network constructions run side by side over the same coefficient
matrices: the deconvolved-and-thresholded network (``ddfen``) and the
spanning-tree baseline (``mst``).  For a chosen target asset, each window
yields one rank per (method, index) combination; the wobble of each rank
series around its own linear trend is the stability statistic.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field

import numpy as np

from .dcca import CorrelationMatrix, dccc_matrix
from .deconv import deconvolve
from .errors import DdfenError, InputError, NumericalError
from .graph import INDEX_NAMES, compute_index, mst, rank
from .ingest import ReturnPanel
from .threshold import ThresholdReport, threshold_network

#: Method identifiers, in reporting order.
METHODS = ("mst", "ddfen")

MST_CORRELATION_SOURCES = ("dccc", "pearson")

DEFAULT_SAMPLE_WINDOW = 200
DEFAULT_STEP = 60
DEFAULT_BOX_SIZE = 10


@dataclass
class WindowSpec:
    """Rolling-window geometry: window length, hop, and box width."""

    sample_window: int = DEFAULT_SAMPLE_WINDOW
    step: int = DEFAULT_STEP
    box_size: int = DEFAULT_BOX_SIZE

    def __post_init__(self):
        if self.box_size < 2:
            raise InputError(f"box_size {self.box_size} is degenerate")
        if self.sample_window <= self.box_size:
            raise InputError(
                f"sample_window {self.sample_window} must exceed "
                f"box_size {self.box_size}"
            )
        if self.step < 1:
            raise InputError(f"step must be positive, got {self.step}")


@dataclass
class EventMarker:
    """A labeled calendar date to locate on the window axis."""

    label: str
    date: dt.date


@dataclass
class EventPlacement:
    """An event resolved to the first window ending at or after it.

    ``window_end`` is ``None`` when the event falls after the final
    window, i.e. outside the analyzed range.
    """

    label: str
    date: dt.date
    window_end: dt.date | None


@dataclass
class RankSeries:
    """Rank of one target under one (method, index) pair, per window."""

    method: str
    index_name: str
    target: str
    points: list[tuple[dt.date, int]]  # (window_end_date, rank)

    def ranks(self) -> list[int]:
        return [r for _, r in self.points]


@dataclass
class MethodComparison:
    """Everything produced by one rolling comparison run."""

    target: str
    spec: WindowSpec
    mst_correlation: str
    window_ends: list[dt.date]
    series: dict[tuple[str, str], RankSeries]  # (method, index) -> series
    volatility: dict[tuple[str, str], float]
    events: list[EventPlacement] = field(default_factory=list)
    threshold_reports: list[ThresholdReport] = field(default_factory=list)


def roll_windows(n_dates: int, spec: WindowSpec) -> list[tuple[int, int]]:
    """Half-open row ranges ``[start, start + sample_window)``.

    Windows begin at ``0, step, 2*step, ...`` and every window must fit
    entirely; a panel shorter than one window is an error.
    """
    if n_dates < spec.sample_window:
        raise InputError(
            f"panel has {n_dates} rows; the sample window needs "
            f"{spec.sample_window}"
        )
    out = []
    start = 0
    while start + spec.sample_window <= n_dates:
        out.append((start, start + spec.sample_window))
        start += spec.step
    return out


def detrended_volatility(series) -> float:
    """Root-mean-square wobble of a series around its own linear trend.

    Accepts a :class:`RankSeries` or any numeric sequence.  The line is
    the least-squares fit against the observation ordinal; the mean square
    uses divisor ``n`` (not ``n - 1``).  A single point has no trend to
    remove and is an error.
    """
    if isinstance(series, RankSeries):
        values = series.ranks()
    else:
        values = list(series)
    y = np.asarray(values, dtype=float)
    if y.ndim != 1:
        raise InputError("series must be 1-d")
    if y.size < 2:
        raise InputError("need at least two points to remove a trend")
    if not np.isfinite(y).all():
        raise InputError("series contains non-finite values")
    x = np.arange(y.size, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (intercept + slope * x)
    return float(np.sqrt(np.mean(resid * resid)))


def _pearson_matrix(panel: ReturnPanel) -> CorrelationMatrix:
    stds = panel.returns.std(axis=0)
    for code, s in zip(panel.codes, stds):
        if s == 0:
            raise NumericalError(
                f"asset {code!r} is constant in this window; its product-"
                "moment correlation is undefined"
            )
    corr = np.corrcoef(panel.returns, rowvar=False)
    corr = np.clip((corr + corr.T) / 2, -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    return CorrelationMatrix(list(panel.codes), None, corr)


def _window_tag(panel: ReturnPanel, lo: int, hi: int) -> str:
    return f"window {panel.dates[lo].isoformat()}..{panel.dates[hi - 1].isoformat()}"


class _WindowRun:
    """Networks and rankings computed for one window, built lazily."""

    def __init__(self, panel, lo, hi, spec, mst_correlation):
        self.tag = _window_tag(panel, lo, hi)
        self.slice = panel.slice_rows(lo, hi)
        self.spec = spec
        self.mst_correlation = mst_correlation
        self.end_date = panel.dates[hi - 1]
        self._matrix = None
        self._nets = {}
        self.threshold_report = None

    def _rewrap(self, err: DdfenError):
        return type(err)(f"{self.tag}: {err}")

    def matrix(self) -> CorrelationMatrix:
        if self._matrix is None:
            try:
                self._matrix = dccc_matrix(self.slice, self.spec.box_size)
            except DdfenError as err:
                raise self._rewrap(err) from err
        return self._matrix

    def net(self, method: str):
        if method not in self._nets:
            try:
                if method == "ddfen":
                    graph, report = threshold_network(deconvolve(self.matrix()))
                    self.threshold_report = report
                    self._nets[method] = graph
                elif method == "mst":
                    if self.mst_correlation == "pearson":
                        source = _pearson_matrix(self.slice)
                    else:
                        source = self.matrix()
                    self._nets[method] = mst(source)
                else:
                    raise InputError(
                        f"unknown method {method!r}; expected one of "
                        f"{', '.join(METHODS)}"
                    )
            except DdfenError as err:
                raise self._rewrap(err) from err
        return self._nets[method]

    def target_rank(self, method: str, index_name: str, target: str) -> int:
        net = self.net(method)
        try:
            ranking = rank(compute_index(net, index_name))
        except DdfenError as err:
            raise self._rewrap(err) from err
        return ranking.rank_of(target)


def _validated(panel, spec, target, mst_correlation):
    if not isinstance(spec, WindowSpec):
        raise InputError("spec must be a WindowSpec")
    if target not in panel.codes:
        raise InputError(f"target {target!r} is not an asset in the panel")
    if mst_correlation not in MST_CORRELATION_SOURCES:
        raise InputError(
            f"unknown correlation source {mst_correlation!r}; expected one "
            f"of {', '.join(MST_CORRELATION_SOURCES)}"
        )


def rank_series(panel: ReturnPanel, spec: WindowSpec, target: str,
                method: str, index_name: str, *,
                mst_correlation: str = "dccc") -> RankSeries:
    """Target's rank in every window under one (method, index) pair."""
    _validated(panel, spec, target, mst_correlation)
    if method not in METHODS:
        raise InputError(
            f"unknown method {method!r}; expected one of {', '.join(METHODS)}"
        )
    if index_name not in INDEX_NAMES:
        raise InputError(
            f"unknown index {index_name!r}; expected one of "
            f"{', '.join(INDEX_NAMES)}"
        )
    points = []
    for lo, hi in roll_windows(panel.n_dates, spec):
        run = _WindowRun(panel, lo, hi, spec, mst_correlation)
        points.append((run.end_date, run.target_rank(method, index_name, target)))
    return RankSeries(method, index_name, target, points)


def place_events(events, window_ends: list[dt.date]) -> list[EventPlacement]:
    """Attach each event to the first window ending on or after its date."""
    placed = []
    for ev in events:
        window_end = next((d for d in window_ends if d >= ev.date), None)
        placed.append(EventPlacement(ev.label, ev.date, window_end))
    return placed


def compare_methods(panel: ReturnPanel, spec: WindowSpec, target: str,
                    events=(), *,
                    mst_correlation: str = "dccc") -> MethodComparison:
    """Run both methods and all four indices over the same windows.

    Each window's coefficient matrix is computed once and shared by both
    constructions.  Needs at least two windows, otherwise the stability
    statistic is undefined.
    """
    _validated(panel, spec, target, mst_correlation)
    windows = roll_windows(panel.n_dates, spec)
    if len(windows) < 2:
        raise InputError(
            f"only {len(windows)} window fits; stability needs at least two"
        )
    points: dict[tuple[str, str], list] = {
        (m, x): [] for m in METHODS for x in INDEX_NAMES
    }
    window_ends = []
    reports = []
    for lo, hi in windows:
        run = _WindowRun(panel, lo, hi, spec, mst_correlation)
        window_ends.append(run.end_date)
        for method in METHODS:
            for index_name in INDEX_NAMES:
                r = run.target_rank(method, index_name, target)
                points[(method, index_name)].append((run.end_date, r))
        reports.append(run.threshold_report)
    series = {
        key: RankSeries(key[0], key[1], target, pts)
        for key, pts in points.items()
    }
    volatility = {key: detrended_volatility(s) for key, s in series.items()}
    return MethodComparison(
        target=target,
        spec=spec,
        mst_correlation=mst_correlation,
        window_ends=window_ends,
        series=series,
        volatility=volatility,
        events=place_events(list(events), window_ends),
        threshold_reports=reports,
    )
