"""Detrended cross-correlation coefficients over sliding boxes.

Pipeline per pair of equal-length series:

1. integrate each series into a profile (cumulative sum of deviations
   from the mean);
2. slide a box of width ``w`` one step at a time over the profiles
   (``n - w + 1`` boxes for profiles of length ``n``);
3. inside each box, remove the least-squares line fitted against the
   in-box coordinate ``gamma = 1..w`` and form detrended (co)variances
   with divisor ``w - 1``;
4. aggregate box statistics with divisor ``n - w`` and take the ratio

       dccc = F2_cross / (F_i * F_j)

   where ``F_i, F_j`` are the detrended fluctuation magnitudes of the two
   series.  The aggregate divisors cancel in the ratio, so they only
   matter when the intermediate statistics are inspected directly.

Box starts ``beta`` are 1-based in the public API, matching the in-box
coordinate convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InputError, InvariantError, NumericalError
from .ingest import ReturnPanel

#: |coefficient| may exceed 1 by at most this much before it is an error;
#: anything inside the band is clamped to [-1, 1].
CLAMP_TOL = 1e-6

#: Detrended variances at or below ``nterms * (RESIDUAL_FLOOR * max|I|)**2``
#: are treated as exactly zero: residuals that small are indistinguishable
#: from the rounding noise of a perfectly linear box fit.
RESIDUAL_FLOOR = 1e-13


@dataclass
class Profile:
    """Integrated series: ``I[a] = sum_{t <= a} (x[t] - mean(x))``."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise InvariantError("profile must be 1-d")
        if self.values.size < 2:
            raise InvariantError("profile needs at least 2 points")
        if not np.isfinite(self.values).all():
            raise InvariantError("profile contains non-finite values")

    def __len__(self) -> int:
        return self.values.size


@dataclass
class DccaBoxStats:
    """Single-box detrended statistics (divisor ``w - 1``)."""

    box_start: int  # 1-based
    detrended_var_i: float
    detrended_var_j: float
    detrended_cov: float

    def __post_init__(self):
        if self.detrended_var_i < 0 or self.detrended_var_j < 0:
            raise InvariantError("detrended variance cannot be negative")
        vi, vj, cov = self.detrended_var_i, self.detrended_var_j, self.detrended_cov
        # Cauchy-Schwarz, with slack for accumulated rounding.
        assert cov * cov <= vi * vj * (1 + 1e-9) + 1e-18 * (vi + vj + 1.0) ** 2


@dataclass
class CorrelationMatrix:
    """Symmetric coefficient matrix with unit diagonal.

    ``box_size`` records the box width the matrix was computed with; it is
    ``None`` for matrices that entered through a serialized form that does
    not carry it, or that were produced by another estimator.
    """

    codes: list[str]
    box_size: int | None
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        n = len(self.codes)
        if len(set(self.codes)) != n:
            raise InvariantError("asset codes must be unique")
        if self.values.shape != (n, n):
            raise InvariantError(
                f"matrix shape {self.values.shape} does not match {n} codes"
            )
        if not np.isfinite(self.values).all():
            raise InvariantError("matrix contains non-finite values")
        if np.abs(self.values - self.values.T).max(initial=0.0) > 1e-12:
            raise InvariantError("matrix is not symmetric within 1e-12")
        if n and not (np.diag(self.values) == 1.0).all():
            raise InvariantError("matrix diagonal must be exactly 1")
        if np.abs(self.values).max(initial=0.0) > 1 + 1e-9:
            raise InvariantError("matrix entries must lie within [-1, 1]")
        if self.box_size is not None and self.box_size < 2:
            raise InvariantError("box_size must be at least 2")

    @property
    def n(self) -> int:
        return len(self.codes)


def profile(series) -> Profile:
    """Integrate a series into its profile.

    The last profile value is zero up to rounding because deviations from
    the mean sum to zero.
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise InputError("series must be 1-d")
    if x.size < 2:
        raise InputError("series needs at least 2 observations")
    if not np.isfinite(x).all():
        raise InputError("series contains non-finite values")
    return Profile(np.cumsum(x - x.mean()))


def _profile_values(series) -> np.ndarray:
    if isinstance(series, Profile):
        raise InputError("pass raw series, not profiles")
    return profile(series).values


def box_detrend(profile_i, profile_j, w: int, beta: int) -> DccaBoxStats:
    """Detrended statistics of one box of width ``w`` starting at ``beta``.

    ``beta`` is 1-based; valid starts are ``1 .. n - w + 1``.  Accepts
    :class:`Profile` objects or plain arrays of equal length.
    """
    pi = profile_i.values if isinstance(profile_i, Profile) else np.asarray(
        profile_i, dtype=float)
    pj = profile_j.values if isinstance(profile_j, Profile) else np.asarray(
        profile_j, dtype=float)
    if pi.shape != pj.shape or pi.ndim != 1:
        raise InputError("profiles must be 1-d and of equal length")
    n = pi.size
    if w < 2:
        raise InputError(f"box width {w} is degenerate; need w >= 2")
    if w > n:
        raise InputError(f"box width {w} exceeds profile length {n}")
    if not 1 <= beta <= n - w + 1:
        raise InputError(
            f"box start {beta} outside valid range 1..{n - w + 1}"
        )
    gamma = np.arange(1.0, w + 1.0)
    ri = _line_residuals(pi[beta - 1:beta - 1 + w], gamma, w)
    rj = _line_residuals(pj[beta - 1:beta - 1 + w], gamma, w)
    denom = w - 1.0
    return DccaBoxStats(
        box_start=beta,
        detrended_var_i=float(ri @ ri) / denom,
        detrended_var_j=float(rj @ rj) / denom,
        detrended_cov=float(ri @ rj) / denom,
    )


def _line_residuals(window, gamma, w):
    sx = w * (w + 1.0) / 2.0
    sxx = w * (w + 1.0) * (2.0 * w + 1.0) / 6.0
    disc = w * sxx - sx * sx
    sy = window.sum()
    sxy = window @ gamma
    slope = (w * sxy - sx * sy) / disc
    intercept = (sy - slope * sx) / w
    return window - (intercept + slope * gamma)


def _variance_floor(profiles: np.ndarray, w: int) -> np.ndarray:
    nterms = (profiles.shape[1] - w + 1) * w
    absmax = np.abs(profiles).max(axis=1)
    return nterms * (RESIDUAL_FLOOR * absmax) ** 2


def _degenerate_message(name: str, w: int) -> str:
    why = (
        "two-point boxes are fitted exactly by the line, so every residual "
        "is rounding noise" if w == 2
        else "all boxes are linear at this width"
    )
    return f"{name}: zero detrended variance at box width {w} ({why})"


def _ratio_from_sums(vi, vj, cov, w, n, name_i, name_j):
    denom = (w - 1.0) * (n - w)
    f2_i = vi / denom
    f2_j = vj / denom
    f2_cross = cov / denom
    r = f2_cross / np.sqrt(f2_i * f2_j)
    if abs(r) > 1 + CLAMP_TOL:
        raise NumericalError(
            f"coefficient {r!r} for ({name_i}, {name_j}) exceeds clamp "
            f"tolerance {CLAMP_TOL}"
        )
    return float(min(1.0, max(-1.0, r)))


def dccc(series_i, series_j, w: int) -> float:
    """Detrended cross-correlation coefficient of two series at width ``w``.

    Exactly ``1.0`` when the series are identical and ``-1.0`` when one is
    the negation of the other (the cross and variance sums then coincide
    bitwise).  Values within ``1e-6`` beyond the unit interval are clamped;
    anything further out raises :class:`NumericalError`, as does a series
    whose detrended variance vanishes (constant input, or ``w == 2``, whose
    two-point boxes are always fitted exactly).
    """
    x = np.asarray(series_i, dtype=float)
    y = np.asarray(series_j, dtype=float)
    if x.ndim != 1 or y.ndim != 1 or x.size != y.size:
        raise InputError("series must be 1-d and of equal length")
    n = x.size
    if w < 2:
        raise InputError(f"box width {w} is degenerate; need w >= 2")
    if w >= n:
        raise InputError(f"need series longer than the box width ({w})")
    profiles = np.vstack([_profile_values(x), _profile_values(y)])
    sums = kernels.pair_cross_sums(profiles, w)
    floor = _variance_floor(profiles, w)
    for idx, name in ((0, "series_i"), (1, "series_j")):
        if sums[idx, idx] <= floor[idx]:
            raise NumericalError(_degenerate_message(name, w))
    return _ratio_from_sums(sums[0, 0], sums[1, 1], sums[0, 1], w, n,
                            "series_i", "series_j")


def dccc_matrix(panel: ReturnPanel, w: int) -> CorrelationMatrix:
    """All-pairs coefficient matrix for a return panel at box width ``w``.

    The diagonal is exactly 1 and the matrix is exactly symmetric (each
    pair is computed once).  Degenerate or out-of-range pairs raise
    :class:`NumericalError` naming the offending asset codes.
    """
    if panel.n_assets < 2:
        raise InputError("need at least two assets")
    n = panel.n_dates
    if w < 2:
        raise InputError(f"box width {w} is degenerate; need w >= 2")
    if w >= n:
        raise InputError(
            f"panel has {n} rows; need more than the box width ({w})"
        )
    profiles = np.empty((panel.n_assets, n))
    for j in range(panel.n_assets):
        profiles[j] = _profile_values(panel.returns[:, j])
    sums = kernels.pair_cross_sums(profiles, w)
    floor = _variance_floor(profiles, w)
    for j, code in enumerate(panel.codes):
        if sums[j, j] <= floor[j]:
            raise NumericalError(_degenerate_message(f"asset {code!r}", w))
    k = panel.n_assets
    values = np.ones((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            r = _ratio_from_sums(sums[i, i], sums[j, j], sums[i, j], w, n,
                                 repr(panel.codes[i]), repr(panel.codes[j]))
            values[i, j] = r
            values[j, i] = r
    return CorrelationMatrix(list(panel.codes), w, values)
