"""Synthetic return panels with planted structure.

All generators draw from ``numpy.random.default_rng`` (the PCG64 bit
generator) seeded through ``SeedSequence``, so a given seed produces the
same panel on every platform and numpy release covered by the PCG64
stability guarantee.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

import numpy as np

from .dcca import CorrelationMatrix
from .errors import InputError
from .ingest import ReturnPanel

#: First return date of every synthetic panel (a Monday).
EPOCH = dt.date(2015, 1, 5)


def _dates(length: int, start: dt.date | None = None) -> list[dt.date]:
    start = EPOCH if start is None else start
    return [start + dt.timedelta(days=i) for i in range(length)]


def _codes(n: int) -> list[str]:
    return [f"A{i:02d}" for i in range(n)]


def returns_panel(values, codes=None, start: dt.date | None = None) -> ReturnPanel:
    """Wrap a plain ``(length, n_assets)`` array as a dated panel."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise InputError("values must be 2-d (rows = dates)")
    if codes is None:
        codes = _codes(values.shape[1])
    return ReturnPanel(_dates(values.shape[0], start), list(codes), values)


@dataclass
class FactorSpec:
    """Linear factor model: ``returns[t] = loadings @ z[t] + noise_scale * eps[t]``
    with independent standard-normal factors ``z`` and noise ``eps``."""

    length: int
    loadings: np.ndarray  # (n_assets, n_factors)
    noise_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        self.loadings = np.asarray(self.loadings, dtype=float)
        if self.length < 4:
            raise InputError("length must be at least 4")
        if self.loadings.ndim != 2 or 0 in self.loadings.shape:
            raise InputError("loadings must be a non-empty 2-d array")
        if not np.isfinite(self.loadings).all():
            raise InputError("loadings contain non-finite values")
        if not self.noise_scale > 0:
            raise InputError("noise_scale must be positive")


def generate_panel(spec: FactorSpec) -> ReturnPanel:
    """Draw a panel from the factor model in ``spec``.

    The factor and noise streams come from two children of
    ``SeedSequence(seed)``, so they are independent and reproducible.
    """
    n_assets, n_factors = spec.loadings.shape
    seq_z, seq_eps = np.random.SeedSequence(spec.seed).spawn(2)
    z = np.random.default_rng(seq_z).standard_normal((spec.length, n_factors))
    eps = np.random.default_rng(seq_eps).standard_normal(
        (spec.length, n_assets))
    returns = z @ spec.loadings.T + spec.noise_scale * eps
    return returns_panel(returns)


def plant_chain(n_assets: int, length: int, rho: float,
                seed: int = 0) -> ReturnPanel:
    """Panel whose population correlation decays as ``rho ** |i - j|``.

    Built as a cross-sectional first-order chain: asset ``k+1`` equals
    ``rho * asset_k + sqrt(1 - rho^2) * fresh_noise``, which makes each
    non-adjacent link exactly the product of the adjacent links along the
    chain -- an entirely indirect correlation.
    """
    if n_assets < 3:
        raise InputError("a chain needs at least three assets to have an "
                         "indirect link")
    if length < 4:
        raise InputError("length must be at least 4")
    if not 0 < rho < 1:
        raise InputError(f"rho must lie strictly inside (0, 1), got {rho}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    shocks = rng.standard_normal((length, n_assets))
    returns = np.empty_like(shocks)
    returns[:, 0] = shocks[:, 0]
    mix = np.sqrt(1 - rho * rho)
    for k in range(1, n_assets):
        returns[:, k] = rho * returns[:, k - 1] + mix * shocks[:, k]
    return returns_panel(returns)


def plant_hub(n_assets: int, length: int, seed: int = 0) -> ReturnPanel:
    """Panel with one dominant asset every other asset loads on.

    Asset ``A00`` is a unit-variance factor; every other asset is
    ``0.7 * A00`` plus independent unit noise.  The hub's population
    correlation with each spoke (0.7 / sqrt(1.49) ~ 0.573) strictly
    exceeds every spoke-spoke correlation (0.49 / 1.49 ~ 0.329), so the
    hub carries the largest correlation mass by construction.
    """
    if n_assets < 3:
        raise InputError("a hub needs at least two spokes")
    if length < 4:
        raise InputError("length must be at least 4")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    hub = rng.standard_normal(length)
    noise = rng.standard_normal((length, n_assets - 1))
    returns = np.empty((length, n_assets))
    returns[:, 0] = hub
    for k in range(1, n_assets):
        returns[:, k] = 0.7 * hub + noise[:, k - 1]
    return returns_panel(returns)


def chain_population_matrix(n_assets: int, rho: float) -> CorrelationMatrix:
    """The exact population correlation matrix of :func:`plant_chain`."""
    if n_assets < 2:
        raise InputError("need at least two assets")
    if not 0 < rho < 1:
        raise InputError(f"rho must lie strictly inside (0, 1), got {rho}")
    idx = np.arange(n_assets)
    values = rho ** np.abs(idx[:, None] - idx[None, :]).astype(float)
    np.fill_diagonal(values, 1.0)
    return CorrelationMatrix(_codes(n_assets), None, values)
