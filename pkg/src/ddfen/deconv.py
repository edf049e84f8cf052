"""Spectral removal of indirect correlations.

An observed correlation matrix is modeled as the series sum of direct
effects propagating along paths: ``G_obs = G_d + G_d^2 + G_d^3 + ...``.
Both sides share eigenvectors, so the model inverts spectrally: each
observed eigenvalue ``lam`` maps to the direct eigenvalue

    lam_d = lam / (1 + lam)

and the direct matrix is rebuilt from the mapped spectrum.  The forward
map (``convolve``) is ``lam = lam_d / (1 - lam_d)``, defined while the
direct spectral radius stays below 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, InvariantError, NumericalError

#: Observed eigenvalues at or below ``-1 + EIG_TOL`` make the spectral map
#: singular (or flip its sign); they are rejected.
EIG_TOL = 1e-8


@dataclass
class SpectralDecomposition:
    """Eigenpairs of a symmetric matrix, eigenvalues descending."""

    eigenvalues: np.ndarray  # shape (n,), descending
    eigenvectors: np.ndarray  # shape (n, n), column k pairs with value k

    def __post_init__(self):
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=float)
        self.eigenvectors = np.asarray(self.eigenvectors, dtype=float)
        n = self.eigenvalues.size
        if self.eigenvectors.shape != (n, n):
            raise InvariantError("eigenvector matrix shape mismatch")
        if n > 1 and (np.diff(self.eigenvalues) > 0).any():
            raise InvariantError("eigenvalues must be in descending order")


@dataclass
class DirectMatrix:
    """Symmetric matrix of direct (deconvolved) links.

    Produced by :func:`deconvolve`, whose spectral map keeps every
    eigenvalue strictly below 1, so the forward map always exists.
    """

    codes: list[str] | None
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise InvariantError("direct matrix must be square")
        if self.codes is not None and len(self.codes) != self.values.shape[0]:
            raise InvariantError("codes do not match matrix size")
        if not np.isfinite(self.values).all():
            raise InvariantError("direct matrix contains non-finite values")
        if np.abs(self.values - self.values.T).max(initial=0.0) > 1e-9:
            raise InvariantError("direct matrix is not symmetric within 1e-9")

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _symmetric_values(matrix, what: str):
    """Extract (values, codes) from a matrix-like argument."""
    codes = getattr(matrix, "codes", None)
    values = np.asarray(getattr(matrix, "values", matrix), dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise InputError(f"{what} must be a square matrix")
    if values.shape[0] == 0:
        raise InputError(f"{what} is empty")
    if not np.isfinite(values).all():
        raise InputError(f"{what} contains non-finite values")
    asym = np.abs(values - values.T).max(initial=0.0)
    if asym > 1e-9:
        raise InputError(
            f"{what} is asymmetric (max |A - A^T| = {asym:.3e})"
        )
    return values, codes


def eigendecompose(matrix) -> SpectralDecomposition:
    """Symmetric eigendecomposition, eigenvalues sorted descending.

    Accepts a :class:`~ddfen.dcca.CorrelationMatrix`, a
    :class:`DirectMatrix`, or a plain symmetric array.
    """
    values, _ = _symmetric_values(matrix, "matrix")
    try:
        lam, vec = np.linalg.eigh(values)
    except np.linalg.LinAlgError as err:
        raise NumericalError(
            f"eigendecomposition failed on a {values.shape[0]}x"
            f"{values.shape[0]} matrix (max |entry| ="
            f" {np.abs(values).max():.3e}): {err}"
        ) from err
    order = np.argsort(lam)[::-1]
    return SpectralDecomposition(lam[order], vec[:, order])


def deconvolve(matrix, *, eigen_scale: float = 1.0) -> DirectMatrix:
    """Strip indirect correlation paths from an observed matrix.

    ``eigen_scale`` optionally shrinks the observed spectrum before the
    map is applied (values in ``(0, 1]``; 1 leaves the spectrum alone).
    Raises :class:`NumericalError` when any (scaled) eigenvalue lies at or
    below ``-1 + 1e-8``: at ``-1`` the map is singular, and below it the
    mapped eigenvalue would cross 1 and break the forward model.
    """
    if not 0 < eigen_scale <= 1:
        raise InputError(f"eigen_scale must be in (0, 1], got {eigen_scale}")
    values, codes = _symmetric_values(matrix, "observed matrix")
    dec = eigendecompose(values)
    lam = dec.eigenvalues * eigen_scale
    worst = lam.min()
    if worst <= -1 + EIG_TOL:
        raise NumericalError(
            f"eigenvalue {worst!r} is at or below -1 + {EIG_TOL}; the "
            "spectral map lam/(1+lam) is singular there"
        )
    mapped = lam / (1 + lam)
    direct = (dec.eigenvectors * mapped) @ dec.eigenvectors.T
    return DirectMatrix(list(codes) if codes is not None else None,
                        (direct + direct.T) / 2)


def convolve(matrix) -> np.ndarray:
    """Forward map: rebuild the observed matrix from a direct one.

    Inverse of :func:`deconvolve` (up to rounding).  Requires the direct
    spectral radius to stay below ``1 - 1e-8``.
    """
    values, _ = _symmetric_values(matrix, "direct matrix")
    dec = eigendecompose(values)
    radius = np.abs(dec.eigenvalues).max()
    if radius >= 1 - EIG_TOL:
        raise NumericalError(
            f"direct spectral radius {radius!r} is at or above 1 - {EIG_TOL};"
            " the path series does not converge"
        )
    mapped = dec.eigenvalues / (1 - dec.eigenvalues)
    observed = (dec.eigenvectors * mapped) @ dec.eigenvectors.T
    return (observed + observed.T) / 2
