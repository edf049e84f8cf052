"""Connectivity-preserving thresholding of a direct-link matrix.

Every node's strongest off-diagonal link defines its row maximum
``sigma_i``; the global cut ``sigma_min = min_i sigma_i`` is the largest
threshold that still leaves no node isolated.  Off-diagonal entries at or
above the cut become edges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .deconv import DirectMatrix
from .errors import InputError, NumericalError
from .network import WeightedNetwork, connected_component_count, fallback_codes


@dataclass
class ThresholdReport:
    """Bookkeeping from one thresholding pass."""

    row_maxima: np.ndarray  # sigma_i, length n
    sigma_min: float
    kept_edges: int
    theta: float  # kept_edges / C(n, 2)
    n_components: int


def threshold_network(direct) -> tuple[WeightedNetwork, ThresholdReport]:
    """Cut a :class:`DirectMatrix` into a weighted network.

    Keeps the off-diagonal entries ``>= sigma_min`` (the smallest row
    maximum), so every node retains its strongest link and none is
    isolated.  ``theta`` reports the kept fraction of the ``C(n, 2)``
    unordered pairs; the diagonal never participates.  Raises
    :class:`NumericalError` when ``sigma_min <= 0``, since a non-positive
    strongest link cannot be an edge weight (the message names the weakest
    node).
    """
    if not isinstance(direct, DirectMatrix):
        direct = DirectMatrix(getattr(direct, "codes", None),
                              np.asarray(direct, dtype=float))
    n = direct.n
    if n < 2:
        raise InputError("need at least two nodes to threshold")
    codes = list(direct.codes) if direct.codes is not None else fallback_codes(n)
    values = direct.values

    off = values.copy()
    np.fill_diagonal(off, -np.inf)
    row_maxima = off.max(axis=1)
    weakest = int(np.argmin(row_maxima))
    sigma_min = float(row_maxima[weakest])
    if sigma_min <= 0:
        raise NumericalError(
            f"strongest link of node {codes[weakest]!r} is {sigma_min!r}; "
            "a non-positive cut cannot produce edge weights"
        )

    edges = [
        (i, j, float(values[i, j]))
        for i in range(n)
        for j in range(i + 1, n)
        if values[i, j] >= sigma_min
    ]
    pairs = n * (n - 1) // 2
    report = ThresholdReport(
        row_maxima=row_maxima,
        sigma_min=sigma_min,
        kept_edges=len(edges),
        theta=len(edges) / pairs,
        n_components=connected_component_count(n, edges),
    )
    return WeightedNetwork(codes, edges), report
