"""Pure numpy implementation of the detrended cross-sum kernel.

Contract (shared with the compiled kernel in ``_dcca_cy``):

``pair_cross_sums(profiles, w)`` takes a C-contiguous ``(k, L)`` float64
array of integrated profiles and a box width ``2 <= w <= L`` and returns
the symmetric ``(k, k)`` matrix ``C`` with

    C[i, j] = sum over boxes beta and in-box positions gamma of
              r_i[beta, gamma] * r_j[beta, gamma]

where ``r_i[beta, gamma]`` is the residual of profile ``i`` inside the
sliding box starting at ``beta`` after removing that box's least-squares
line against the in-box coordinate ``gamma = 1..w``.  Boxes slide one step
at a time, so there are ``L - w + 1`` of them.

The caller divides by the ``w - 1`` / box-count factors; the kernel only
produces raw sums.  Within one call the diagonal and off-diagonal entries
are accumulated by the same reduction over the same residual arrays, which
keeps exact algebraic identities (e.g. C[i, i] == C[i, j] when the two
profiles are bitwise equal).
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def pair_cross_sums(profiles: np.ndarray, w: int) -> np.ndarray:
    profiles = np.ascontiguousarray(profiles, dtype=float)
    k, length = profiles.shape
    nboxes = length - w + 1
    gamma = np.arange(1.0, w + 1.0)
    sx = w * (w + 1.0) / 2.0
    sxx = w * (w + 1.0) * (2.0 * w + 1.0) / 6.0
    disc = w * sxx - sx * sx

    resid = np.empty((k, nboxes * w))
    for i in range(k):
        boxes = sliding_window_view(profiles[i], w)  # (nboxes, w)
        sy = boxes.sum(axis=1)
        sxy = boxes @ gamma
        slope = (w * sxy - sx * sy) / disc
        intercept = (sy - slope * sx) / w
        fitted = intercept[:, None] + slope[:, None] * gamma[None, :]
        resid[i] = (boxes - fitted).reshape(-1)

    out = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            s = float(np.dot(resid[i], resid[j]))
            out[i, j] = s
            out[j, i] = s
    return out
