"""Selects the detrended cross-sum kernel at import time.

The compiled Cython kernel is preferred when its extension module built;
otherwise the numpy implementation is used.  Set ``DDFEN_KERNEL=numpy`` or
``DDFEN_KERNEL=cython`` to force one (forcing ``cython`` on a pure-Python
install raises ImportError so the misconfiguration is loud).

``ACTIVE_KERNEL`` names the implementation actually in use.
"""

from __future__ import annotations

import os

_choice = os.environ.get("DDFEN_KERNEL", "auto").strip().lower() or "auto"
if _choice not in ("auto", "cython", "numpy"):
    raise ImportError(
        f"DDFEN_KERNEL={_choice!r} not understood; "
        "use 'auto', 'cython' or 'numpy'"
    )

if _choice == "numpy":
    from . import _dcca_numpy as _impl

    ACTIVE_KERNEL = "numpy"
elif _choice == "cython":
    from . import _dcca_cy as _impl  # type: ignore[attr-defined]

    ACTIVE_KERNEL = "cython"
else:
    try:
        from . import _dcca_cy as _impl  # type: ignore[attr-defined]

        ACTIVE_KERNEL = "cython"
    except ImportError:
        from . import _dcca_numpy as _impl

        ACTIVE_KERNEL = "numpy"

pair_cross_sums = _impl.pair_cross_sums
