"""Hot numeric kernels with backend selection at import time.

The compiled Cython core is used when present; otherwise the pure
numpy/Python reference takes over, so an install without a C compiler
still works (slower).  Set CHARTCONTEXT_KERNEL=reference|native to force
a backend (the benchmark uses this to compare them).
"""

from __future__ import annotations

import os

import numpy as np

from . import _reference

_FORCED = os.environ.get("CHARTCONTEXT_KERNEL", "").strip().lower()

if _FORCED == "reference":
    _impl = _reference
    BACKEND = "reference"
elif _FORCED in ("", "native"):
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "native"
    except ImportError:
        if _FORCED == "native":
            raise
        _impl = _reference
        BACKEND = "reference"
else:
    raise RuntimeError(
        f"CHARTCONTEXT_KERNEL={_FORCED!r} not understood (use 'native' or 'reference')"
    )


def backend() -> str:
    return BACKEND


def _as_path(points) -> np.ndarray:
    arr = np.ascontiguousarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0:
        raise ValueError("path must be a nonempty (n, 2) array")
    return arr


def dtw_cost(a, b) -> float:
    """Classic DTW alignment cost (Euclidean local cost, unit-weight steps
    right/down/diagonal) between two nonempty 2-D point sequences."""
    return float(_impl.dtw_cost(_as_path(a), _as_path(b)))


def ss_within_batch(d2, labels, n_groups: int) -> np.ndarray:
    """Batched PERMANOVA within-group sum of squares, one value per row of
    ``labels`` (group ids in [0, n_groups))."""
    d2 = np.ascontiguousarray(d2, dtype=np.float64)
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    if labels.ndim != 2:
        raise ValueError("labels must be (P, n)")
    if n_groups < 1:
        raise ValueError("n_groups must be >= 1")
    return _impl.ss_within_batch(d2, labels, int(n_groups))
