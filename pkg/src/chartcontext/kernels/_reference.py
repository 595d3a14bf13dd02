"""Pure-Python/numpy reference implementations of the hot kernels.

Used when the compiled extension is unavailable (or forced via
CHARTCONTEXT_KERNEL=reference) and as the ground truth the native kernels
are tested against.
"""

from __future__ import annotations

import numpy as np


def dtw_cost(a: np.ndarray, b: np.ndarray) -> float:
    """Dynamic-time-warping alignment cost between two 2-D point sequences.

    Local cost is the Euclidean distance; allowed steps are (1,0), (0,1),
    (1,1) with unit weights.
    """
    n, m = a.shape[0], b.shape[0]
    diff = a[:, None, :] - b[None, :, :]
    local = np.sqrt((diff * diff).sum(axis=2)).tolist()

    row = local[0]
    prev = [0.0] * m
    prev[0] = row[0]
    for j in range(1, m):
        prev[j] = prev[j - 1] + row[j]
    for i in range(1, n):
        row = local[i]
        cur = [0.0] * m
        cur[0] = prev[0] + row[0]
        for j in range(1, m):
            best = prev[j]
            if prev[j - 1] < best:
                best = prev[j - 1]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = row[j] + best
        prev = cur
    return float(prev[m - 1])


def ss_within_batch(d2: np.ndarray, labels: np.ndarray, n_groups: int) -> np.ndarray:
    """Within-group sum of squares for a batch of labelings.

    ``d2`` is the (n, n) squared-distance matrix, ``labels`` a (P, n) array
    of group ids in [0, n_groups).  Row p yields
    sum over groups g of (1/n_g) * sum_{i<j in g} d2[i, j].
    """
    p, n = labels.shape
    onehot = np.zeros((p, n, n_groups), dtype=np.float64)
    rows = np.arange(n)
    for k in range(p):
        onehot[k, rows, labels[k]] = 1.0
    sizes = onehot.sum(axis=1)  # (P, a)
    if np.any(sizes == 0):
        raise ValueError("every group must be nonempty in every labeling")
    # Ordered-pair sums per group: diag of Z^T D2 Z; halve for i<j.
    t = np.einsum("ij,pja->pia", d2, onehot)
    pair_sums = np.einsum("pia,pia->pa", t, onehot)
    return (pair_sums / (2.0 * sizes)).sum(axis=1)
