"""Pairwise trajectory distances (dynamic time warping) and the labeled
distance matrix they fill.

The matrix is symmetric with a zero diagonal; rows carry the trace id and
the condition the trace was recorded under, which is what the group test
permutes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from .paths import AnalysisError, ResampledPath


def dtw(a: ResampledPath | np.ndarray, b: ResampledPath | np.ndarray) -> float:
    """DTW alignment cost between two point sequences (symmetric, zero for
    identical paths)."""
    pa = a.points if isinstance(a, ResampledPath) else a
    pb = b.points if isinstance(b, ResampledPath) else b
    return kernels.dtw_cost(pa, pb)


@dataclass(frozen=True)
class DistanceMatrix:
    values: np.ndarray
    ids: tuple[str, ...]
    groups: tuple[str, ...] = field(default=())

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        n = len(self.ids)
        if vals.shape != (n, n):
            raise AnalysisError(f"matrix shape {vals.shape} does not match {n} ids")
        if self.groups and len(self.groups) != n:
            raise AnalysisError("group labels must match the number of rows")
        if np.any(vals < 0):
            raise AnalysisError("distances must be nonnegative")
        if np.any(np.abs(np.diag(vals)) > 1e-12):
            raise AnalysisError("diagonal must be zero")
        if not np.allclose(vals, vals.T, rtol=0.0, atol=1e-12):
            raise AnalysisError("matrix must be symmetric")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "groups", tuple(self.groups))

    @property
    def n(self) -> int:
        return len(self.ids)


def pairwise_dtw_matrix(paths: list[ResampledPath], groups: list[str] | None = None) -> DistanceMatrix:
    """All-pairs DTW distances; groups default to empty labels."""
    if not paths:
        raise AnalysisError("no paths")
    n = len(paths)
    vals = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            d = dtw(paths[i], paths[j])
            vals[i, j] = d
            vals[j, i] = d
    ids = tuple(p.trace_id or f"path{i}" for i, p in enumerate(paths))
    return DistanceMatrix(vals, ids, tuple(groups) if groups else ())


# --- delimiter-separated text -------------------------------------------------

def matrix_to_tsv(m: DistanceMatrix) -> str:
    lines = ["id\t" + "\t".join(m.ids)]
    for i, row_id in enumerate(m.ids):
        lines.append(row_id + "\t" + "\t".join(f"{v:.12g}" for v in m.values[i]))
    return "\n".join(lines) + "\n"


def matrix_from_tsv(text: str) -> DistanceMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise AnalysisError("empty matrix file")
    header = lines[0].split("\t")
    if header[0] != "id":
        raise AnalysisError("matrix header must start with 'id'")
    ids = tuple(header[1:])
    rows = []
    row_ids = []
    for ln in lines[1:]:
        parts = ln.split("\t")
        row_ids.append(parts[0])
        rows.append([float(v) for v in parts[1:]])
    if tuple(row_ids) != ids:
        raise AnalysisError("matrix row ids do not match header ids")
    return DistanceMatrix(np.array(rows, dtype=np.float64), ids)


def labels_to_tsv(ids, groups) -> str:
    lines = ["id\tgroup"]
    lines += [f"{i}\t{g}" for i, g in zip(ids, groups)]
    return "\n".join(lines) + "\n"


def labels_from_tsv(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].split("\t") != ["id", "group"]:
        raise AnalysisError("labels header must be 'id<TAB>group'")
    for ln in lines[1:]:
        parts = ln.split("\t")
        if len(parts) != 2:
            raise AnalysisError(f"malformed label line {ln!r}")
        out[parts[0]] = parts[1]
    return out
