"""Pointer-activity density over the normalized chart frame.

Counts fall into a g x g grid over the unit square; the attached inner
zone marks the central 70% per axis, where the data (as opposed to the
surrounding context elements) usually sits.  The grid is renderable data,
not a picture.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geometry import Rect
from ..tracelog import PointerTrace
from .paths import AnalysisError

INNER_ZONE_SPAN = 0.70

# central 70% of each axis: margins of 0.15 on every side
INNER_ZONE = Rect(0.15, 0.15, 0.85, 0.85)


@dataclass(frozen=True)
class DensityGrid:
    """counts[iy, ix] over the unit square; row 0 is the top edge."""

    bins: int
    counts: np.ndarray
    inner_zone: Rect = INNER_ZONE

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (self.bins, self.bins):
            raise AnalysisError(f"counts shape {counts.shape} != ({self.bins}, {self.bins})")
        if np.any(counts < 0):
            raise AnalysisError("counts must be nonnegative")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_dict(self) -> dict:
        return {
            "bins": self.bins,
            "counts": self.counts.tolist(),
            "inner_zone": self.inner_zone.as_list(),
            "total": self.total,
        }


def density_grid(traces: list[PointerTrace], bins: int = 64) -> DensityGrid:
    """Bin every sample of every trace; the total count equals the number
    of samples."""
    if bins < 2:
        raise AnalysisError("bins must be >= 2")
    xs: list[float] = []
    ys: list[float] = []
    for trace in traces:
        xs.extend(s.x for s in trace.samples)
        ys.extend(s.y for s in trace.samples)
    if not xs:
        return DensityGrid(bins, np.zeros((bins, bins), dtype=np.int64))
    counts, _, _ = np.histogram2d(ys, xs, bins=bins, range=[[0.0, 1.0], [0.0, 1.0]])
    return DensityGrid(bins, counts.astype(np.int64))
