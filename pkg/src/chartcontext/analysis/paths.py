"""Trajectory preprocessing: uniform-in-time resampling and mean paths.

Resampling interpolates position over time (not arc length), which holds
the position across idle gaps; every trajectory comes out at the same step
count so downstream alignment needs no window constraints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..tracelog import PointerSample, PointerTrace

RESAMPLE_STEPS = 500


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class ResampledPath:
    """Fixed-length (steps, 2) point sequence, uniform in time, plus the id
    of the trace it came from."""

    points: np.ndarray
    trace_id: str = ""

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise AnalysisError("points must be (steps, 2)")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]


def resample_points(xs, ys, ts, steps: int = RESAMPLE_STEPS) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    ts = np.asarray(ts, dtype=np.float64)
    if xs.shape[0] < 2:
        raise AnalysisError("need at least 2 samples to resample")
    if steps < 2:
        raise AnalysisError("steps must be >= 2")
    if np.any(np.diff(ts) <= 0):
        raise AnalysisError("timestamps must be strictly increasing")
    grid = np.linspace(ts[0], ts[-1], steps)
    return np.column_stack((np.interp(grid, ts, xs), np.interp(grid, ts, ys)))


def resample(trace: PointerTrace, steps: int = RESAMPLE_STEPS) -> ResampledPath:
    """Trajectory resampled to ``steps`` points at uniform time spacing,
    linearly interpolating between bracketing samples.  Endpoints are
    preserved exactly."""
    xs = [s.x for s in trace.samples]
    ys = [s.y for s in trace.samples]
    ts = [s.t for s in trace.samples]
    return ResampledPath(resample_points(xs, ys, ts, steps), trace_id=trace.trace_id)


def mean_path(paths: list[ResampledPath]) -> ResampledPath:
    """Pointwise arithmetic mean per step index across trajectories."""
    if not paths:
        raise AnalysisError("mean_path needs at least one path")
    lengths = {len(p) for p in paths}
    if len(lengths) != 1:
        raise AnalysisError(f"paths have mixed lengths {sorted(lengths)}")
    stack = np.stack([p.points for p in paths])
    return ResampledPath(stack.mean(axis=0), trace_id=f"mean(n={len(paths)})")


def drop_idle_prefix(trace: PointerTrace) -> PointerTrace:
    """Analysis-side trim: drop samples recorded before the pointer first
    moved (question-reading phase), keeping the last resting sample so the
    path still starts from rest.  A trace with no movement is returned
    unchanged."""
    samples = trace.samples
    first_move = None
    for i in range(1, len(samples)):
        if (samples[i].x, samples[i].y) != (samples[0].x, samples[0].y):
            first_move = i
            break
    if first_move is None or first_move == 1:
        return trace
    trimmed = PointerTrace(
        trace.participant_id, trace.condition, trace.variant_tag, trace.question_id
    )
    for s in samples[first_move - 1 :]:
        trimmed.append(PointerSample(s.x, s.y, s.t))
    for e in trace.events:
        trimmed.log_event(e)
    return trimmed
