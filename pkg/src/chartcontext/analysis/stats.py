"""Questionnaire aggregation and reporting descriptives."""

from __future__ import annotations

import math
from typing import Sequence

from .paths import AnalysisError


def sus_score(items: Sequence[int]) -> float:
    """Standard usability-scale aggregation of 10 responses on 1..5:
    odd items contribute (response - 1), even items (5 - response), the
    sum scaled by 2.5 onto 0..100."""
    items = list(items)
    if len(items) != 10:
        raise AnalysisError(f"need exactly 10 items, got {len(items)}")
    total = 0
    for i, r in enumerate(items, start=1):
        if not isinstance(r, int) or isinstance(r, bool) or not 1 <= r <= 5:
            raise AnalysisError(f"item {i}: response must be an integer in 1..5, got {r!r}")
        total += (r - 1) if i % 2 == 1 else (5 - r)
    return total * 2.5


def descriptives(values: Sequence[float]) -> tuple[float, float]:
    """(mean, sample standard deviation); needs n >= 2 for the sd."""
    values = [float(v) for v in values]
    n = len(values)
    if n < 2:
        raise AnalysisError("need at least 2 values for a standard deviation")
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)
