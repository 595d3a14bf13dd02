"""Axis-aligned rectangles in normalized [0,1] coordinates.

Origin is top-left, x grows rightward, y grows downward.  Every box in the
annotation files, every layout result, and every pointer sample uses this
convention; pixel coordinates appear only at I/O edges.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Rect:
    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def center(self) -> tuple[float, float]:
        return ((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0)

    def is_ordered(self) -> bool:
        return self.x0 <= self.x1 and self.y0 <= self.y1

    def in_unit_square(self) -> bool:
        return 0.0 <= self.x0 <= self.x1 <= 1.0 and 0.0 <= self.y0 <= self.y1 <= 1.0

    def contains_point(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def contains_rect(self, other: "Rect", eps: float = 0.0) -> bool:
        return (
            other.x0 >= self.x0 - eps
            and other.y0 >= self.y0 - eps
            and other.x1 <= self.x1 + eps
            and other.y1 <= self.y1 + eps
        )

    def intersect(self, other: "Rect") -> "Rect | None":
        """Overlap of two rects, or None when they do not overlap."""
        x0 = max(self.x0, other.x0)
        y0 = max(self.y0, other.y0)
        x1 = min(self.x1, other.x1)
        y1 = min(self.y1, other.y1)
        if x0 > x1 or y0 > y1:
            return None
        return Rect(x0, y0, x1, y1)

    def as_list(self) -> list[float]:
        return [self.x0, self.y0, self.x1, self.y1]

    @classmethod
    def from_seq(cls, seq) -> "Rect":
        vals = list(seq)
        if len(vals) != 4:
            raise ValueError(f"rect needs 4 numbers, got {len(vals)}")
        return cls(*(float(v) for v in vals))


UNIT = Rect(0.0, 0.0, 1.0, 1.0)


def clamp(value: float, lo: float, hi: float) -> float:
    return lo if value < lo else hi if value > hi else value


def overlap_1d(a0: float, a1: float, b0: float, b1: float) -> float:
    """Length of the overlap of intervals [a0,a1] and [b0,b1] (0 if disjoint)."""
    return max(0.0, min(a1, b1) - max(a0, b0))
