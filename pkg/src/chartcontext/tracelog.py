"""Pointer-trace recording in the exact shape the analysis pipeline reads.

A trace is a time-ordered list of (x, y, t) samples in normalized stimulus
coordinates (comparable across display sizes and magnification levels),
plus interaction events.  Files are line-delimited: ``t,x,y`` for samples,
``t,EVENT,kind,payload`` for events, one file per (participant, condition,
question).
"""

from __future__ import annotations

import json
import os
import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

EVENT_KINDS = ("click", "setting-change", "question-shown", "answer", "skip", "timeout")

NOMINAL_HZ = 30

_ID_RE = re.compile(r"^[A-Za-z0-9.-]+$")


class TraceError(ValueError):
    pass


@dataclass(frozen=True)
class PointerSample:
    """One pointer position: x/y clamped to [0,1], t in ms since question start."""

    x: float
    y: float
    t: int

    def __post_init__(self):
        object.__setattr__(self, "x", min(max(self.x, 0.0), 1.0))
        object.__setattr__(self, "y", min(max(self.y, 0.0), 1.0))


@dataclass(frozen=True)
class EventRecord:
    t: int
    kind: str
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise TraceError(f"unknown event kind {self.kind!r}")


class PointerTrace:
    """Append-only sample/event log for one question.

    Timestamps must be strictly increasing within the samples; the nominal
    cadence is 30 Hz but gaps are fine (an idle pointer produces no
    samples).
    """

    def __init__(self, participant_id: str, condition: str, variant_tag: str, question_id: str):
        for name, value in (
            ("participant_id", participant_id),
            ("condition", condition),
            ("variant_tag", variant_tag),
            ("question_id", question_id),
        ):
            if not _ID_RE.match(value):
                raise TraceError(f"{name} {value!r} not filename-safe (use letters/digits/./-)")
        self.participant_id = participant_id
        self.condition = condition
        self.variant_tag = variant_tag
        self.question_id = question_id
        self.samples: list[PointerSample] = []
        self.events: list[EventRecord] = []

    @property
    def trace_id(self) -> str:
        return f"P{self.participant_id}_{self.condition}_{self.variant_tag}_{self.question_id}"

    def file_name(self) -> str:
        return self.trace_id + ".trace"

    def append(self, sample: PointerSample) -> "PointerTrace":
        if self.samples and sample.t <= self.samples[-1].t:
            raise TraceError(
                f"non-monotone timestamp {sample.t} after {self.samples[-1].t}"
            )
        self.samples.append(sample)
        return self

    def log_event(self, event: EventRecord) -> "PointerTrace":
        self.events.append(event)
        return self


def append_sample(trace: PointerTrace, sample: PointerSample) -> PointerTrace:
    return trace.append(sample)


def _cadence_bucket(t, hz: int):
    # Exact arithmetic: windows are [k/hz, (k+1)/hz) seconds with t in ms.
    if isinstance(t, int):
        return (t * hz) // 1000
    return (Fraction(t) * hz) // 1000


def downsample_to_cadence(samples: Iterable[tuple[float, float, float]], hz: int = NOMINAL_HZ) -> list[PointerSample]:
    """Reduce raw (x, y, t) samples to at most one per 1/hz window, keeping
    the latest in each window.  Idempotent at the same cadence."""
    if hz <= 0:
        raise TraceError("hz must be positive")
    kept: list[PointerSample] = []
    last_bucket = None
    last_t = None
    for x, y, t in samples:
        if last_t is not None and t <= last_t:
            raise TraceError(f"non-monotone timestamp {t} after {last_t}")
        last_t = t
        bucket = _cadence_bucket(t, hz)
        sample = PointerSample(x=x, y=y, t=int(t))
        if bucket == last_bucket:
            kept[-1] = sample
        else:
            kept.append(sample)
            last_bucket = bucket
    return kept


# --- file format ---------------------------------------------------------------

def trace_to_lines(trace: PointerTrace) -> list[str]:
    lines = [f"{s.t},{s.x:.6f},{s.y:.6f}" for s in trace.samples]
    for e in trace.events:
        payload = json.dumps(e.payload, sort_keys=True, separators=(",", ":"))
        lines.append(f"{e.t},EVENT,{e.kind},{payload}")
    return lines


def write_trace_file(trace: PointerTrace, directory) -> str:
    path = os.path.join(str(directory), trace.file_name())
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(trace_to_lines(trace)))
        fh.write("\n")
    return path


def parse_trace_name(stem: str) -> tuple[str, str, str, str]:
    m = re.match(r"^P([A-Za-z0-9.-]+)_([A-Za-z0-9.-]+)_(v\d+)_([A-Za-z0-9.-]+)$", stem)
    if not m:
        raise TraceError(f"trace name {stem!r} does not match P<pid>_<condition>_<variant>_<qid>")
    return m.group(1), m.group(2), m.group(3), m.group(4)


def trace_from_lines(name_stem: str, lines: Iterable[str]) -> PointerTrace:
    pid, condition, variant, qid = parse_trace_name(name_stem)
    trace = PointerTrace(pid, condition, variant, qid)
    for ln, raw in enumerate(lines, start=1):
        raw = raw.strip()
        if not raw:
            continue
        parts = raw.split(",", 3)
        if len(parts) >= 2 and parts[1] == "EVENT":
            if len(parts) != 4:
                raise TraceError(f"line {ln}: malformed event record")
            trace.log_event(EventRecord(t=int(parts[0]), kind=parts[2], payload=json.loads(parts[3])))
        else:
            if len(parts) != 3:
                raise TraceError(f"line {ln}: malformed sample record")
            trace.append(PointerSample(x=float(parts[1]), y=float(parts[2]), t=int(parts[0])))
    return trace


def read_trace_file(path) -> PointerTrace:
    stem = os.path.splitext(os.path.basename(str(path)))[0]
    with open(path, "r", encoding="utf-8") as fh:
        return trace_from_lines(stem, fh)


# --- non-blocking hand-off buffer -----------------------------------------------

class TraceBuffer:
    """Bounded hand-off queue between the input thread and the writer.

    ``push`` never blocks: when full, the oldest record is dropped and
    counted so overload is visible in reports rather than stalling input
    handling.
    """

    def __init__(self, capacity: int = 4096):
        if capacity <= 0:
            raise TraceError("capacity must be positive")
        self._capacity = capacity
        self._items: list = []
        self._dropped = 0
        self._lock = threading.Lock()

    def push(self, item) -> None:
        with self._lock:
            if len(self._items) >= self._capacity:
                self._items.pop(0)
                self._dropped += 1
            self._items.append(item)

    def drain(self) -> list:
        with self._lock:
            items, self._items = self._items, []
            return items

    @property
    def dropped(self) -> int:
        with self._lock:
            return self._dropped

    def __len__(self) -> int:
        with self._lock:
            return len(self._items)
