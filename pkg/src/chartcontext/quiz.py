"""Quiz sessions: question sequencing, time limits, outcomes, scoring,
counterbalanced condition assignment, and the data transforms used to build
question-set variants.

Scores use exact rational arithmetic (correct +1, timeout/skip 0, incorrect
-1/N_op) and render as decimals.  Timing runs off an injected monotonic
clock so sessions are replayable and testable with a fake clock.
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .annotation import CHART_TYPES

CONDITIONS = ("baseline", "mini-map", "dynamic-context")
VARIANTS = ("v0", "v1", "v2")
OUTCOME_KINDS = ("correct", "incorrect", "timeout", "skip")

# Provenance tags for how a variant question was derived from the original.
MODIFICATION_TAGS = ("topic", "orientation", "data:permutation", "data:noise", "data:magnitude")

QUESTIONS_PER_TEST = 12

# Base per-question time limit of the original test, in seconds.  Sessions
# run at 150% of it (extended-time practice), i.e. 38 seconds.
BASE_TIME_LIMIT_S = 25

# Condition order counterbalancing: row = participant_index mod 6, each row
# is the (condition, variant) sequence for that participant.  Across the six
# rows every condition sees every variant exactly twice.
ORDER_TABLE: tuple[tuple[tuple[str, str], ...], ...] = (
    (("baseline", "v0"), ("dynamic-context", "v1"), ("mini-map", "v2")),
    (("dynamic-context", "v0"), ("mini-map", "v1"), ("baseline", "v2")),
    (("mini-map", "v0"), ("baseline", "v1"), ("dynamic-context", "v2")),
    (("mini-map", "v2"), ("dynamic-context", "v1"), ("baseline", "v0")),
    (("dynamic-context", "v2"), ("baseline", "v1"), ("mini-map", "v0")),
    (("baseline", "v2"), ("mini-map", "v1"), ("dynamic-context", "v0")),
)


class QuizError(ValueError):
    pass


@dataclass(frozen=True)
class Question:
    question_id: str
    chart_id: str
    prompt: str
    options: tuple[str, ...]
    correct_index: int
    variant_tag: str
    chart_type: str
    modifications: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.options) < 2:
            raise QuizError(f"{self.question_id}: needs at least 2 options")
        if not 0 <= self.correct_index < len(self.options):
            raise QuizError(f"{self.question_id}: correct_index out of range")
        if self.variant_tag not in VARIANTS:
            raise QuizError(f"{self.question_id}: unknown variant {self.variant_tag!r}")
        for tag in self.modifications:
            if tag not in MODIFICATION_TAGS:
                raise QuizError(f"{self.question_id}: unknown modification {tag!r}")

    @property
    def n_options(self) -> int:
        return len(self.options)


@dataclass(frozen=True)
class Outcome:
    kind: str
    elapsed: float
    answer_index: int | None = None

    def __post_init__(self):
        if self.kind not in OUTCOME_KINDS:
            raise QuizError(f"unknown outcome kind {self.kind!r}")
        if self.elapsed < 0:
            raise QuizError("elapsed must be nonnegative")


@dataclass(frozen=True)
class ConditionAssignment:
    order_index: int
    sequence: tuple[tuple[str, str], ...]


@dataclass
class QuizSession:
    participant_id: str
    condition: str
    variant_tag: str
    time_limit_s: int
    shuffle_seed: int
    records: list[tuple[Question, Outcome]] = field(default_factory=list)
    settings: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.condition not in CONDITIONS:
            raise QuizError(f"unknown condition {self.condition!r}")
        if self.variant_tag not in VARIANTS:
            raise QuizError(f"unknown variant {self.variant_tag!r}")


def time_limit(base_seconds) -> int:
    """Per-question limit at 150% of the base, rounded up to whole seconds
    (38 s for the original 25 s base)."""
    if base_seconds <= 0:
        raise QuizError("base_seconds must be positive")
    return math.ceil(Fraction(3, 2) * Fraction(base_seconds))


def score_test(outcomes: Iterable[tuple[Outcome, int]]) -> Fraction:
    """Test score: +1 per correct, 0 per timeout/skip, -1/N_op per incorrect.

    ``outcomes`` pairs each Outcome with that question's option count.
    """
    total = Fraction(0)
    n = 0
    for outcome, n_op in outcomes:
        n += 1
        if outcome.kind == "correct":
            total += 1
        elif outcome.kind == "incorrect":
            if n_op < 2:
                raise QuizError(f"invalid option count {n_op}")
            total -= Fraction(1, n_op)
    if n == 0:
        raise QuizError("no outcomes to score")
    return total


def format_score(score: Fraction, places: int = 6) -> str:
    """Decimal rendering of an exact score: 31/4 -> '7.75'."""
    sign = "-" if score < 0 else ""
    scaled = round(abs(score) * 10**places)
    whole, frac = divmod(scaled, 10**places)
    if frac == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}." + f"{frac:0{places}d}".rstrip("0")


def score_session(session: QuizSession) -> Fraction:
    return score_test((o, q.n_options) for q, o in session.records)


def test_duration(session: QuizSession) -> float:
    """Total answering time: per-question elapsed, capped at the limit."""
    if not session.records:
        raise QuizError("empty session")
    return sum(min(o.elapsed, session.time_limit_s) for _, o in session.records)


def assign_order(participant_index: int) -> ConditionAssignment:
    """Counterbalanced (condition, variant) sequence for one participant:
    row ``participant_index mod 6`` of the order table."""
    row = participant_index % len(ORDER_TABLE)
    return ConditionAssignment(order_index=row, sequence=ORDER_TABLE[row])


def shuffle_questions(questions: Sequence[Question], seed: int) -> list[Question]:
    """Seeded question order for one session; the seed is recorded in the
    session log so the order is replayable."""
    out = list(questions)
    random.Random(seed).shuffle(out)
    return out


# --- variant data transforms -------------------------------------------------

def transform_permute(series: Sequence[float], permutation: Sequence[int]) -> list[float]:
    """Reorder data points: result[i] = series[permutation[i]]."""
    n = len(series)
    if sorted(permutation) != list(range(n)):
        raise QuizError("permutation is not a bijection on the series indices")
    return [series[permutation[i]] for i in range(n)]


def transform_noise(series: Sequence[float], amplitude: float, seed: int) -> list[float]:
    """Perturb each point by a seeded uniform draw in [-amplitude, +amplitude]."""
    if amplitude < 0:
        raise QuizError("amplitude must be nonnegative")
    rng = random.Random(seed)
    return [v + rng.uniform(-amplitude, amplitude) for v in series]


def transform_magnitude(series: Sequence[float], k: float) -> list[float]:
    """Scale every data point by the constant k (k = 0 would destroy the data)."""
    if k == 0:
        raise QuizError("k must be nonzero")
    return [k * v for v in series]


# --- variant coverage --------------------------------------------------------

def check_variant_coverage(questions: Iterable[Question]) -> list[str]:
    """Violations of full coverage: every variant needs all 12 chart types,
    one question each.  Empty list means the corpus is complete."""
    seen: dict[str, dict[str, list[str]]] = {v: {} for v in VARIANTS}
    out: list[str] = []
    for q in questions:
        seen[q.variant_tag].setdefault(q.chart_type, []).append(q.question_id)
    for variant in VARIANTS:
        for chart_type in CHART_TYPES:
            ids = seen[variant].get(chart_type, [])
            if not ids:
                out.append(f"{variant}: missing {chart_type} question")
            elif len(ids) > 1:
                out.append(f"{variant}: duplicate {chart_type} questions ({', '.join(sorted(ids))})")
        for chart_type in sorted(set(seen[variant]) - set(CHART_TYPES)):
            out.append(f"{variant}: unknown chart type {chart_type!r}")
    return out


# --- session runner ----------------------------------------------------------

class SessionRunner:
    """Sequences one session: strictly ordered questions, a per-question
    countdown against the injected monotonic clock, and skip/timeout flow.

    Skips are user-initiated before the limit; timeouts are produced when
    the limit is reached (an answer arriving at or after the limit records
    a timeout with elapsed pinned to the limit).
    """

    def __init__(
        self,
        session: QuizSession,
        questions: Sequence[Question],
        clock: Callable[[], float] = time.monotonic,
    ):
        if not questions:
            raise QuizError("no questions")
        for q in questions:
            if q.variant_tag != session.variant_tag:
                raise QuizError(
                    f"{q.question_id}: variant {q.variant_tag} does not match "
                    f"session variant {session.variant_tag}"
                )
        self.session = session
        self.order = shuffle_questions(questions, session.shuffle_seed)
        self._clock = clock
        self._index = 0
        self._shown_at: float | None = None

    @property
    def finished(self) -> bool:
        return self._index >= len(self.order)

    @property
    def current(self) -> Question:
        if self.finished:
            raise QuizError("session already finished")
        return self.order[self._index]

    def show_question(self) -> Question:
        question = self.current
        self._shown_at = self._clock()
        return question

    def remaining(self) -> float:
        if self._shown_at is None:
            raise QuizError("question not shown")
        return max(0.0, self.session.time_limit_s - (self._clock() - self._shown_at))

    def _record(self, outcome: Outcome) -> Outcome:
        self.session.records.append((self.current, outcome))
        self._index += 1
        self._shown_at = None
        return outcome

    def _elapsed(self) -> float:
        if self._shown_at is None:
            raise QuizError("question not shown")
        return self._clock() - self._shown_at

    def answer(self, answer_index: int) -> Outcome:
        question = self.current
        elapsed = self._elapsed()
        if elapsed >= self.session.time_limit_s:
            return self.timeout()
        kind = "correct" if answer_index == question.correct_index else "incorrect"
        return self._record(Outcome(kind=kind, elapsed=elapsed, answer_index=answer_index))

    def skip(self) -> Outcome:
        elapsed = self._elapsed()
        if elapsed >= self.session.time_limit_s:
            return self.timeout()
        return self._record(Outcome(kind="skip", elapsed=elapsed))

    def timeout(self) -> Outcome:
        # System-initiated at the limit; elapsed is pinned to the limit.
        self._elapsed()
        return self._record(Outcome(kind="timeout", elapsed=float(self.session.time_limit_s)))


# --- session log serialization ------------------------------------------------

def session_to_dict(session: QuizSession) -> dict:
    return {
        "participant_id": session.participant_id,
        "condition": session.condition,
        "variant_tag": session.variant_tag,
        "time_limit_s": session.time_limit_s,
        "shuffle_seed": session.shuffle_seed,
        "settings": session.settings,
        "records": [
            {
                "question_id": q.question_id,
                "chart_id": q.chart_id,
                "chart_type": q.chart_type,
                "n_options": q.n_options,
                "kind": o.kind,
                "answer_index": o.answer_index,
                "elapsed": o.elapsed,
            }
            for q, o in session.records
        ],
    }


def session_to_json(session: QuizSession) -> str:
    return json.dumps(session_to_dict(session), indent=2, sort_keys=True)


def outcomes_from_session_dict(doc: dict) -> list[tuple[Outcome, int]]:
    """Scoring view of a serialized session log."""
    out = []
    for rec in doc["records"]:
        outcome = Outcome(
            kind=rec["kind"],
            elapsed=float(rec["elapsed"]),
            answer_index=rec.get("answer_index"),
        )
        out.append((outcome, int(rec["n_options"])))
    return out


# --- question bundles ----------------------------------------------------------

def question_from_dict(doc: dict) -> Question:
    return Question(
        question_id=str(doc["question_id"]),
        chart_id=str(doc["chart_id"]),
        prompt=str(doc["prompt"]),
        options=tuple(str(o) for o in doc["options"]),
        correct_index=int(doc["correct_index"]),
        variant_tag=str(doc["variant_tag"]),
        chart_type=str(doc["chart_type"]),
        modifications=tuple(doc.get("modifications", ())),
    )


def question_to_dict(q: Question) -> dict:
    doc = {
        "question_id": q.question_id,
        "chart_id": q.chart_id,
        "prompt": q.prompt,
        "options": list(q.options),
        "correct_index": q.correct_index,
        "variant_tag": q.variant_tag,
        "chart_type": q.chart_type,
    }
    if q.modifications:
        doc["modifications"] = list(q.modifications)
    return doc


def load_question_bundle(text: str) -> list[Question]:
    doc = json.loads(text)
    if not isinstance(doc, list):
        raise QuizError("question bundle must be a JSON array")
    return [question_from_dict(item) for item in doc]
