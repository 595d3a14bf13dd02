"""Builders for synthetic study directories (sessions + traces) used by the
CLI, report, and acceptance tests."""

import json
import math
import zlib
from pathlib import Path

from chartcontext.bundle import load_bundle
from chartcontext.quiz import (
    QuizSession,
    SessionRunner,
    assign_order,
    session_to_dict,
)
from chartcontext.tracelog import PointerSample, PointerTrace, write_trace_file

import numpy as np


class SteppingClock:
    def __init__(self):
        self.now = 0.0

    def __call__(self):
        return self.now

    def advance(self, s):
        self.now += s


def _seed_for(*parts) -> int:
    return zlib.crc32("|".join(str(p) for p in parts).encode())


def synthetic_trace(pid, condition, variant, qid, duration_s, seed) -> PointerTrace:
    """Random-walk pointer trace at ~30 Hz starting near the question area."""
    rng = np.random.default_rng(seed)
    trace = PointerTrace(pid, condition, variant, qid)
    x, y = 0.8, 0.15
    n = max(2, int(duration_s * 30))
    for k in range(n):
        t = math.ceil(k * 1000 / 30)
        x = min(1.0, max(0.0, x + rng.normal(0, 0.02)))
        y = min(1.0, max(0.0, y + rng.normal(0, 0.02)))
        trace.append(PointerSample(float(x), float(y), t))
    return trace


def build_study_dir(study_dir, bundle_root, participants=6, seed=1234) -> Path:
    """Run deterministic fake sessions over the bundle's questions and write
    session logs plus per-question traces in the production layout."""
    study_dir = Path(study_dir)
    (study_dir / "sessions").mkdir(parents=True, exist_ok=True)
    (study_dir / "traces").mkdir(parents=True, exist_ok=True)
    manifest, violations = load_bundle(bundle_root)
    assert not violations, violations

    for p_index in range(participants):
        pid = str(p_index + 1)
        for condition, variant in assign_order(p_index).sequence:
            questions = manifest.questions[variant]
            session = QuizSession(
                participant_id=pid,
                condition=condition,
                variant_tag=variant,
                time_limit_s=38,
                shuffle_seed=_seed_for(seed, pid, condition, variant),
                settings={"method": condition},
            )
            clock = SteppingClock()
            runner = SessionRunner(session, questions, clock=clock)
            rng = np.random.default_rng(_seed_for(seed, "outcomes", pid, condition, variant))
            while not runner.finished:
                q = runner.show_question()
                roll = rng.random()
                if roll < 0.6:
                    clock.advance(float(rng.uniform(4, 20)))
                    runner.answer(q.correct_index)
                elif roll < 0.8:
                    clock.advance(float(rng.uniform(4, 20)))
                    runner.answer((q.correct_index + 1) % q.n_options)
                elif roll < 0.9:
                    clock.advance(float(rng.uniform(2, 10)))
                    runner.skip()
                else:
                    clock.advance(40.0)
                    runner.timeout()
                elapsed = session.records[-1][1].elapsed
                trace = synthetic_trace(
                    pid, condition, variant, q.question_id,
                    duration_s=min(elapsed, 4.0),
                    seed=_seed_for(seed, "trace", pid, condition, variant, q.question_id),
                )
                write_trace_file(trace, study_dir / "traces")
            name = f"P{pid}_{condition}_{variant}.session.json"
            (study_dir / "sessions" / name).write_text(
                json.dumps(session_to_dict(session), indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )
    return study_dir


FORMATIVE_TALLIES = {
    "F1": (4, 0, 8, 0),
    "F2": (8, 1, 3, 0),
    "F3": (7, 2, 3, 0),
    "F4": (6, 1, 5, 0),
    "F5": (1, 3, 8, 0),
}

FORMATIVE_SCORES = {"F1": "4", "F2": "7.75", "F3": "6.5", "F4": "5.75", "F5": "0.25"}


def build_formative_dir(study_dir) -> Path:
    """Five session logs whose outcome tallies match the formative results."""
    study_dir = Path(study_dir)
    study_dir.mkdir(parents=True, exist_ok=True)
    for pid, (n_correct, n_incorrect, n_timeout, n_skip) in FORMATIVE_TALLIES.items():
        records = []
        q = 0
        for kind, count in (
            ("correct", n_correct),
            ("incorrect", n_incorrect),
            ("timeout", n_timeout),
            ("skip", n_skip),
        ):
            for _ in range(count):
                q += 1
                records.append(
                    {
                        "question_id": f"q{q:02d}",
                        "chart_id": "chart",
                        "chart_type": "bar",
                        "n_options": 4,
                        "kind": kind,
                        "answer_index": 0 if kind in ("correct", "incorrect") else None,
                        "elapsed": 38.0 if kind == "timeout" else 10.0,
                    }
                )
        doc = {
            "participant_id": pid,
            "condition": "baseline",
            "variant_tag": "v0",
            "time_limit_s": 38,
            "shuffle_seed": 0,
            "settings": {},
            "records": records,
        }
        (study_dir / f"P{pid}_baseline_v0.session.json").write_text(
            json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return study_dir
