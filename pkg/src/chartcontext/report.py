"""Study-directory reporting: per-session scores and durations, outcome
tallies per question, and (on demand) the trajectory group test run over
the recorded traces.

Output is deterministic for fixed inputs and seed: rows are sorted, floats
are formatted with fixed precision, and nothing timestamps itself, so two
runs produce byte-identical reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .analysis import pairwise_dtw_matrix, permanova, resample
from .quiz import OUTCOME_KINDS, format_score, outcomes_from_session_dict, score_test
from .tracelog import TraceError, read_trace_file


@dataclass
class SessionRow:
    participant_id: str
    condition: str
    variant: str
    score: str
    duration_s: float
    tallies: dict[str, int]


@dataclass
class StudyData:
    sessions: list[SessionRow] = field(default_factory=list)
    question_tallies: dict[tuple[str, str, str], dict[str, int]] = field(default_factory=dict)
    traces: list = field(default_factory=list)
    unparsable: list[str] = field(default_factory=list)


def scan_study_dir(directory) -> StudyData:
    """Read every session log (*.session.json) and trace (*.trace) under
    ``directory``; unparsable files are recorded and skipped."""
    directory = Path(directory)
    data = StudyData()
    for path in sorted(directory.rglob("*.session.json")):
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
            outcomes = outcomes_from_session_dict(doc)
            limit = float(doc["time_limit_s"])
            tallies = {kind: 0 for kind in OUTCOME_KINDS}
            duration = 0.0
            for outcome, _ in outcomes:
                tallies[outcome.kind] += 1
                duration += min(outcome.elapsed, limit)
            key = (str(doc["condition"]), str(doc["variant_tag"]))
            for rec in doc["records"]:
                qkey = (key[0], key[1], str(rec["question_id"]))
                qt = data.question_tallies.setdefault(qkey, {kind: 0 for kind in OUTCOME_KINDS})
                qt[str(rec["kind"])] += 1
            data.sessions.append(
                SessionRow(
                    participant_id=str(doc["participant_id"]),
                    condition=key[0],
                    variant=key[1],
                    score=format_score(score_test(outcomes)),
                    duration_s=duration,
                    tallies=tallies,
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            data.unparsable.append(f"{path.name}: {exc}")
    for path in sorted(directory.rglob("*.trace")):
        try:
            data.traces.append(read_trace_file(path))
        except (TraceError, ValueError, OSError) as exc:
            data.unparsable.append(f"{path.name}: {exc}")
    return data


def _analysis_section(data: StudyData, perms: int, seed: int, steps: int) -> list[str]:
    """Per-(variant, question) omnibus PERMANOVA over conditions, for the
    questions where every condition has at least two traces."""
    groups: dict[tuple[str, str], list] = {}
    for trace in data.traces:
        groups.setdefault((trace.variant_tag, trace.question_id), []).append(trace)
    lines = ["# trajectory permanova (group = condition)"]
    lines.append("variant\tquestion\tn\tF\tp\tn_perm\tseed\tdegenerate")
    emitted = 0
    for (variant, qid), traces in sorted(groups.items()):
        by_condition: dict[str, int] = {}
        for t in traces:
            by_condition[t.condition] = by_condition.get(t.condition, 0) + 1
        if len(by_condition) < 2 or min(by_condition.values()) < 2:
            continue
        usable = [t for t in traces if len(t.samples) >= 2]
        if len(usable) < len(traces):
            continue
        paths = [resample(t, steps) for t in sorted(usable, key=lambda t: t.trace_id)]
        labels = [t.condition for t in sorted(usable, key=lambda t: t.trace_id)]
        matrix = pairwise_dtw_matrix(paths, labels)
        res = permanova(matrix, labels, n_perm=perms, seed=seed)
        f_txt = "inf" if res.f_stat == float("inf") else f"{res.f_stat:.6f}"
        lines.append(
            f"{variant}\t{qid}\t{res.n}\t{f_txt}\t{res.p_value:.6f}"
            f"\t{res.n_perm}\t{res.seed}\t{str(res.degenerate).lower()}"
        )
        emitted += 1
    if emitted == 0:
        lines.append("# (no question had >= 2 traces per condition)")
    return lines


def render_report(
    data: StudyData,
    analyze: bool = False,
    perms: int = 999,
    seed: int = 0,
    steps: int = 500,
) -> str:
    lines = [f"# report: {len(data.sessions)} sessions, {len(data.traces)} traces"]
    if not data.sessions and not data.traces:
        lines.append("# warning: no session or trace files found")
    if data.unparsable:
        lines.append("# unparsable files (skipped):")
        lines.extend(f"#   {item}" for item in sorted(data.unparsable))

    lines.append("")
    lines.append("participant\tcondition\tvariant\tscore\tduration_s\tcorrect\tincorrect\ttimeout\tskip")
    for row in sorted(data.sessions, key=lambda r: (r.participant_id, r.condition, r.variant)):
        t = row.tallies
        lines.append(
            f"{row.participant_id}\t{row.condition}\t{row.variant}\t{row.score}"
            f"\t{row.duration_s:.3f}\t{t['correct']}\t{t['incorrect']}\t{t['timeout']}\t{t['skip']}"
        )

    lines.append("")
    lines.append("# outcome tallies per question")
    lines.append("condition\tvariant\tquestion\tcorrect\tincorrect\ttimeout\tskip")
    for (condition, variant, qid), t in sorted(data.question_tallies.items()):
        lines.append(
            f"{condition}\t{variant}\t{qid}\t{t['correct']}\t{t['incorrect']}\t{t['timeout']}\t{t['skip']}"
        )

    if analyze:
        lines.append("")
        lines.extend(_analysis_section(data, perms, seed, steps))
    return "\n".join(lines) + "\n"
