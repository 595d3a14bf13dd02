import json
from fractions import Fraction

import numpy as np
import pytest

from chartcontext.quiz import (
    test_duration as session_duration,
    BASE_TIME_LIMIT_S,
    CONDITIONS,
    ORDER_TABLE,
    VARIANTS,
    Outcome,
    Question,
    QuizError,
    QuizSession,
    SessionRunner,
    assign_order,
    check_variant_coverage,
    format_score,
    load_question_bundle,
    outcomes_from_session_dict,
    question_to_dict,
    score_test,
    session_to_dict,
    shuffle_questions,
    time_limit,
    transform_magnitude,
    transform_noise,
    transform_permute,
)


def outcome(kind, elapsed=5.0, answer=None):
    return Outcome(kind=kind, elapsed=elapsed, answer_index=answer)


def tally(correct=0, incorrect=0, timeouts=0, skips=0, n_op=4):
    rows = []
    rows += [(outcome("correct", answer=0), n_op)] * correct
    rows += [(outcome("incorrect", answer=1), n_op)] * incorrect
    rows += [(outcome("timeout", elapsed=38.0), n_op)] * timeouts
    rows += [(outcome("skip"), n_op)] * skips
    return rows


# --- time limit ------------------------------------------------------------------

def test_time_limit_is_150_percent_rounded_up():
    assert time_limit(BASE_TIME_LIMIT_S) == 38
    assert time_limit(25) == 38
    assert time_limit(2) == 3
    assert time_limit(10) == 15


def test_time_limit_rejects_nonpositive():
    with pytest.raises(QuizError):
        time_limit(0)


# --- scoring ---------------------------------------------------------------------

def test_score_examples():
    assert score_test(tally(correct=8, incorrect=1, timeouts=3)) == Fraction(31, 4)
    assert score_test(tally(correct=1, incorrect=3, timeouts=8)) == Fraction(1, 4)
    assert score_test(tally(correct=12)) == 12


FORMATIVE_ROWS = [
    ((4, 0, 8, 0), "4"),
    ((8, 1, 3, 0), "7.75"),
    ((7, 2, 3, 0), "6.5"),
    ((6, 1, 5, 0), "5.75"),
    ((1, 3, 8, 0), "0.25"),
]


@pytest.mark.parametrize("counts,expected", FORMATIVE_ROWS)
def test_score_reproduces_formative_results(counts, expected):
    c, i, t, s = counts
    assert format_score(score_test(tally(c, i, t, s))) == expected


def test_score_bounds_property():
    rng = np.random.default_rng(5)
    kinds = ["correct", "incorrect", "timeout", "skip"]
    for _ in range(300):
        rows = []
        all_correct = True
        for _ in range(12):
            kind = kinds[rng.integers(4)]
            n_op = int(rng.choice([2, 4]))
            rows.append((outcome(kind), n_op))
            all_correct &= kind == "correct"
        s = score_test(rows)
        assert Fraction(-12, 2) <= s <= 12
        assert (s == 12) == all_correct


def test_score_empty_errors():
    with pytest.raises(QuizError):
        score_test([])


def test_format_score_renders_decimals():
    assert format_score(Fraction(31, 4)) == "7.75"
    assert format_score(Fraction(-1, 4)) == "-0.25"
    assert format_score(Fraction(-1, 3)) == "-0.333333"
    assert format_score(Fraction(12)) == "12"


# --- duration ----------------------------------------------------------------------

def _session(records=(), limit=38):
    return QuizSession(
        participant_id="1",
        condition="baseline",
        variant_tag="v0",
        time_limit_s=limit,
        shuffle_seed=0,
        records=list(records),
    )


def _question(qid="q1", variant="v0"):
    return Question(
        question_id=qid,
        chart_id="bar-demo",
        prompt="Which is highest?",
        options=("a", "b", "c", "d"),
        correct_index=1,
        variant_tag=variant,
        chart_type="bar",
    )


def test_duration_sums_elapsed():
    q = _question()
    s = _session([(q, outcome("correct", elapsed=10.0))] * 12)
    assert session_duration(s) == pytest.approx(120.0)


def test_duration_caps_at_limit():
    q = _question()
    records = [(q, outcome("timeout", elapsed=38.0))] + [(q, outcome("correct", elapsed=5.0))] * 11
    assert session_duration(_session(records)) == pytest.approx(93.0)
    # even a malformed over-limit elapsed is capped
    records = [(q, outcome("correct", elapsed=99.0))]
    assert session_duration(_session(records)) == pytest.approx(38.0)


def test_duration_empty_session_errors():
    with pytest.raises(QuizError):
        session_duration(_session([]))


# --- counterbalancing ----------------------------------------------------------------

def test_order_rows_verbatim():
    assert assign_order(0).sequence == (
        ("baseline", "v0"), ("dynamic-context", "v1"), ("mini-map", "v2"))
    assert assign_order(3).sequence == (
        ("mini-map", "v2"), ("dynamic-context", "v1"), ("baseline", "v0"))
    assert assign_order(6).sequence == assign_order(0).sequence
    assert assign_order(6).order_index == 0


def test_order_table_coverage():
    # each condition sees each variant exactly twice across the six rows
    counts = {}
    for row in ORDER_TABLE:
        variants_in_row = [v for _, v in row]
        assert sorted(variants_in_row) == sorted(VARIANTS)
        conditions_in_row = [c for c, _ in row]
        assert sorted(conditions_in_row) == sorted(CONDITIONS)
        for pair in row:
            counts[pair] = counts.get(pair, 0) + 1
    assert set(counts.values()) == {2}
    assert len(counts) == 9


# --- transforms -----------------------------------------------------------------------

def test_permute():
    assert transform_permute([1, 2, 3], (2, 0, 1)) == [3, 1, 2]
    assert transform_permute([1, 2, 3], (0, 1, 2)) == [1, 2, 3]


def test_permute_then_inverse_is_identity():
    rng = np.random.default_rng(8)
    for _ in range(50):
        n = int(rng.integers(2, 12))
        series = rng.normal(size=n).tolist()
        perm = rng.permutation(n).tolist()
        inverse = [0] * n
        for i, p in enumerate(perm):
            inverse[p] = i
        assert transform_permute(transform_permute(series, perm), inverse) == series
        assert sorted(transform_permute(series, perm)) == sorted(series)


def test_permute_rejects_non_bijection():
    with pytest.raises(QuizError):
        transform_permute([1, 2, 3], (0, 0, 1))


def test_noise_amplitude_zero_and_determinism():
    series = [1.0, 2.0, 3.0]
    assert transform_noise(series, 0.0, seed=1) == series
    assert transform_noise(series, 0.5, seed=42) == transform_noise(series, 0.5, seed=42)
    assert transform_noise(series, 0.5, seed=42) != transform_noise(series, 0.5, seed=43)


def test_noise_bounded_over_many_draws():
    amplitude = 0.25
    base = [0.0] * 1_000_000
    noised = transform_noise(base, amplitude, seed=9)
    assert max(abs(v) for v in noised) <= amplitude


def test_magnitude():
    assert transform_magnitude([1, 2, 3], 10) == [10, 20, 30]
    assert transform_magnitude([1.5, -2.0], 1) == [1.5, -2.0]
    with pytest.raises(QuizError):
        transform_magnitude([1, 2], 0)


def test_magnitude_preserves_order_statistics():
    rng = np.random.default_rng(2)
    series = rng.normal(size=20).tolist()
    scaled = transform_magnitude(series, 3.5)
    assert int(np.argmax(series)) == int(np.argmax(scaled))
    assert int(np.argmin(series)) == int(np.argmin(scaled))
    assert np.argsort(series).tolist() == np.argsort(scaled).tolist()


# --- runner -----------------------------------------------------------------------------

def _runner(fake_clock, limit=38, n=3):
    questions = [_question(f"q{i}") for i in range(n)]
    session = _session([], limit)
    return SessionRunner(session, questions, clock=fake_clock), session


def test_runner_answer_records_elapsed(fake_clock):
    runner, session = _runner(fake_clock)
    q = runner.show_question()
    fake_clock.advance(12.0)
    out = runner.answer(q.correct_index)
    assert out.kind == "correct"
    assert out.elapsed == pytest.approx(12.0)


def test_runner_incorrect_and_skip(fake_clock):
    runner, _ = _runner(fake_clock)
    q = runner.show_question()
    fake_clock.advance(3.0)
    assert runner.answer((q.correct_index + 1) % 4).kind == "incorrect"
    runner.show_question()
    fake_clock.advance(1.0)
    assert runner.skip().kind == "skip"


def test_runner_timeout_iff_limit_reached(fake_clock):
    runner, session = _runner(fake_clock)
    runner.show_question()
    fake_clock.advance(38.0)
    out = runner.answer(0)  # arrives exactly at the limit
    assert out.kind == "timeout"
    assert out.elapsed == 38.0
    runner.show_question()
    fake_clock.advance(37.999)
    assert runner.answer(99).kind == "incorrect"  # still inside the limit
    runner.show_question()
    fake_clock.advance(50.0)
    out = runner.skip()  # skip after the limit is a timeout
    assert out.kind == "timeout" and out.elapsed == 38.0
    for _, o in session.records:
        assert o.elapsed <= session.time_limit_s
        assert (o.kind == "timeout") == (o.elapsed >= session.time_limit_s)


def test_runner_countdown(fake_clock):
    runner, _ = _runner(fake_clock)
    runner.show_question()
    fake_clock.advance(30.0)
    assert runner.remaining() == pytest.approx(8.0)


def test_runner_shuffle_is_seeded(fake_clock):
    questions = [_question(f"q{i}") for i in range(12)]
    order1 = [q.question_id for q in shuffle_questions(questions, seed=99)]
    order2 = [q.question_id for q in shuffle_questions(questions, seed=99)]
    order3 = [q.question_id for q in shuffle_questions(questions, seed=100)]
    assert order1 == order2
    assert order1 != order3
    assert sorted(order1) == sorted(q.question_id for q in questions)


def test_runner_rejects_wrong_variant(fake_clock):
    session = _session([])
    with pytest.raises(QuizError, match="variant"):
        SessionRunner(session, [_question("q1", variant="v1")], clock=fake_clock)


# --- session log round trip ------------------------------------------------------------

def test_session_log_round_trip(fake_clock):
    runner, session = _runner(fake_clock)
    q = runner.show_question()
    fake_clock.advance(4.0)
    runner.answer(q.correct_index)
    q = runner.show_question()
    fake_clock.advance(6.0)
    runner.answer((q.correct_index + 1) % 4)
    runner.show_question()
    fake_clock.advance(40.0)
    runner.timeout()

    doc = json.loads(json.dumps(session_to_dict(session)))
    outcomes = outcomes_from_session_dict(doc)
    assert [o.kind for o, _ in outcomes] == ["correct", "incorrect", "timeout"]
    assert score_test(outcomes) == Fraction(3, 4)
    assert doc["shuffle_seed"] == session.shuffle_seed


# --- question model and coverage ----------------------------------------------------------

def test_question_validation():
    with pytest.raises(QuizError):
        _q = Question("q", "c", "p", ("only",), 0, "v0", "bar")
    with pytest.raises(QuizError):
        Question("q", "c", "p", ("a", "b"), 2, "v0", "bar")
    with pytest.raises(QuizError):
        Question("q", "c", "p", ("a", "b"), 0, "v9", "bar")
    with pytest.raises(QuizError):
        Question("q", "c", "p", ("a", "b"), 0, "v0", "bar", modifications=("data:wat",))


def test_question_round_trip():
    q = Question("q1", "c1", "p?", ("a", "b", "c", "d"), 2, "v1", "pie",
                 modifications=("topic", "data:noise"))
    doc = question_to_dict(q)
    assert load_question_bundle(json.dumps([doc])) == [q]


def test_variant_coverage_detects_gaps(demo_bundle):
    questions = []
    for variant in VARIANTS:
        text = (demo_bundle / "questions" / f"{variant}.json").read_text()
        questions.extend(load_question_bundle(text))
    assert check_variant_coverage(questions) == []
    # drop the v2 histogram question
    reduced = [q for q in questions if not (q.variant_tag == "v2" and q.chart_type == "histogram")]
    problems = check_variant_coverage(reduced)
    assert problems == ["v2: missing histogram question"]
