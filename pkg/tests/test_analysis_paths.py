import numpy as np
import pytest

from chartcontext.analysis import (
    AnalysisError,
    ResampledPath,
    density_grid,
    descriptives,
    drop_idle_prefix,
    mean_path,
    resample,
    resample_points,
    sus_score,
)
from chartcontext.tracelog import PointerSample, PointerTrace


def trace_from(points, qid="q1"):
    trace = PointerTrace("1", "baseline", "v0", qid)
    for x, y, t in points:
        trace.append(PointerSample(x, y, t))
    return trace


# --- resampling -----------------------------------------------------------------

def test_resample_linear_move_collinear():
    trace = trace_from([(0.0, 0.0, 0), (1.0, 1.0, 1000)])
    path = resample(trace, steps=500)
    assert len(path) == 500
    assert path.points[0].tolist() == [0.0, 0.0]
    assert path.points[-1].tolist() == [1.0, 1.0]
    assert np.max(np.abs(path.points[:, 0] - path.points[:, 1])) <= 1e-9
    steps = np.diff(path.points[:, 0])
    assert np.all(steps > 0)


def test_resample_constant_position():
    trace = trace_from([(0.4, 0.6, 0), (0.4, 0.6, 500), (0.4, 0.6, 2000)])
    path = resample(trace, steps=500)
    assert np.all(path.points[:, 0] == 0.4)
    assert np.all(path.points[:, 1] == 0.6)


def test_resample_dwell_hand_computed():
    # move (0,0) -> (1,0) during the first second, then dwell one second
    trace = trace_from([(0.0, 0.0, 0), (1.0, 0.0, 1000), (1.0, 0.0, 2000)])
    path = resample(trace, steps=5)  # times 0, 500, 1000, 1500, 2000
    expected = [(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (1.0, 0.0), (1.0, 0.0)]
    assert path.points.tolist() == [list(p) for p in expected]


def test_resample_needs_two_samples():
    with pytest.raises(AnalysisError):
        resample(trace_from([(0.5, 0.5, 0)]))


def test_resample_invariant_under_affine_retiming():
    rng = np.random.default_rng(17)
    ts = np.cumsum(rng.integers(10, 200, size=20)).astype(float)
    xs, ys = rng.uniform(0, 1, size=20), rng.uniform(0, 1, size=20)
    base = resample_points(xs, ys, ts, steps=100)
    shifted = resample_points(xs, ys, 3.5 * ts + 12_000.0, steps=100)
    assert np.max(np.abs(base - shifted)) <= 1e-9


def test_resample_keeps_provenance():
    trace = trace_from([(0.0, 0.0, 0), (1.0, 1.0, 100)])
    assert resample(trace).trace_id == "P1_baseline_v0_q1"


# --- mean path -------------------------------------------------------------------

def test_mean_path_single_is_identity():
    path = ResampledPath(np.array([[0.1, 0.2], [0.3, 0.4]]))
    assert mean_path([path]).points.tolist() == path.points.tolist()


def test_mean_path_mirror_pair_lands_on_axis():
    pts = np.array([[0.1, 0.2], [0.4, 0.9], [0.7, 0.3]])
    mirrored = pts.copy()
    mirrored[:, 0] = 1.0 - mirrored[:, 0]
    mean = mean_path([ResampledPath(pts), ResampledPath(mirrored)])
    assert np.all(mean.points[:, 0] == 0.5)
    assert mean.points[:, 1].tolist() == pts[:, 1].tolist()


def test_mean_path_hand_computed():
    a = ResampledPath(np.array([[0.0, 0.0], [0.2, 0.4], [1.0, 1.0]]))
    b = ResampledPath(np.array([[0.1, 0.2], [0.4, 0.6], [0.8, 0.6]]))
    c = ResampledPath(np.array([[0.2, 0.1], [0.6, 0.2], [0.6, 0.2]]))
    mean = mean_path([a, b, c])
    expected = np.array([[0.1, 0.1], [0.4, 0.4], [0.8, 0.6]])
    assert np.allclose(mean.points, expected, atol=1e-12)


def test_mean_path_fixed_under_point_reflection():
    rng = np.random.default_rng(4)
    pts = rng.uniform(0, 1, size=(5, 50, 2))
    reflected = 1.0 - pts  # reflection through (0.5, 0.5)
    family = [ResampledPath(p) for p in pts] + [ResampledPath(p) for p in reflected]
    mean = mean_path(family)
    assert np.allclose(mean.points, 0.5, atol=1e-12)


def test_mean_path_errors():
    with pytest.raises(AnalysisError):
        mean_path([])
    with pytest.raises(AnalysisError):
        mean_path([ResampledPath(np.zeros((3, 2))), ResampledPath(np.zeros((4, 2)))])


# --- idle-prefix trim ---------------------------------------------------------------

def test_drop_idle_prefix():
    trace = trace_from([(0.5, 0.5, 0), (0.5, 0.5, 100), (0.5, 0.5, 200), (0.6, 0.5, 300)])
    trimmed = drop_idle_prefix(trace)
    assert [s.t for s in trimmed.samples] == [200, 300]
    # no movement at all: unchanged
    still = trace_from([(0.5, 0.5, 0), (0.5, 0.5, 100)])
    assert drop_idle_prefix(still) is still


# --- density grid --------------------------------------------------------------------

def test_density_single_cell():
    trace = trace_from([(0.5, 0.5, t * 100) for t in range(10)])
    grid = density_grid([trace], bins=8)
    assert grid.total == 10
    assert (grid.counts > 0).sum() == 1
    assert grid.counts[4, 4] == 10  # (0.5, 0.5) falls in the upper half of bin space


def test_density_empty():
    grid = density_grid([], bins=8)
    assert grid.total == 0
    assert grid.counts.shape == (8, 8)
    assert not grid.counts.any()


def test_density_inner_zone_is_central_70_percent():
    grid = density_grid([], bins=4)
    assert grid.inner_zone.as_list() == [0.15, 0.15, 0.85, 0.85]


def test_density_total_and_orientation():
    # all activity near the top edge (small y) lands in row 0
    trace = trace_from([(x / 10, 0.01, x * 50) for x in range(1, 10)])
    grid = density_grid([trace], bins=4)
    assert grid.counts[0].sum() == 9
    assert grid.total == 9


def test_density_uniform_multinomial():
    rng = np.random.default_rng(31)
    g, n = 8, 64_000
    trace = PointerTrace("1", "baseline", "v0", "q1")
    xs, ys = rng.uniform(0, 1, size=n), rng.uniform(0, 1, size=n)
    for k in range(n):
        trace.append(PointerSample(float(xs[k]), float(ys[k]), k))
    grid = density_grid([trace], bins=g)
    assert grid.total == n
    p = 1.0 / (g * g)
    sigma = np.sqrt(n * p * (1 - p))
    assert np.all(np.abs(grid.counts - n * p) <= 3.0 * sigma)


def test_density_to_dict():
    doc = density_grid([], bins=4).to_dict()
    assert doc["bins"] == 4 and doc["total"] == 0
    assert doc["inner_zone"] == [0.15, 0.15, 0.85, 0.85]


# --- questionnaire scores --------------------------------------------------------------

def test_sus_ceiling_and_midpoint():
    assert sus_score([5, 1, 5, 1, 5, 1, 5, 1, 5, 1]) == 100.0
    assert sus_score([3] * 10) == 50.0
    assert sus_score([4, 2, 4, 2, 4, 2, 4, 2, 4, 2]) == 75.0
    assert sus_score([1, 5, 1, 5, 1, 5, 1, 5, 1, 5]) == 0.0


def test_sus_validation():
    with pytest.raises(AnalysisError):
        sus_score([3] * 9)
    with pytest.raises(AnalysisError):
        sus_score([3] * 11)
    with pytest.raises(AnalysisError):
        sus_score([3] * 9 + [6])
    with pytest.raises(AnalysisError):
        sus_score([3] * 9 + [0])
    with pytest.raises(AnalysisError):
        sus_score([3.0] * 10)


def test_sus_monotonicity():
    rng = np.random.default_rng(12)
    for _ in range(200):
        items = [int(v) for v in rng.integers(1, 6, size=10)]
        base = sus_score(items)
        idx = int(rng.integers(10))
        bumped = list(items)
        if bumped[idx] < 5:
            bumped[idx] += 1
            if (idx + 1) % 2 == 1:  # odd item: higher response, higher score
                assert sus_score(bumped) >= base
            else:  # even item: higher response, lower score
                assert sus_score(bumped) <= base


def test_descriptives():
    mean, sd = descriptives([1, 2, 3])
    assert (mean, sd) == (2.0, 1.0)
    mean, sd = descriptives([5, 5])
    assert (mean, sd) == (5.0, 0.0)
    mean, sd = descriptives([2, 4, 4, 4, 5, 5, 7, 9])
    assert mean == pytest.approx(5.0)
    assert sd == pytest.approx(2.138, abs=1e-3)
    with pytest.raises(AnalysisError):
        descriptives([1.0])
