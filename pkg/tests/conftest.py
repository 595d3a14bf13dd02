import pytest

from chartcontext.annotation import ChartAnnotation
from chartcontext.bundle import make_demo_bundle
from chartcontext.geometry import Rect


@pytest.fixture(scope="session")
def demo_bundle(tmp_path_factory):
    root = tmp_path_factory.mktemp("bundle")
    make_demo_bundle(root, seed=7)
    return root


@pytest.fixture
def annotation():
    """Typical chart annotation: margins carry the axes, legend top-right."""
    return ChartAnnotation(
        chart_id="fixture",
        image_width=800,
        image_height=600,
        chart_type="bar",
        plot_area=Rect(0.15, 0.05, 0.95, 0.85),
        x_axis=Rect(0.15, 0.85, 0.95, 0.95),
        y_axis=Rect(0.02, 0.05, 0.15, 0.85),
        x_axis_title=Rect(0.40, 0.95, 0.70, 0.99),
        y_axis_title=Rect(0.0, 0.25, 0.02, 0.65),
        legend=Rect(0.70, 0.10, 0.90, 0.25),
    )


@pytest.fixture
def symmetric_annotation():
    """Plot area dead-center so pointer (0.5, 0.5) sits at its center."""
    return ChartAnnotation(
        chart_id="sym",
        image_width=1000,
        image_height=1000,
        chart_type="line",
        plot_area=Rect(0.2, 0.2, 0.8, 0.8),
        x_axis=Rect(0.2, 0.8, 0.8, 0.9),
        y_axis=Rect(0.1, 0.2, 0.2, 0.8),
    )


class FakeClock:
    """Deterministic monotonic clock for session-runner tests."""

    def __init__(self, start: float = 0.0):
        self.now = start

    def __call__(self) -> float:
        return self.now

    def advance(self, seconds: float) -> None:
        self.now += seconds


@pytest.fixture
def fake_clock():
    return FakeClock()
