from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, settings
from hypothesis import strategies as st

from walkgroup.errors import DegenerateCorrelation, DegenerateVariance
from walkgroup.kernel_algebra import build_kernel, is_singular
from walkgroup.walk_model import STEPS, StepWeights, angle_theta, moments

settings.register_profile(
    "walkgroup", deadline=None, max_examples=40, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("walkgroup")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_lines():
    return ACCEPTANCE_LINES


def _usable(w):
    if is_singular(build_kernel(w)):
        return False
    try:
        angle_theta(moments(w))
    except (DegenerateVariance, DegenerateCorrelation):
        return False
    return True


@st.composite
def any_walks(draw, max_count=9):
    """Nonsingular rational walks, drift unconstrained."""
    counts = [draw(st.integers(0, max_count)) for _ in STEPS]
    total = sum(counts)
    assume(total > counts[STEPS.index((0, 0))])
    w = StepWeights(tuple(Fraction(c, total) for c in counts))
    assume(not is_singular(build_kernel(w)))
    return w


@st.composite
def zero_drift_walks(draw, max_count=8, mixed_zero=False):
    """Nonsingular rational walks with zero drift, built by solving the drift equations."""
    k = {ij: draw(st.integers(0, max_count)) for ij in [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 0), (1, -1), (1, 1)]}
    if mixed_zero:
        k[(1, 1)] = k[(1, -1)] + k[(-1, 1)] - k[(-1, -1)]
    k[(1, 0)] = k[(-1, -1)] + k[(-1, 0)] + k[(-1, 1)] - k[(1, 1)] - k[(1, -1)]
    k[(0, 1)] = k[(-1, -1)] + k[(0, -1)] + k[(1, -1)] - k[(1, 1)] - k[(-1, 1)]
    assume(min(k.values()) >= 0)
    total = sum(k.values())
    assume(total > k[(0, 0)])
    w = StepWeights.from_mapping({ij: Fraction(v, total) for ij, v in k.items()})
    assume(_usable(w))
    return w
