import math
from fractions import Fraction as F

import pytest
from conftest import any_walks, zero_drift_walks
from hypothesis import given
from hypothesis import strategies as st

from walkgroup.catalog import GESSEL, R_ONE_THIRD, SIMPLE, krsp4
from walkgroup.errors import DegenerateCorrelation, DegenerateVariance, InvalidWeights, ParseError
from walkgroup.kernel_algebra import build_kernel
from walkgroup.walk_model import (
    HP,
    SYMMETRIES,
    NumericOnly,
    QuadraticCos,
    RationalCos,
    StepWeights,
    angle_theta,
    delta_determinant,
    moments,
)


def test_moments_simple():
    m = moments(SIMPLE)
    assert (m.drift_x, m.drift_y, m.mixed) == (0, 0, 0)
    assert m.var_x == m.var_y == F(1, 2)
    assert m.R == 0 and m.R_squared == 0


def test_moments_gessel():
    m = moments(GESSEL)
    assert (m.drift_x, m.drift_y) == (0, 0)
    assert (m.mixed, m.var_x, m.var_y) == (F(1, 2), F(1), F(1, 2))
    assert m.R_squared == F(1, 2)
    assert abs(float(m.R) - 1 / math.sqrt(2)) < 1e-15


def test_moments_r13():
    m = moments(R_ONE_THIRD)
    assert (m.drift_x, m.drift_y) == (0, 0)
    assert (m.mixed, m.var_x, m.var_y, m.R_squared) == (F(1, 5), F(3, 5), F(3, 5), F(1, 9))
    assert abs(m.R - HP.mpf(1) / 3) < HP.mpf(10) ** -50


def test_angle_examples():
    t = angle_theta(moments(SIMPLE))
    assert t.exact_class == RationalCos(F(0)) and abs(t.theta - math.pi / 2) < 1e-15
    t = angle_theta(moments(GESSEL))
    assert t.exact_class == QuadraticCos(F(0), F(-1, 2), 2)
    assert abs(t.theta - 3 * math.pi / 4) < 1e-15
    t = angle_theta(moments(R_ONE_THIRD))
    assert t.exact_class == RationalCos(F(-1, 3))
    assert abs(t.theta - 1.9106332362490186) < 1e-15
    assert isinstance(angle_theta(moments(krsp4(7))).exact_class, NumericOnly)


def test_degenerate_inputs():
    with pytest.raises(DegenerateVariance):
        moments(StepWeights.from_mapping({(1, 0): "1/2", (-1, 0): "1/2"}))
    with pytest.raises(DegenerateCorrelation):
        angle_theta(moments(StepWeights.from_mapping({(1, 1): "1/2", (-1, -1): "1/2"})))


def test_delta_examples():
    assert delta_determinant(SIMPLE).value == 0
    assert delta_determinant(GESSEL).value == F(-1, 16)
    assert delta_determinant(SIMPLE).matrix[1][1] == -1


def test_idle_only_walk_rejected():
    with pytest.raises(InvalidWeights):
        StepWeights.from_mapping({(0, 0): 1})


@pytest.mark.parametrize("bad", [
    {(1, 0): "1/2", (-1, 0): "1/3"},
    {(1, 0): "3/2", (-1, 0): "-1/2"},
    {(2, 0): "1"},
])
def test_invalid_weights(bad):
    with pytest.raises(InvalidWeights):
        StepWeights.from_mapping(bad)


def test_float_and_garbage_rejected():
    with pytest.raises(InvalidWeights):
        StepWeights.from_mapping({(1, 0): 0.5, (-1, 0): 0.5})
    with pytest.raises(ParseError):
        StepWeights.from_mapping({(1, 0): "half", (-1, 0): "1/2"})
    with pytest.raises(ParseError):
        StepWeights.from_json("{not json")
    with pytest.raises(ParseError):
        StepWeights.from_jsonable({"weights": {"x": "1"}})


def test_inexact_tolerance():
    StepWeights.from_mapping({(1, 0): "0.5", (-1, 0): "0.5000000000001"}, exact=False)
    with pytest.raises(InvalidWeights):
        StepWeights.from_mapping({(1, 0): "0.5", (-1, 0): "0.50000000001"}, exact=False)


@given(any_walks())
def test_json_round_trip(w):
    assert StepWeights.from_json(w.to_json()) == w


def test_json_round_trip_inexact():
    w = krsp4(9)
    back = StepWeights.from_json(w.to_json())
    assert not back.exact
    assert max(abs(a - b) for a, b in zip(w.grid, back.grid)) < 1e-50


@given(zero_drift_walks())
def test_delta_equals_scaled_mixed_moment(w):
    k = build_kernel(w)
    m = moments(w)
    assert delta_determinant(w).value == -sum(k.a) * sum(k.at) * m.mixed


@given(zero_drift_walks())
def test_delta_zero_iff_right_angle(w):
    t = angle_theta(moments(w))
    zero = delta_determinant(w).value == 0
    assert zero == (moments(w).R == 0) == (t.exact_class == RationalCos(F(0)))
    assert zero == (abs(t.theta - math.pi / 2) < 1e-15)


@given(any_walks())
def test_moments_under_swap(w):
    m, s = moments(w), moments(w.transform("swap"))
    assert (s.var_x, s.var_y, s.drift_x, s.drift_y) == (m.var_y, m.var_x, m.drift_y, m.drift_x)
    assert s.mixed == m.mixed and s.R == m.R


@given(any_walks(), st.sampled_from(sorted(SYMMETRIES)))
def test_symmetries_permute_steps(w, name):
    image = w.transform(name)
    assert sorted(image.grid) == sorted(w.grid)
    assert image[0, 0] == w[0, 0]
