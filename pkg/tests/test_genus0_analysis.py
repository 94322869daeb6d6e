import cmath
import math

import numpy as np
import pytest
from conftest import zero_drift_walks
from hypothesis import given

from walkgroup.catalog import GESSEL, KREWERAS, R_ONE_THIRD, SIMPLE, krsp4, random_walks
from walkgroup.errors import BranchCutViolation, WrongGenus
from walkgroup.finiteness_criterion import decide, lambda_form
from walkgroup.genus0_analysis import (
    LimitCGF,
    automorphisms,
    corner_exponent,
    corner_geometry,
    curve_residual,
    limit_periods,
    order_from_rho,
    ratio_closed_form,
    rational_uniformization,
    tangent_angle,
)
from walkgroup.kernel_algebra import INFINITY, branch_points, build_kernel, curve_M
from walkgroup.walk_model import angle_theta, moments

UNIFORMIZED = [SIMPLE, KREWERAS, R_ONE_THIRD, GESSEL, *random_walks(5, 5)]


@pytest.mark.parametrize("w,ratio", [(GESSEL, 3 / 4), (SIMPLE, 1 / 2), (KREWERAS, 2 / 3)])
def test_limit_period_ratios(w, ratio):
    lp = limit_periods(build_kernel(w))
    assert abs(lp.ratio - ratio) < 1e-10
    assert 0 < lp.alpha3 < lp.alpha2


def test_alpha2_closed_form_for_simple_walk():
    k = build_kernel(SIMPLE)
    bp = branch_points(k)
    x1, x4 = bp.x_roots[0], bp.x_roots[3]
    expected = math.pi / math.sqrt(float(k.C) * (x4 - 1) * (1 - x1))
    assert abs(limit_periods(k).alpha2 - expected) < 1e-12


@given(zero_drift_walks())
def test_period_ratio_matches_arctan_form(w):
    k = build_kernel(w)
    lp = limit_periods(k)
    lam = lambda_form(w, k)
    assert abs(lp.ratio - (0.5 - math.atan(lam.value) / math.pi)) < 1e-8
    assert abs(lp.ratio - ratio_closed_form(k)) < 1e-8
    assert abs(lp.ratio * math.pi - float(angle_theta(moments(w)).theta)) < 1e-8


@pytest.mark.parametrize("w", UNIFORMIZED)
def test_uniformization_lies_on_the_curve(w):
    k = build_kernel(w)
    ru = rational_uniformization(k)
    rng = np.random.default_rng(1)
    for u in np.exp(rng.uniform(-2, 2, 100) + 1j * rng.uniform(0, 2 * np.pi, 100)):
        assert curve_residual(k, ru, u) <= 1e-9
    assert len(ru.valid_signs) == 16


@pytest.mark.parametrize("w", UNIFORMIZED)
def test_uniformization_anchor_values(w):
    k = build_kernel(w)
    ru = rational_uniformization(k)
    g = ru.geometry
    assert abs(abs(ru.rho) - 1) < 1e-15
    assert 0 <= ru.arg_rho <= math.pi
    assert abs(ru.arg_rho - float(angle_theta(moments(w)).theta)) < 1e-8
    assert abs(ru.rho + 1 / ru.rho - ru.rho_equation_rhs()) < 1e-10
    for u in (1e-12, 1e12):
        assert abs(ru.x(u) - 1) < 1e-9 and abs(ru.y(u) - 1) < 1e-9
    assert abs(ru.y(1 / ru.rho) - g.y1) < 1e-10
    if g.X_y1 is not INFINITY:
        assert abs(ru.x(1 / ru.rho) - g.X_y1) < 1e-10


@pytest.mark.parametrize("w", UNIFORMIZED)
def test_automorphisms_act_by_moebius_maps(w):
    k = build_kernel(w)
    ru = rational_uniformization(k)
    rng = np.random.default_rng(2)
    for u in np.exp(rng.uniform(-1, 1, 20) + 1j * rng.uniform(0, 2 * np.pi, 20)):
        xi, eta, delta = automorphisms(ru, u)
        assert abs(ru.x(xi) - ru.x(u)) < 1e-9 * max(1, abs(ru.x(u)))
        assert abs(ru.y(eta) - ru.y(u)) < 1e-9 * max(1, abs(ru.y(u)))
        assert abs(delta - automorphisms(ru, xi)[1]) < 1e-12 * abs(delta)


def test_gessel_rho_is_a_primitive_eighth_root():
    ru = rational_uniformization(build_kernel(GESSEL))
    assert abs(ru.rho**8 - 1) < 1e-12
    assert abs(ru.rho**4 - 1) > 1
    assert order_from_rho(ru) == 8


@pytest.mark.parametrize("w", [SIMPLE, KREWERAS, GESSEL, krsp4(7), *random_walks(8, 6)])
def test_order_from_rho_matches_decide(w):
    r = decide(w)
    ru = rational_uniformization(build_kernel(w))
    assert order_from_rho(ru) == (r.order if r.is_finite else None)


@pytest.mark.parametrize("w", UNIFORMIZED)
def test_each_x_value_is_taken_twice(w):
    ru = rational_uniformization(build_kernel(w))
    s0, s1 = ru.z0 + 1 / ru.z0, ru.z1 + 1 / ru.z1
    for v in (0.3 + 0.2j, -2.5, 4 + 1j):
        # (u - z1)(u - 1/z1) = v (u - z0)(u - 1/z0)
        roots = np.roots([1 - v, v * s0 - s1, 1 - v])
        assert abs(roots[0] - roots[1]) > 1e-6
        assert abs(roots[0] * roots[1] - 1) < 1e-12
        for u in roots:
            assert abs(ru.x(u) - v) < 1e-9 * max(1, abs(v))


@pytest.mark.parametrize("w", [SIMPLE, GESSEL, KREWERAS, R_ONE_THIRD, *random_walks(9, 3)])
def test_limit_cgf_glues_conjugate_boundary_points(w):
    k = build_kernel(w)
    cgf = LimitCGF(k)
    pts = curve_M(k, 400).of(1)
    pts = pts[(np.abs(pts.imag) > 1e-3) & (np.abs(pts - 1) > 1e-2)]
    for t in pts[:: max(1, len(pts) // 20)]:
        a, b = cgf(t), cgf(np.conj(t))
        assert abs(a - b) < 1e-7 * max(1, abs(a))


@pytest.mark.parametrize("w", [SIMPLE, GESSEL, KREWERAS, R_ONE_THIRD])
def test_limit_cgf_inner_range(w):
    k = build_kernel(w)
    cgf = LimitCGF(k)
    x1 = cgf.geometry.x1
    assert abs(cgf.inner(x1) - 1) < 1e-9
    assert abs(cgf.inner(1 - 1e-12)) < 1e-9
    vals = [cgf.inner(t).real for t in np.linspace(x1, 1 - 1e-9, 50)]
    assert all(-1e-9 <= v <= 1 + 1e-9 for v in vals)
    assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


def test_limit_cgf_refuses_points_outside():
    cgf = LimitCGF(build_kernel(GESSEL))
    # M1 runs through infinity here and the domain is the side holding x1
    for t in (2.0, 5.0, 7.0):
        with pytest.raises(BranchCutViolation):
            cgf(t)
    for t in (0.5, -3.0, 3j):
        cgf(t)


@pytest.mark.parametrize("w", [GESSEL, KREWERAS, SIMPLE])
def test_corner_exponent(w):
    fit = corner_exponent(build_kernel(w))
    assert fit.relative_error < 0.01


def test_kreweras_takes_the_infinite_branch_point_route():
    g = corner_geometry(build_kernel(KREWERAS))
    assert g.x4 is INFINITY
    assert corner_exponent(build_kernel(KREWERAS)).expected == pytest.approx(1.5, rel=1e-10)


@pytest.mark.parametrize("w,theta", [
    (GESSEL, 3 * math.pi / 4),
    (SIMPLE, math.pi / 2),
    (R_ONE_THIRD, math.acos(-1 / 3)),
    (KREWERAS, 2 * math.pi / 3),
])
def test_tangent_angle(w, theta):
    assert abs(tangent_angle(build_kernel(w)) - theta) < 1e-12


@given(zero_drift_walks())
def test_tangent_angle_matches_moments(w):
    assert abs(tangent_angle(build_kernel(w)) - float(angle_theta(moments(w)).theta)) < 1e-12


def test_wrong_genus_rejected():
    from walkgroup.catalog import DELTA0_GENUS1, case_exemplar
    for w in (DELTA0_GENUS1, case_exemplar(3)):
        with pytest.raises(WrongGenus):
            limit_periods(build_kernel(w))
        with pytest.raises(WrongGenus):
            tangent_angle(build_kernel(w))


def test_conformal_angle_of_ratio():
    # the gluing function blows up the corner angle to a straight angle
    k = build_kernel(GESSEL)
    cgf = LimitCGF(k)
    assert cmath.isclose(cgf.alpha2 / cgf.alpha3, 4 / 3, rel_tol=1e-10)
