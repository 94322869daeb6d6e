import math
from fractions import Fraction as F

import numpy as np
import pytest

from walkgroup.catalog import DELTA0_GENUS1, GESSEL
from walkgroup.errors import PoleAtLatticePoint, WrongGenus
from walkgroup.finiteness_criterion import Verdict, decide
from walkgroup.genus0_analysis import limit_periods
from walkgroup.genus1_analysis import (
    Uniformization,
    WeierstrassParams,
    delta_shift_residual,
    genus1_cgf_gluing,
    invariants,
    periods,
    quartic_invariants,
    uniformize,
    wp_and_derivative,
    wp_eval,
)
from walkgroup.kernel_algebra import GenusClass, build_kernel, genus_classify
from walkgroup.walk_model import StepWeights

LATTICES = [WeierstrassParams(1.0, 1.3j), WeierstrassParams(2.0, 0.7 + 1.9j), WeierstrassParams(0.5j, 3.0)]
EIGHT = [(1, 1), (1, 0), (1, -1), (0, 1), (0, -1), (-1, 1), (-1, 0), (-1, -1)]


def _biased_uniform():
    m = {ij: F(1, 8) for ij in EIGHT}
    m[(1, 0)] += F(1, 100)
    m[(-1, 0)] -= F(1, 100)
    return StepWeights.from_mapping(m)


def _generic():
    counts = [3, 2, 1, 4, 2, 1, 3, 2]
    return StepWeights.from_mapping({ij: F(c, sum(counts)) for ij, c in zip(EIGHT, counts)})


def _lattice_points(params, n=300):
    m, k = np.meshgrid(np.arange(-n, n + 1), np.arange(-n, n + 1))
    pts = (m * complex(params.omega_a) + k * complex(params.omega_b)).ravel()
    return pts[pts != 0]


@pytest.mark.parametrize("params", LATTICES)
def test_wp_against_brute_force_lattice_sum(params):
    pts = _lattice_points(params)
    for s, t in ((0.3, 0.41), (0.1, 0.8), (0.77, 0.05)):
        z = s * complex(params.omega_a) + t * complex(params.omega_b) + 0.01
        brute = 1 / z**2 + np.sum(1 / (z - pts) ** 2 - 1 / pts**2)
        assert abs(wp_eval(params, z) - brute) < 1e-5 * abs(brute)


@pytest.mark.parametrize("params", LATTICES)
def test_invariants_against_brute_force(params):
    pts = _lattice_points(params)
    g2, g3 = invariants(params)
    assert abs(g2 - 60 * np.sum(pts**-4.0)) < 1e-5 * abs(g2)
    assert abs(g3 - 140 * np.sum(pts**-6.0)) < 1e-5 * max(abs(g3), abs(g2))


@pytest.mark.parametrize("params", LATTICES)
def test_wp_even_periodic_and_laurent(params):
    wa, wb = complex(params.omega_a), complex(params.omega_b)
    rng = np.random.default_rng(3)
    z = rng.uniform(0.05, 0.95, 20) * wa + rng.uniform(0.05, 0.95, 20) * wb
    W, Wd = wp_and_derivative(params, z)
    assert np.allclose(wp_and_derivative(params, -z)[0], W, rtol=1e-11)
    assert np.allclose(wp_and_derivative(params, z + wa)[0], W, rtol=1e-10)
    assert np.allclose(wp_and_derivative(params, z - 2 * wb)[0], W, rtol=1e-10)
    g2, g3 = invariants(params)
    assert np.allclose(Wd**2, 4 * W**3 - g2 * W - g3, rtol=1e-9, atol=1e-9 * np.max(np.abs(Wd**2)))
    h = 1e-4 * abs(wa)
    assert abs(wp_eval(params, h) * h * h - 1) < 1e-6


def test_wp_pole_and_collinear_lattice():
    with pytest.raises(PoleAtLatticePoint):
        wp_eval(LATTICES[0], 1.0 + 1.3j)
    with pytest.raises(ValueError):
        WeierstrassParams(1.0, 2.0)


def test_delta0_exemplar_has_ratio_one_half():
    p = periods(build_kernel(DELTA0_GENUS1))
    assert abs(p.ratio - 0.5) < 1e-6
    assert p.omega1.real == 0 and p.omega1.imag > 0
    assert 0 < p.omega3 < p.omega2
    r = decide(DELTA0_GENUS1)
    assert r.label() == "Finite(4)"


def test_walk_symmetric_under_vertical_flip_has_order_four():
    assert decide(_biased_uniform()).label() == "Finite(4)"


def test_generic_walk_is_undecided():
    w = _generic()
    assert genus_classify(w) is GenusClass.Genus1
    r = decide(w)
    assert r.verdict is Verdict.UNDECIDED and r.bound == 10**4


def test_perturbed_delta0_walk_loses_order_four():
    w = StepWeights.from_mapping({
        (1, 0): F(3, 10) - F(1, 100), (1, 1): F(1, 100), (0, 1): F(3, 10), (-1, 0): F(1, 5), (0, -1): F(1, 5)})
    assert genus_classify(w) is GenusClass.Genus1
    assert decide(w).label() != "Finite(4)"


def test_full_lattice_invariants_are_the_quartic_invariants():
    k = build_kernel(DELTA0_GENUS1)
    u = Uniformization(k)
    # the uniformization lattice is spanned by half periods, which scales g2 by 2^4 and g3 by 2^6
    g2, g3 = invariants(u.lattice)
    q2, q3 = quartic_invariants(k.f["D"])
    assert abs(g2 - 16 * q2) < 1e-10 * abs(g2)
    assert abs(g3 - 64 * q3) < 1e-10 * abs(g3)


@pytest.mark.parametrize("w", [DELTA0_GENUS1, _biased_uniform(), _generic()])
def test_uniformization_on_the_curve(w):
    k = build_kernel(w)
    u = Uniformization(k)
    assert u.dp4 > 0
    wa, wb = complex(u.lattice.omega_a), complex(u.lattice.omega_b)
    rng = np.random.default_rng(4)
    om = rng.uniform(0.02, 0.98, 50) * wa + rng.uniform(0.02, 0.98, 50) * wb
    x, y = u.point(om)
    for a, b in zip(x, y):
        assert abs(k.K(a, b)) <= 1e-8 * k.K_scale(a, b)
    x2, _ = u.point(om + u.periods.omega1)
    assert np.allclose(x2, x, rtol=1e-9)
    xs, ys = uniformize(k, None, om[0])
    assert abs(xs - x[0]) < 1e-12 * abs(x[0])


@pytest.mark.parametrize("w", [DELTA0_GENUS1, _biased_uniform(), _generic()])
def test_delta_is_a_shift_by_half_omega3(w):
    u = Uniformization(build_kernel(w))
    wa, wb = complex(u.lattice.omega_a), complex(u.lattice.omega_b)
    for s, t in ((0.2, 0.3), (0.6, 0.15), (0.45, 0.8)):
        assert delta_shift_residual(u, s * wa + t * wb) < 1e-8


@pytest.mark.parametrize("w", [DELTA0_GENUS1, _biased_uniform(), _generic()])
def test_genus1_gluing_is_real_and_symmetric(w):
    g = genus1_cgf_gluing(build_kernel(w))
    assert g.max_imag <= 1e-5 and g.max_conj_gap <= 1e-5 and g.n_points == 10


def _drift_base():
    m = {(1, 1): F(1, 8), (1, 0): F(1, 8), (1, -1): F(1, 16), (0, 1): F(1, 8), (0, -1): F(1, 8),
         (-1, 1): F(1, 16), (-1, 0): F(1, 8), (-1, -1): F(1, 8)}
    m[(0, 0)] = 1 - sum(m.values())
    return m


def test_periods_converge_to_limit_periods_along_a_drift_path():
    base = _drift_base()
    lp = limit_periods(build_kernel(StepWeights.from_mapping(base)))
    errs2, errs3 = [], []
    for eps in (F(1, 100), F(1, 1000), F(1, 10000)):
        m = dict(base)
        m[(1, 0)] += eps
        m[(-1, 0)] -= eps
        p = periods(build_kernel(StepWeights.from_mapping(m)))
        errs2.append(abs(p.omega2 / 2 - lp.alpha2))
        errs3.append(abs(p.omega3 / 2 - lp.alpha3))
    assert errs2[0] > errs2[1] > errs2[2] and errs3[0] > errs3[1] > errs3[2]
    assert errs2[2] < 1e-6 and errs3[2] < 1e-6


def test_periods_refuse_genus0():
    with pytest.raises(WrongGenus):
        periods(build_kernel(GESSEL))


def test_quartic_invariants_under_translation():
    # invariants of a binary quartic do not change under x -> x + c
    d = [0.3, -1.1, 0.4, 0.9, -0.2]
    c = 0.37
    shifted = np.polynomial.polynomial.Polynomial(d)(np.polynomial.polynomial.Polynomial([c, 1])).coef
    for a, b in zip(quartic_invariants(d), quartic_invariants(shifted)):
        assert math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-14)
