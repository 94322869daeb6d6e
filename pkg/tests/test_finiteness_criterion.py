import math
from fractions import Fraction as F

import pytest
from conftest import zero_drift_walks
from hypothesis import given
from hypothesis import strategies as st
from sympy import totient

from walkgroup.catalog import GESSEL, KREWERAS, R_ONE_THIRD, SIMPLE, case_exemplar, krsp4, random_walks
from walkgroup.errors import DegenerateBranchPoints, SingularWalk
from walkgroup.finiteness_criterion import (
    GroupOrderResult,
    ProofPath,
    Verdict,
    convergents,
    decide,
    detect_rational,
    lambda_form,
    lambda_from_points,
    order4_test,
    order_from_lambda,
    order_from_ratio,
    rational_angle_table,
    theta_rationality,
)
from walkgroup.kernel_algebra import INFINITY
from walkgroup.walk_model import HP, SYMMETRIES, StepWeights, angle_theta, delta_determinant, moments


def _degree_of_cos(p, q):
    # cos(2 pi k/n) with gcd(k, n) = 1 has degree phi(n)/2 for n >= 3
    n = 2 * q // math.gcd(p, 2 * q)
    return 1 if n <= 2 else int(totient(n)) // 2


def test_angle_table_matches_euler_phi():
    expected = {(p, q) for q in range(2, 121) for p in range(1, q)
                if math.gcd(p, q) == 1 and _degree_of_cos(p, q) <= 2}
    table = rational_angle_table()
    assert {(e.p, e.q) for e in table} == expected
    for e in table:
        val = float(e.a) + float(e.b) * math.sqrt(e.d)
        assert abs(val - math.cos(math.pi * e.p / e.q)) < 1e-14


def test_angle_table_entries():
    table = {(e.p, e.q): e for e in rational_angle_table()}
    assert (table[1, 2].a, table[1, 2].b) == (0, 0)
    assert (table[2, 3].a, table[2, 3].b) == (F(-1, 2), 0)
    assert (table[3, 4].a, table[3, 4].b, table[3, 4].d) == (0, F(-1, 2), 2)
    assert (table[1, 5].a, table[1, 5].b, table[1, 5].d) == (F(1, 4), F(1, 4), 5)
    assert (table[5, 6].a, table[5, 6].b, table[5, 6].d) == (0, F(-1, 2), 3)


@pytest.mark.parametrize("w,order,path", [
    (SIMPLE, 4, ProofPath.EXACT_ALGEBRAIC),
    (GESSEL, 8, ProofPath.EXACT_ALGEBRAIC),
    (KREWERAS, 6, ProofPath.EXACT_ALGEBRAIC),
    (krsp4(7), 14, ProofPath.NUMERIC_CF),
    (krsp4(12), 24, ProofPath.NUMERIC_CF),
])
def test_decide_finite(w, order, path):
    r = decide(w)
    assert r.verdict is Verdict.FINITE and r.order == order and r.proof_path is path
    assert r.label() == f"Finite({order})"


def test_decide_gessel_ratio():
    assert decide(GESSEL).theta_over_pi == F(3, 4)


def test_decide_infinite():
    r = decide(R_ONE_THIRD)
    assert r.verdict is Verdict.INFINITE and r.proof_path is ProofPath.EXACT_ALGEBRAIC
    for c in (2, 3, 4, 5):
        r = decide(case_exemplar(c))
        assert r.label() == "ProvenInfinite" and r.proof_path is ProofPath.ZERO_PATTERN


def test_decide_refuses_singular():
    with pytest.raises(SingularWalk):
        decide(StepWeights.from_mapping({(1, 1): "1/2", (-1, -1): "1/2"}))


def test_theta_rationality_classes():
    assert theta_rationality(angle_theta(moments(KREWERAS))).value == F(2, 3)
    r = theta_rationality(angle_theta(moments(R_ONE_THIRD)))
    assert (r.kind, r.exact) == ("irrational", True)
    r = theta_rationality(angle_theta(moments(krsp4(7))))
    assert (r.kind, r.value, r.exact) == ("rational", F(1, 7), False)


def test_continued_fractions():
    assert list(convergents(F(3, 7), 100)) == [0, F(1, 2), F(3, 7)]
    assert list(convergents(HP.pi, 1000))[:4] == [3, F(22, 7), F(333, 106), F(355, 113)]
    assert detect_rational(HP.mpf(3) / 7) == F(3, 7)
    assert detect_rational(HP.mpf(3) / 7 + HP.mpf(10) ** -6) is None
    assert detect_rational(HP.pi / 4) is None
    assert detect_rational(HP.mpf(1) / 9973) == F(1, 9973)
    assert detect_rational(HP.mpf(1) / 10007) is None


def test_undecided_when_bound_is_small():
    r = decide(krsp4(11), max_denominator=10)
    assert r.verdict is Verdict.UNDECIDED and r.bound == 10
    assert r.label() == "UndecidedUpToBound(10)"


@pytest.mark.parametrize("p", [1, 3, 5])
def test_order_from_ratio(p):
    assert order_from_ratio(F(p, 7)) == 14
    assert order_from_ratio(F(2 * p, 4)) == 2 * F(2 * p, 4).denominator


def test_lambda_examples():
    lam = lambda_form(SIMPLE)
    assert abs(lam.value) < 1e-12 and abs(lam.value_tilde) < 1e-12
    lam = lambda_form(GESSEL)
    assert abs(lam.theta - 3 * math.pi / 4) < 1e-9
    assert order_from_lambda(lam.value) == 8
    assert order_from_lambda(lambda_form(KREWERAS).value) == 6


def test_lambda_agrees_with_moments_on_random_walks():
    for w in random_walks(17, 30):
        lam = lambda_form(w)
        t = angle_theta(moments(w))
        assert abs(lam.theta - float(t.theta)) < 1e-9
        assert abs(lam.value - lam.value_tilde) < 1e-9 * max(1, abs(lam.value))


def test_lambda_degenerate_points():
    with pytest.raises(DegenerateBranchPoints):
        lambda_from_points(0.3, 3.0, 1.0)
    with pytest.raises(DegenerateBranchPoints):
        lambda_from_points(0.3, 0.3, -1.0)
    with pytest.raises(DegenerateBranchPoints):
        lambda_from_points(0.3, INFINITY, INFINITY)


def test_order4_test():
    assert order4_test(SIMPLE)
    assert not order4_test(GESSEL)
    assert order4_test(StepWeights.from_mapping({
        (1, 0): "3/10", (0, 1): "3/10", (-1, 0): "1/5", (0, -1): "1/5"}))


@given(zero_drift_walks(), st.sampled_from(sorted(SYMMETRIES)))
def test_verdict_invariant_under_symmetries(w, name):
    assert decide(w).label() == decide(w.transform(name)).label()


@given(zero_drift_walks())
def test_order_is_twice_the_denominator(w):
    r = decide(w)
    if r.is_finite:
        assert r.order == 2 * r.theta_over_pi.denominator
        assert abs(float(r.theta_over_pi) * math.pi - float(angle_theta(moments(w)).theta)) < 1e-12


@given(zero_drift_walks(mixed_zero=True))
def test_vanishing_determinant_gives_order_four(w):
    assert delta_determinant(w).value == 0
    assert order4_test(w)
    assert decide(w).label() == "Finite(4)"


@given(zero_drift_walks())
def test_order_four_only_with_vanishing_determinant(w):
    assert (decide(w).order == 4) == order4_test(w)


def test_result_json_round_trip():
    for w in (GESSEL, R_ONE_THIRD, krsp4(7)):
        r = decide(w)
        assert GroupOrderResult.from_jsonable(r.to_jsonable()) == r
