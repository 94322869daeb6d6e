"""Deciding whether the group of the walk is finite, and its order.

Zero-drift walks of genus 0 are decided from theta/pi, exactly when the
weights are rational: cos(theta) then has degree at most two over the
rationals, and the rational multiples of pi with such cosines form a short
list that is regenerated here by a brute-force scan. Walks of genus 0 with a
nonzero drift always have an infinite group; genus-1 walks are handed to the
elliptic-period code.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import mpmath
import numpy as np
from sympy.ntheory.factor_ import core

from .errors import DegenerateBranchPoints, SingularWalk
from .kernel_algebra import (
    INFINITY,
    GenusClass,
    X_at_branch_point,
    Y_at_branch_point,
    branch_points,
    build_kernel,
    genus_classify,
)
from .walk_model import (
    HP,
    AngleTheta,
    NumericOnly,
    QuadraticCos,
    RationalCos,
    StepWeights,
    angle_theta,
    delta_determinant,
    moments,
)

DEFAULT_MAX_DENOMINATOR = 10**4
CF_WINDOW = 1e-9  # accept p/q when |x - p/q| < CF_WINDOW / q**2
TABLE_MAX_Q = 120


class Verdict(enum.Enum):
    FINITE = "Finite"
    INFINITE = "ProvenInfinite"
    UNDECIDED = "UndecidedUpToBound"


class ProofPath(enum.Enum):
    EXACT_ALGEBRAIC = "ExactAlgebraic"
    NUMERIC_CF = "NumericContinuedFraction"
    ORBIT_ORACLE = "OrbitOracle"
    ZERO_PATTERN = "ZeroPatternGenus0"


@dataclass(frozen=True)
class GroupOrderResult:
    verdict: Verdict
    proof_path: ProofPath
    order: Optional[int] = None
    reason: Optional[str] = None
    bound: Optional[int] = None
    denominator: Optional[int] = None
    tolerance: Optional[float] = None
    theta_over_pi: Optional[Fraction] = None
    details: dict = field(default_factory=dict, compare=False)

    @property
    def is_finite(self) -> bool:
        return self.verdict is Verdict.FINITE

    def label(self) -> str:
        if self.verdict is Verdict.FINITE:
            return f"Finite({self.order})"
        if self.verdict is Verdict.INFINITE:
            return "ProvenInfinite"
        return f"UndecidedUpToBound({self.bound})"

    def to_jsonable(self) -> dict:
        out = {"verdict": self.verdict.value, "proof_path": self.proof_path.value}
        for key in ("order", "reason", "bound", "denominator", "tolerance"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        if self.theta_over_pi is not None:
            out["theta_over_pi"] = str(self.theta_over_pi)
        return out

    @classmethod
    def from_jsonable(cls, data: dict) -> GroupOrderResult:
        top = data.get("theta_over_pi")
        return cls(
            Verdict(data["verdict"]),
            ProofPath(data["proof_path"]),
            data.get("order"),
            data.get("reason"),
            data.get("bound"),
            data.get("denominator"),
            data.get("tolerance"),
            Fraction(top) if top is not None else None,
        )


def finite(order: int, path: ProofPath, **kw) -> GroupOrderResult:
    return GroupOrderResult(Verdict.FINITE, path, order=order, **kw)


# -- continued fractions -----------------------------------------------------

def convergents(x, max_denominator: int):
    """Yield the continued-fraction convergents p/q of x with q <= max_denominator."""
    ctx = HP if isinstance(x, (mpmath.mpf, type(HP.mpf(0)))) else None
    p0, q0, p1, q1 = 0, 1, 1, 0
    r = x
    for _ in range(200):
        a = int(math.floor(r)) if ctx is None else int(HP.floor(r))
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > max_denominator:
            return
        yield Fraction(p1, q1)
        frac = r - a
        if frac == 0:
            return
        r = 1 / frac


def detect_rational(x, max_denominator: int = DEFAULT_MAX_DENOMINATOR, window: float = CF_WINDOW) -> Optional[Fraction]:
    """Smallest-denominator convergent within window/q**2 of x, if any."""
    for c in convergents(x, max_denominator):
        if abs(x - c.numerator / HP.mpf(c.denominator)) < window / c.denominator**2:
            return c
    return None


# -- the table of rational angles with low-degree cosines --------------------

@dataclass(frozen=True)
class AngleTableEntry:
    p: int
    q: int
    a: Fraction
    b: Fraction
    d: int  # cos(p*pi/q) = a + b*sqrt(d)
    min_poly: tuple  # integer coefficients, highest degree first


def _low_degree_candidates(max_q: int) -> list[tuple[int, int]]:
    # 2cos(p pi/q) is an algebraic integer whose conjugates all lie in [-2, 2], so a
    # minimal polynomial of degree <= 2 is x^2 - s x + t (or x - s) with |s|, |t| <= 4
    pq = np.array([(p, q) for q in range(2, max_q + 1) for p in range(1, q) if math.gcd(p, q) == 1])
    z = 2 * np.cos(np.pi * pq[:, 0] / pq[:, 1])
    hit = np.zeros(len(z), dtype=bool)
    for s_ in range(-4, 5):
        hit |= np.abs(z - s_) < 1e-9
        for t_ in range(-4, 5):
            hit |= np.abs(z * z - s_ * z + t_) < 1e-9
    return [tuple(int(v) for v in row) for row in pq[hit]]


@lru_cache(maxsize=None)
def rational_angle_table(max_q: int = TABLE_MAX_Q) -> tuple[AngleTableEntry, ...]:
    """All cos(p*pi/q), 0 < p < q <= max_q, of algebraic degree <= 2, with exact values.

    A float prefilter keeps the candidates; each one is then confirmed and made
    exact by an integer-relation search at 40 digits.
    """
    ctx = mpmath.MPContext()
    ctx.dps = 40
    tiny = ctx.mpf(10) ** -30
    out = []
    for p, q in _low_degree_candidates(max_q):
        c = ctx.cos(ctx.pi * p / q)
        if abs(c) < tiny:
            out.append(AngleTableEntry(p, q, Fraction(0), Fraction(0), 1, (1, 0)))
            continue
        poly = ctx.findpoly(c, 2, maxcoeff=10**6)
        if not poly:
            continue
        if len(poly) == 2:
            c1, c0 = poly
            out.append(AngleTableEntry(p, q, Fraction(-c0, c1), Fraction(0), 1, tuple(poly)))
            continue
        c2, c1, c0 = poly
        disc = c1 * c1 - 4 * c2 * c0
        d = int(core(disc))
        s = math.isqrt(disc // d)
        a, b = Fraction(-c1, 2 * c2), Fraction(s, 2 * c2)
        # findpoly tries degree 1 first, so a quadratic here is irreducible and d > 1
        if abs(float(a) + float(b) * math.sqrt(d) - float(c)) > 1e-12:
            b = -b
        out.append(AngleTableEntry(p, q, a, b, d, tuple(poly)))
    return tuple(out)


def _matches(cls, e: AngleTableEntry) -> bool:
    if isinstance(cls, RationalCos):
        return e.b == 0 and e.a == cls.value
    if isinstance(cls, QuadraticCos):
        if e.b == 0:
            return False
        return e.a == cls.a and e.b == cls.b and e.d == cls.d
    return False


@dataclass(frozen=True)
class Rationality:
    """Outcome of the theta/pi test: 'rational', 'irrational' or 'undecided'."""

    kind: str
    value: Optional[Fraction]
    exact: bool
    max_denominator: Optional[int] = None


def theta_rationality(t: AngleTheta, max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> Rationality:
    if not isinstance(t.exact_class, NumericOnly):
        for e in rational_angle_table():
            if _matches(t.exact_class, e):
                return Rationality("rational", Fraction(e.p, e.q), True)
        return Rationality("irrational", None, True)
    hit = detect_rational(t.over_pi, max_denominator)
    if hit is not None:
        return Rationality("rational", hit, False, max_denominator)
    return Rationality("undecided", None, False, max_denominator)


def order_from_ratio(r: Fraction) -> int:
    """2 * inf{l >= 1 : l * r is an integer}."""
    return 2 * r.denominator


# -- the arctan form ----------------------------------------------------------

@dataclass(frozen=True)
class LambdaValue:
    value: float
    value_tilde: float
    x1: float
    x4: object
    X_y1: object

    @property
    def theta(self) -> float:
        return math.pi / 2 - math.atan(self.value)


def lambda_from_points(b1, b4, B):
    """Arctan parameter built from the two outer branch points b1, b4 and the branch value B.

    Works for either coordinate. INFINITY is accepted for b4 and for B, and the sign
    follows (b1 - B)(b4 - 1) so that the value stays tied to the angle on every
    arrangement of the points on the projective line.
    """
    if B is not INFINITY and abs(B - 1) < 1e-14:
        raise DegenerateBranchPoints("branch value equals the corner point 1")
    if b4 is not INFINITY and abs(b1 - b4) < 1e-14:
        raise DegenerateBranchPoints("outer branch points coincide")
    if B is INFINITY:
        if b4 is INFINITY:
            raise DegenerateBranchPoints("branch value and outer branch point both at infinity")
        return -(b1 + b4 - 2) / (2 * math.sqrt((1 - b1) * (b4 - 1)))
    if b4 is INFINITY:
        return (1 - 2 * b1 + B) / (2 * math.sqrt((b1 - B) * (1 - b1)))
    num = b1 + b4 - 2 * b1 * b4 + (b1 + b4 - 2) * B
    prod = (B - b1) * (B - b4) * (1 - b1) * (b4 - 1)
    sign = 1.0 if (b1 - B) * (b4 - 1) > 0 else -1.0
    return sign * num / (2 * math.sqrt(prod))


def lambda_form(w: StepWeights, k=None, bp=None) -> LambdaValue:
    k = build_kernel(w) if k is None else k
    if genus_classify(w, k) is not GenusClass.Genus0ZeroDrift:
        from .errors import WrongGenus

        raise WrongGenus("the arctan form needs a zero-drift walk of genus 0")
    bp = branch_points(k) if bp is None else bp
    x1, x4 = bp.x_roots[0], bp.x_roots[3]
    y1, y4 = bp.y_roots[0], bp.y_roots[3]
    X = X_at_branch_point(y1, k)
    Y = Y_at_branch_point(x1, k)
    lam = lambda_from_points(x1, x4, X)
    lam_t = lambda_from_points(y1, y4, Y)
    return LambdaValue(lam, lam_t, x1, x4, X)


def order_from_lambda(lam: float, max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> Optional[int]:
    r = detect_rational(0.5 - math.atan(lam) / math.pi, max_denominator, window=1e-7)
    return None if r is None else order_from_ratio(r)


def order4_test(w: StepWeights) -> bool:
    """True iff the 3x3 determinant vanishes (exactly for rational weights)."""
    v = delta_determinant(w).value
    return v == 0 if w.exact else abs(v) <= 1e-12


# -- decision ---------------------------------------------------------------

def decide(w: StepWeights, max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> GroupOrderResult:
    k = build_kernel(w)
    g = genus_classify(w, k)
    if g is GenusClass.Singular:
        raise SingularWalk("the kernel is reducible or has degree below 2")
    if g is GenusClass.Genus1:
        from .genus1_analysis import decide_genus1

        return decide_genus1(k, max_denominator=max_denominator)
    if g is not GenusClass.Genus0ZeroDrift:
        return GroupOrderResult(
            Verdict.INFINITE,
            ProofPath.ZERO_PATTERN,
            reason=f"nonzero drift with the {g.value} zero pattern: genus 0 and infinite group",
        )
    t = angle_theta(moments(w))
    rat = theta_rationality(t, max_denominator)
    if rat.exact:
        if rat.kind == "rational":
            return finite(order_from_ratio(rat.value), ProofPath.EXACT_ALGEBRAIC, theta_over_pi=rat.value)
        return GroupOrderResult(
            Verdict.INFINITE,
            ProofPath.EXACT_ALGEBRAIC,
            reason="cos(theta) has degree <= 2 and matches no rational angle of that degree",
        )
    if rat.kind == "rational":
        return finite(
            order_from_ratio(rat.value),
            ProofPath.NUMERIC_CF,
            denominator=rat.value.denominator,
            tolerance=CF_WINDOW,
            theta_over_pi=rat.value,
        )
    return GroupOrderResult(
        Verdict.UNDECIDED, ProofPath.NUMERIC_CF, bound=max_denominator, tolerance=CF_WINDOW
    )
