"""Zero-drift walks: limit periods, rational uniformization, limit gluing function.

Everything is written in the coordinate v = 1/(1 - x), which sends the corner
point x = 1 to infinity and keeps the outer branch point finite even when it
sits at infinity in x. In that coordinate D(x)/(x - 1)^2 becomes a quadratic
with roots v1 = v(x1) and v4 = v(x4).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _poly as P
from .errors import BranchCutViolation, RealRoots, ValidationFailure, WrongGenus
from .finiteness_criterion import detect_rational, order_from_ratio
from .kernel_algebra import (
    INFINITY,
    BranchPoints,
    GenusClass,
    KernelData,
    X_at_branch_point,
    Y_at_branch_point,
    branch_points,
    curve_M,
    genus_classify,
    moebius_coord,
)
from .quadrature import inv_sqrt_integral


@dataclass(frozen=True)
class CornerGeometry:
    x1: float
    x4: object
    y1: float
    y4: object
    X_y1: object
    Y_x1: object
    v1: float
    v4: float
    vX: float
    w1: float
    w4: float
    wY: float
    Q1: float  # D(x)/(x-1)^2 evaluated at x = 1

    @property
    def kappa(self) -> float:
        """cos of the angle between the two gluing points, in v coordinates."""
        return (2 * self.vX - self.v1 - self.v4) / (self.v1 - self.v4)


def _check(k: KernelData) -> None:
    if genus_classify(k.weights, k) is not GenusClass.Genus0ZeroDrift:
        raise WrongGenus("expected a zero-drift walk of genus 0")


def corner_geometry(k: KernelData, bp: BranchPoints | None = None) -> CornerGeometry:
    _check(k)
    bp = branch_points(k) if bp is None else bp
    x1, x4 = bp.x_roots[0], bp.x_roots[3]
    y1, y4 = bp.y_roots[0], bp.y_roots[3]
    X = X_at_branch_point(y1, k)
    Y = Y_at_branch_point(x1, k)
    q, _ = P.deflate(k.D, 1)
    q, _ = P.deflate(q, 1)

    def v(z):
        return float(moebius_coord(z, 1.0).real)

    return CornerGeometry(
        float(x1), x4, float(y1), y4, X, Y,
        v(x1), v(x4), v(X), v(y1), v(y4), v(Y),
        float(P.evaluate(q, 1)),
    )


# -- limit periods -----------------------------------------------------------

@dataclass(frozen=True)
class LimitPeriods:
    alpha2: float
    alpha3: float
    tolerance: float
    alpha3_error: float

    @property
    def ratio(self) -> float:
        return self.alpha3 / self.alpha2


def limit_periods(k: KernelData, bp: BranchPoints | None = None, tol: float = 1e-12) -> LimitPeriods:
    """alpha2 in closed form, alpha3 by quadrature between X(y1) and x1."""
    g = corner_geometry(k, bp)
    lc = -g.Q1
    alpha2 = math.pi / math.sqrt(lc)
    # in v: integrand 1/sqrt(lc (v1 - v)(v - v4)) on [vX, v1]
    res = inv_sqrt_integral(g.vX, g.v1, lc, [g.v4], a_is_root=False, b_is_root=True, tol=tol)
    return LimitPeriods(alpha2, res.value, tol, res.error)


def ratio_closed_form(k: KernelData, bp: BranchPoints | None = None) -> float:
    """alpha3/alpha2 from the arccos antiderivative."""
    return math.acos(corner_geometry(k, bp).kappa) / math.pi


# -- rational uniformization ----------------------------------------------------

def _z_from_sum(s: complex, sign: int) -> complex:
    """Root z of z + 1/z = s; the two signs give z and 1/z."""
    r = cmath.sqrt(s * s / 4 - 1)
    return s / 2 + sign * r


def _mobius_pair(u, z_num, z_den):
    return (u - z_num) * (u - 1 / z_num) / ((u - z_den) * (u - 1 / z_den))


@dataclass(frozen=True)
class RationalUniformization:
    z0: complex
    z1: complex
    z2: complex
    z3: complex
    rho: complex
    kappa: float
    signs: tuple
    valid_signs: tuple = field(compare=False)
    geometry: CornerGeometry = field(compare=False, repr=False)

    def x(self, u: complex) -> complex:
        return _mobius_pair(u, self.z1, self.z0)

    def y_hat(self, v: complex) -> complex:
        return _mobius_pair(v, self.z3, self.z2)

    def y(self, u: complex) -> complex:
        return self.y_hat(self.rho * u)

    @property
    def arg_rho(self) -> float:
        return cmath.phase(self.rho)

    def rho_equation_rhs(self) -> float:
        """Right-hand side of rho + 1/rho = ..., written with x1, x4 and X(y1)."""
        g = self.geometry
        x1, x4, X = g.x1, g.x4, g.X_y1
        if x4 is INFINITY or X is INFINITY:
            return 2 * self.kappa
        return 2 * (x1 + x4 - 2 * x1 * x4 + (x1 + x4 - 2) * X) / ((x4 - x1) * (1 - X))


def _uniformization_sums(v1: float, v4: float) -> tuple[float, float]:
    s0 = -2 * (v1 + v4) / (v1 - v4)
    s1 = 2 * (2 - v1 - v4) / (v1 - v4)
    return s0, s1


def rational_uniformization(k: KernelData, bp: BranchPoints | None = None, n_check: int = 8) -> RationalUniformization:
    """Constants z0..z3 and rho of the degree-2 parametrization of the curve."""
    g = corner_geometry(k, bp)
    s0, s1 = _uniformization_sums(g.v1, g.v4)
    s2, s3 = _uniformization_sums(g.w1, g.w4)
    kappa = min(1.0, max(-1.0, g.kappa))
    rho = complex(kappa, math.sqrt(1 - kappa * kappa))
    rng = np.random.default_rng(12345)
    test_u = np.exp(rng.uniform(-1, 1, n_check) + 1j * rng.uniform(0, 2 * np.pi, n_check))
    valid = []
    first = None
    for signs in [(a, b, c, d) for a in (1, -1) for b in (1, -1) for c in (1, -1) for d in (1, -1)]:
        z = [_z_from_sum(s, sg) for s, sg in zip((s0, s1, s2, s3), signs)]
        cand = RationalUniformization(*z, rho, kappa, signs, (), g)
        if _residual(k, cand, test_u) <= 1e-9:
            valid.append(signs)
            if first is None:
                first = cand
    if first is None:
        raise ValidationFailure("no sign choice makes K(x(u), y(u)) vanish")
    return RationalUniformization(first.z0, first.z1, first.z2, first.z3, rho, kappa, first.signs, tuple(valid), g)


def _residual(k: KernelData, ru: RationalUniformization, us) -> float:
    worst = 0.0
    for u in us:
        x, y = ru.x(u), ru.y(u)
        worst = max(worst, abs(k.K(x, y)) / max(k.K_scale(x, y), 1e-300))
    return worst


def curve_residual(k: KernelData, ru: RationalUniformization, u: complex) -> float:
    """|K(x(u), y(u))| relative to the size of its monomials."""
    return _residual(k, ru, [u])


def automorphisms(ru: RationalUniformization, u: complex) -> tuple[complex, complex, complex]:
    """(xi(u), eta(u), delta(u)) = (1/u, 1/(rho^2 u), u/rho^2)."""
    r2 = ru.rho * ru.rho
    return 1 / u, 1 / (r2 * u), u / r2


def order_from_rho(ru: RationalUniformization, max_denominator: int = 10**4) -> Optional[int]:
    """Group order 2 * min{l : rho^(2l) = 1}, detected through arg(rho)/pi."""
    r = detect_rational(ru.arg_rho / math.pi, max_denominator, window=1e-7)
    if r is None:
        return None
    l = r.denominator
    if abs(ru.rho ** (2 * l) - 1) > 1e-8:
        return None
    return order_from_ratio(r)


# -- limit gluing function and the corner exponent ------------------------------

class LimitCGF:
    """u(t) = sin^2((alpha2/alpha3)(arcsin(g(t)^(-1/2)) - pi/2)) on the domain bounded by M1."""

    def __init__(self, k: KernelData, bp: BranchPoints | None = None, n_boundary: int = 400):
        bp = branch_points(k) if bp is None else bp
        self.k = k
        self.geometry = corner_geometry(k, bp)
        lp = limit_periods(k, bp)
        self.alpha2, self.alpha3 = lp.alpha2, lp.alpha3
        D = k.f["D"]
        d1, d2 = P.deriv(D), P.deriv(P.deriv(D))
        x4 = self.geometry.x4
        if x4 is INFINITY:
            d3 = P.deriv(d2)
            c0, c1 = P.evaluate(d2, 0.0) / 6, P.evaluate(d3, 0.0) / 6
            self.f = lambda t: c0 + c1 * t
            self._outside = None
        else:
            c0, c1 = P.evaluate(d2, x4) / 6, P.evaluate(d1, x4)
            self.f = lambda t: c0 + c1 / (t - x4)
            self._outside = x4
        m1 = curve_M(k, n_boundary, bp).of(1)
        self._boundary = m1
        self._poly = self._chart(m1)

    def _chart(self, t):
        t = np.asarray(t, dtype=np.complex128)
        return t if self._outside is None else 1 / (t - self._outside)

    def inner(self, t: complex) -> complex:
        """g(t) = 1/3 + f(t) (alpha2/pi)^2, which runs from 1 at x1 down to 0 at the corner."""
        return 1 / 3 + self.f(t) * (self.alpha2 / math.pi) ** 2

    def in_domain(self, t: complex, boundary_tol: float = 1e-6) -> bool:
        z = complex(self._chart(t))
        poly = self._poly
        d = np.min(np.abs(poly - z))
        if d <= boundary_tol * max(1.0, np.max(np.abs(poly))):
            return True
        ang = np.angle(np.roll(poly, -1) - z) - np.angle(poly - z)
        ang = (ang + np.pi) % (2 * np.pi) - np.pi
        return abs(ang.sum()) > np.pi

    def __call__(self, t: complex, check_domain: bool = True) -> complex:
        if check_domain and not self.in_domain(t):
            raise BranchCutViolation(f"t = {t} lies outside the domain bounded by M1")
        g = complex(self.inner(t))
        s = cmath.asin(g ** -0.5)
        return cmath.sin((self.alpha2 / self.alpha3) * (s - math.pi / 2)) ** 2


def limit_cgf(k: KernelData, bp: BranchPoints | None, t: complex) -> complex:
    return LimitCGF(k, bp)(t)


@dataclass(frozen=True)
class CornerFit:
    exponent: float
    expected: float
    ts: tuple
    log_u: tuple

    @property
    def relative_error(self) -> float:
        return abs(self.exponent - self.expected) / self.expected


def corner_exponent(k: KernelData, bp: BranchPoints | None = None, powers=range(2, 7)) -> CornerFit:
    """Least-squares slope of log|u(t)| against -log(1 - t) at t = 1 - 10^-k."""
    cgf = LimitCGF(k, bp)
    ts = np.array([1 - 10.0 ** (-p) for p in powers])
    lu = np.array([math.log(abs(cgf(t))) for t in ts])
    slope = float(np.polyfit(-np.log(1 - ts), lu, 1)[0])
    return CornerFit(slope, cgf.alpha2 / cgf.alpha3, tuple(ts), tuple(lu))


def tangent_angle(k: KernelData) -> float:
    """|arg| of a root of a~(1) t^2 + m t + a(1), m the mixed moment."""
    _check(k)
    A = float(sum(k.at))
    B = float(sum(i * j * v for (i, j), v in k.weights.items()))
    Cc = float(sum(k.a))
    disc = B * B - 4 * A * Cc
    if disc >= 0:
        raise RealRoots("the tangent quadratic has real roots")
    root = complex(-B, math.sqrt(-disc)) / (2 * A)
    return abs(cmath.phase(root))
