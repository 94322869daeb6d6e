"""Kernel polynomials, discriminants, branch points and the genus of the kernel curve."""

from __future__ import annotations

import cmath
import csv
import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _kernels
from . import _poly as P
from .errors import RootFindingFailure, SamplingDegenerate
from .walk_model import HP, StepWeights

INEXACT_ZERO = HP.mpf(10) ** -40
ROOT_RESIDUAL_TOL = 1e-12


class PointAtInfinity:
    """Marker for a branch point sent to infinity by a drop in degree."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (PointAtInfinity, ())


INFINITY = PointAtInfinity()


def is_infinite(z) -> bool:
    return z is INFINITY


def moebius_coord(z, center: float) -> complex:
    """v = 1/(center - z), sending INFINITY to 0."""
    if z is INFINITY:
        return 0.0
    return 1.0 / (center - z)


def _zero_test(exact: bool):
    if exact:
        return lambda c: c == 0
    return lambda c: abs(c) <= INEXACT_ZERO


@dataclass(frozen=True)
class KernelData:
    """Coefficients (ascending powers) of a, b, c in x and of a~, b~, c~ in y."""

    a: tuple
    b: tuple
    c: tuple
    at: tuple
    bt: tuple
    ct: tuple
    D: tuple
    Dt: tuple
    exact: bool
    weights: StepWeights

    @property
    def C(self):
        return self.D[4]

    @property
    def Ct(self):
        return self.Dt[4]

    @property
    def d(self) -> tuple:
        return self.D

    @property
    def is_zero(self):
        return _zero_test(self.exact)

    @cached_property
    def f(self) -> dict:
        """Float copies of every polynomial, keyed by attribute name."""
        return {
            name: tuple(float(c) for c in getattr(self, name))
            for name in ("a", "b", "c", "at", "bt", "ct", "D", "Dt")
        }

    def K(self, x, y):
        fa, fb, fc = self.f["a"], self.f["b"], self.f["c"]
        return P.evaluate(fa, x) * y * y + P.evaluate(fb, x) * y + P.evaluate(fc, x)

    def K_scale(self, x, y) -> float:
        """Sum of absolute monomial values, used to make |K| relative."""
        ax, ay = abs(x), abs(y)
        total = 0.0
        for (i, j), v in self.weights.items():
            cv = float(v) - (1.0 if (i, j) == (0, 0) else 0.0)
            total += abs(cv) * ax ** (i + 1) * ay ** (j + 1)
        return total

    def coefficient_matrix(self) -> np.ndarray:
        """Rows a, b, c, a~, b~, c~ as a complex array (for the orbit kernel)."""
        return np.array([self.f[n] for n in ("a", "b", "c", "at", "bt", "ct")], dtype=np.complex128)


def build_kernel(w: StepWeights) -> KernelData:
    """Kernel K = a(x)y^2 + b(x)y + c(x) = a~(y)x^2 + b~(y)x + c~(y)."""
    p = w.__getitem__
    one = 1
    a = (p((-1, 1)), p((0, 1)), p((1, 1)))
    b = (p((-1, 0)), p((0, 0)) - one, p((1, 0)))
    c = (p((-1, -1)), p((0, -1)), p((1, -1)))
    at = (p((1, -1)), p((1, 0)), p((1, 1)))
    bt = (p((0, -1)), p((0, 0)) - one, p((0, 1)))
    ct = (p((-1, -1)), p((-1, 0)), p((-1, 1)))

    def disc(u, v, s):
        bb = P.mul(v, v)
        ac = P.mul(u, s)
        return tuple(bb[k] - 4 * ac[k] for k in range(5))

    return KernelData(a, b, c, at, bt, ct, disc(a, b, c), disc(at, bt, ct), w.exact, w)


@dataclass(frozen=True)
class Singularity:
    singular: bool
    reason: str

    def __bool__(self):
        return self.singular


def is_singular(k: KernelData) -> Singularity:
    """Degree drop in one variable, or a factorization of the kernel."""
    z = k.is_zero
    for name, label in (("a", "a(x)"), ("c", "c(x)"), ("at", "a~(y)"), ("ct", "c~(y)")):
        if not P.trim(getattr(k, name), z):
            kind = "degree below 2" if name in ("a", "at") else "a coordinate factor"
            return Singularity(True, f"{label} vanishes identically ({kind})")
    for names, label in ((("a", "b", "c"), "a, b, c"), (("at", "bt", "ct"), "a~, b~, c~")):
        u, v, s = (getattr(k, n) for n in names)
        g = P.gcd(P.gcd(u, v, z), s, z)
        if P.degree(g, z) >= 1:
            return Singularity(True, f"{label} share the factor {g}")
    if P.monic_square_root(k.D, z) is not None:
        return Singularity(True, "D is a perfect square, the kernel factors")
    return Singularity(False, "")


class GenusClass(enum.Enum):
    Singular = "Singular"
    Genus1 = "Genus1"
    Genus0ZeroDrift = "Genus0ZeroDrift"
    Genus0Case2 = "Genus0Case2"
    Genus0Case3 = "Genus0Case3"
    Genus0Case4 = "Genus0Case4"
    Genus0Case5 = "Genus0Case5"

    @property
    def genus(self):
        if self is GenusClass.Singular:
            return None
        return 1 if self is GenusClass.Genus1 else 0


# zero patterns giving genus 0 with a nonzero drift
ZERO_PATTERNS = {
    GenusClass.Genus0Case2: ((0, 1), (-1, 0), (-1, 1)),
    GenusClass.Genus0Case3: ((1, 0), (1, -1), (0, -1)),
    GenusClass.Genus0Case4: ((1, 0), (0, 1), (1, 1)),
    GenusClass.Genus0Case5: ((0, -1), (-1, 0), (-1, -1)),
}


def has_zero_drift(w: StepWeights) -> bool:
    z = _zero_test(w.exact)
    dx = sum(i * v for (i, j), v in w.items())
    dy = sum(j * v for (i, j), v in w.items())
    return z(dx) and z(dy)


def genus_classify(w: StepWeights, k: KernelData | None = None) -> GenusClass:
    k = build_kernel(w) if k is None else k
    if is_singular(k):
        return GenusClass.Singular
    if has_zero_drift(w):
        return GenusClass.Genus0ZeroDrift
    z = _zero_test(w.exact)
    for tag, steps in ZERO_PATTERNS.items():
        if all(z(w[ij]) for ij in steps):
            return tag
    return GenusClass.Genus1


def projective_discriminant_vanishes(poly: Sequence) -> bool:
    """Exact test for a repeated root of a quartic on the projective line.

    A degree drop of two or more counts as a repeated root at infinity.
    """
    import flint

    p = P.trim(poly)
    deg = len(p) - 1
    if deg <= 2:
        return True
    f = flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in map(Fraction, p)])
    return f.gcd(f.derivative()).degree() >= 1


# -- branch points ---------------------------------------------------------

@dataclass(frozen=True)
class BranchPoints:
    x_roots: tuple
    y_roots: tuple
    x_multiple: tuple
    y_multiple: tuple
    zero_drift: bool

    def finite_x(self) -> list:
        return [r for r in self.x_roots if r is not INFINITY]


def _sort_key(z):
    if z is INFINITY:
        return (float("inf"), 0.0, 0.0)
    z = complex(z)
    return (abs(z), z.real, z.imag)


def _clean(z: complex, scale: float = 1.0) -> complex | float:
    z = complex(z)
    if abs(z.imag) <= 1e-13 * max(1.0, abs(z.real), scale):
        return float(z.real)
    return z


def _quadratic_roots_hp(q: Sequence) -> list:
    """Roots of q0 + q1 x + q2 x^2 (degree 1 or 2) in high precision, stable form."""
    q0, q1, q2 = (HP.mpf(c) if not isinstance(c, Fraction) else HP.mpf(c.numerator) / c.denominator for c in q)
    if q2 == 0:
        return [-q0 / q1]
    disc = q1 * q1 - 4 * q0 * q2
    if disc >= 0:
        s = HP.sqrt(disc)
        t = -(q1 + (s if q1 >= 0 else -s)) / 2
        if t == 0:
            return [HP.mpf(0), HP.mpf(0)]
        return [t / q2, q0 / t]
    s = HP.sqrt(-disc) * 1j
    return [(-q1 + s) / (2 * q2), (-q1 - s) / (2 * q2)]


def _relative_residual(poly: Sequence, r: complex) -> float:
    num = abs(P.evaluate(poly, r))
    den = sum(abs(c) * abs(r) ** k for k, c in enumerate(poly))
    return num / den if den else num


def quartic_roots(poly: Sequence, double_root_at_one: bool, exact: bool) -> tuple[tuple, tuple]:
    """Roots of a degree <= 4 discriminant, INFINITY for each lost degree, ordered by modulus."""
    z = _zero_test(exact)
    p = tuple(0 if z(c) else c for c in P.trim(poly, z))
    deg = len(p) - 1
    fp = tuple(float(c) for c in p)
    roots: list = []
    multiple: list = []
    if double_root_at_one:
        q, r1 = P.deflate(p, 1)
        q, r2 = P.deflate(q, 1)
        if not (z(r1) and z(r2)):
            raise RootFindingFailure("expected a double root at 1")
        q = tuple(0 if z(c) else c for c in P.trim(q, z))
        roots += [1.0, 1.0]
        multiple += [True, True]
        if len(q) >= 2:
            qq = tuple(q) + (0,) * (3 - len(q))
            for r in _quadratic_roots_hp(qq):
                roots.append(_clean(complex(r)))
                multiple.append(False)
    elif deg >= 1:
        approx = np.roots(np.array(fp[::-1], dtype=np.complex128))
        polished = _kernels.newton(np.array(fp, dtype=np.complex128), approx, 60)
        for r in polished:
            roots.append(_clean(r))
            multiple.append(False)
        for idx, r in enumerate(roots):
            for jdx, s in enumerate(roots):
                if idx != jdx and abs(complex(r) - complex(s)) <= 1e-7 * max(1.0, abs(r)):
                    multiple[idx] = True
    for r, m in zip(roots, multiple):
        if not m and _relative_residual(fp, r) > ROOT_RESIDUAL_TOL:
            raise RootFindingFailure(f"root {r} has residual {_relative_residual(fp, r):.2e}")
    n_inf = 4 - deg if deg >= 0 else 4
    roots += [INFINITY] * n_inf
    multiple += [n_inf >= 2] * n_inf
    order = sorted(range(len(roots)), key=lambda i: _sort_key(roots[i]))
    return tuple(roots[i] for i in order), tuple(multiple[i] for i in order)


def branch_points(k: KernelData) -> BranchPoints:
    """Roots of D and D~, polished and ordered by modulus (x1..x4, y1..y4)."""
    zd = has_zero_drift(k.weights)
    xr, xm = quartic_roots(k.D, zd, k.exact)
    yr, ym = quartic_roots(k.Dt, zd, k.exact)
    return BranchPoints(xr, yr, xm, ym, zd)


# -- algebraic branches ------------------------------------------------------

def _ordered_pair(r1, r2):
    return tuple(sorted((r1, r2), key=_sort_key))


def _solve_quadratic(A, B, Cc):
    """Both roots of A t^2 + B t + Cc, with INFINITY when A vanishes."""
    if A == 0:
        if B == 0:
            return (INFINITY, INFINITY)
        return _ordered_pair(complex(-Cc / B), INFINITY)
    s = cmath.sqrt(B * B - 4 * A * Cc)
    if (B.conjugate() * s).real < 0:
        s = -s
    q = -(B + s) / 2
    if q == 0:
        return (0j, 0j)
    return _ordered_pair(q / A, Cc / q)


def branch_X(y: complex, k: KernelData) -> tuple:
    """(X0(y), X1(y)) with |X0| <= |X1|; ties by real part then imaginary part."""
    y = complex(y)
    return _solve_quadratic(P.evaluate(k.f["at"], y), P.evaluate(k.f["bt"], y), P.evaluate(k.f["ct"], y))


def branch_Y(x: complex, k: KernelData) -> tuple:
    x = complex(x)
    return _solve_quadratic(P.evaluate(k.f["a"], x), P.evaluate(k.f["b"], x), P.evaluate(k.f["c"], x))


def X_at_branch_point(y: float, k: KernelData):
    """Double value -b~(y)/(2 a~(y)) of X at a branch point y; INFINITY when a~(y) = 0."""
    A = P.evaluate(k.f["at"], y)
    if abs(A) <= 1e-14 * max(1.0, sum(abs(c) for c in k.f["at"])):
        return INFINITY
    return -P.evaluate(k.f["bt"], y) / (2 * A)


def Y_at_branch_point(x: float, k: KernelData):
    A = P.evaluate(k.f["a"], x)
    if abs(A) <= 1e-14 * max(1.0, sum(abs(c) for c in k.f["a"])):
        return INFINITY
    return -P.evaluate(k.f["b"], x) / (2 * A)


# -- the curves M1 and M2 -----------------------------------------------------

@dataclass(frozen=True)
class CurveSamples:
    points: np.ndarray
    component: np.ndarray

    def of(self, component_id: int) -> np.ndarray:
        return self.points[self.component == component_id]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["x_re", "x_im", "component_id"])
            for z, cid in zip(self.points, self.component):
                out.writerow([repr(float(z.real)), repr(float(z.imag)), int(cid)])


def _slit_images(k: KernelData, ys: np.ndarray) -> np.ndarray:
    upper, lower = [], []
    for y in ys:
        r = [z for z in branch_X(y, k) if z is not INFINITY]
        if len(r) < 2:
            continue
        hi, lo = sorted(r, key=lambda z: -z.imag)
        upper.append(hi)
        lower.append(lo)
    return np.array(upper + lower[::-1], dtype=np.complex128)


def curve_M(k: KernelData, n_samples: int = 200, bp: BranchPoints | None = None) -> CurveSamples:
    """Sample M1 = X0([y1, y2]) and M2 = X0([y3, y4]) along both edges of each slit."""
    bp = branch_points(k) if bp is None else bp
    y1, y2, y3, y4 = bp.y_roots
    for v in (y1, y2, y3):
        if v is INFINITY or abs(complex(v).imag) > 1e-12:
            raise SamplingDegenerate("slit endpoints are not real")
    if y4 is not INFINITY and abs(complex(y4).imag) > 1e-12:
        raise SamplingDegenerate("slit endpoints are not real")
    y1, y2, y3 = float(y1), float(y2), float(y3)
    if y1 == y2 or (y4 is not INFINITY and y3 == float(y4)):
        raise SamplingDegenerate("a slit has zero length")
    s = 0.5 * (1 - np.cos(np.linspace(0.0, np.pi, n_samples)))
    m1 = _slit_images(k, y1 + (y2 - y1) * s)
    # the second slit runs from y3 through infinity when y4 is negative or infinite
    center = 0.5 * (y1 + y2)
    v3 = moebius_coord(y3, center)
    v4 = moebius_coord(y4 if y4 is INFINITY else float(y4), center)
    vs = v3 + (v4 - v3) * s
    vs = vs[vs != 0]
    m2 = _slit_images(k, center - 1.0 / vs)
    pts = np.concatenate([m1, m2])
    comp = np.concatenate([np.ones(len(m1), dtype=int), np.full(len(m2), 2, dtype=int)])
    return CurveSamples(pts, comp)
