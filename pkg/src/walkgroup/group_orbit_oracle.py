"""Exact and floating-point orbits of delta = eta o xi on the kernel curve.

The exact oracle works in the function field Q(x)[y]/(K): every element is
alpha(x) + beta(x) y with alpha, beta reduced rational functions, so equality
is syntactic and the return of (x, y) to itself certifies the group order.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction

import flint

from . import _kernels
from .errors import NormZero, NotExact, OrbitEscape, SingularWalk
from .finiteness_criterion import GroupOrderResult, ProofPath, Verdict, finite
from .kernel_algebra import branch_Y, build_kernel, is_singular
from .walk_model import StepWeights

DEFAULT_MAX_ITER = 64
DEFAULT_MAX_DEGREE = 200
DEFAULT_MAX_BITS = 10**5

_Poly = flint.fmpq_poly


def _fmpq(q: Fraction) -> flint.fmpq:
    q = Fraction(q)
    return flint.fmpq(q.numerator, q.denominator)


class RationalFunction:
    """num/den over Q with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, _Poly) else _Poly(num)
        den = _Poly([1]) if den is None else (den if isinstance(den, _Poly) else _Poly(den))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = _Poly([]), _Poly([1])
            return
        g = num.gcd(den)
        if g.degree() > 0:
            num, den = num // g, den // g
        lc = den.coeffs()[-1]
        self.num, self.den = num / lc, den / lc

    @classmethod
    def _raw(cls, num, den) -> RationalFunction:
        r = cls.__new__(cls)
        r.num, r.den = num, den
        return r

    @classmethod
    def constant(cls, q) -> RationalFunction:
        return cls(_Poly([_fmpq(q)]))

    @classmethod
    def x(cls) -> RationalFunction:
        return cls(_Poly([0, 1]))

    def __add__(self, o):
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, o):
        return self + (-o)

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def scale(self, q) -> RationalFunction:
        q = _fmpq(q)
        if q == 0:
            return RationalFunction._raw(_Poly([]), _Poly([1]))
        return RationalFunction._raw(self.num * q, self.den)

    def shift(self, q) -> RationalFunction:
        # gcd(num + q den, den) = gcd(num, den) = 1, so no reduction is needed
        num = self.num + self.den * _fmpq(q)
        if num.is_zero():
            return RationalFunction._raw(num, _Poly([1]))
        return RationalFunction._raw(num, self.den)

    def __mul__(self, o):
        return RationalFunction(self.num * o.num, self.den * o.den)

    def inverse(self) -> RationalFunction:
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, o):
        return self * o.inverse()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, o):
        return isinstance(o, RationalFunction) and self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def degree(self) -> int:
        return max(self.num.degree(), self.den.degree(), 0)

    def bits(self) -> int:
        total = 0
        for c in list(self.num.coeffs()) + list(self.den.coeffs()):
            total += int(abs(int(c.p))).bit_length() + int(c.q).bit_length()
        return total

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __repr__(self):
        return f"({self.num})/({self.den})"


class FunctionField:
    """Q(x)[y]/(a y^2 + b y + c) for a fixed kernel."""

    def __init__(self, a, b, c):
        self.a = RationalFunction(_Poly([_fmpq(v) for v in a]))
        self.b = RationalFunction(_Poly([_fmpq(v) for v in b]))
        self.c = RationalFunction(_Poly([_fmpq(v) for v in c]))
        self.b_over_a = self.b / self.a
        self.c_over_a = self.c / self.a
        self.zero = RationalFunction.constant(0)
        self.one = RationalFunction.constant(1)

    def element(self, alpha, beta=None) -> FieldElement:
        return FieldElement(alpha, self.zero if beta is None else beta, self)

    def const(self, q) -> FieldElement:
        return self.element(RationalFunction.constant(q))

    @property
    def x(self) -> FieldElement:
        return self.element(RationalFunction.x())

    @property
    def y(self) -> FieldElement:
        return FieldElement(self.zero, self.one, self)

    def poly_at(self, coeffs, e: FieldElement) -> FieldElement:
        coeffs = list(coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        acc = self.const(coeffs[-1])
        for n, cf in enumerate(reversed(coeffs[:-1])):
            acc = e.scale(coeffs[-1]) if n == 0 else acc * e
            acc = acc.shift(cf)
        return acc


@dataclass(frozen=True, eq=False)
class FieldElement:
    alpha: RationalFunction
    beta: RationalFunction
    field: FunctionField = field(repr=False)

    def __add__(self, o):
        return FieldElement(self.alpha + o.alpha, self.beta + o.beta, self.field)

    def __sub__(self, o):
        return FieldElement(self.alpha - o.alpha, self.beta - o.beta, self.field)

    def __neg__(self):
        return FieldElement(-self.alpha, -self.beta, self.field)

    def __mul__(self, o):
        # y^2 = -(b/a) y - c/a
        bd = self.beta * o.beta
        f = self.field
        return FieldElement(
            self.alpha * o.alpha - bd * f.c_over_a,
            self.alpha * o.beta + self.beta * o.alpha - bd * f.b_over_a,
            f,
        )

    def norm(self) -> RationalFunction:
        f = self.field
        return self.alpha * self.alpha - self.alpha * self.beta * f.b_over_a + self.beta * self.beta * f.c_over_a

    def inverse(self) -> FieldElement:
        n = self.norm()
        if n.is_zero():
            raise NormZero("element has zero norm")
        ninv = n.inverse()
        gamma = self.alpha - self.beta * self.field.b_over_a
        return FieldElement(gamma * ninv, -(self.beta * ninv), self.field)

    def __truediv__(self, o):
        return self * o.inverse()

    def scale(self, q) -> FieldElement:
        return FieldElement(self.alpha.scale(q), self.beta.scale(q), self.field)

    def shift(self, q) -> FieldElement:
        return FieldElement(self.alpha.shift(q), self.beta, self.field)

    def is_zero(self) -> bool:
        return self.alpha.is_zero() and self.beta.is_zero()

    def __eq__(self, o):
        return isinstance(o, FieldElement) and self.alpha == o.alpha and self.beta == o.beta

    def __hash__(self):
        return hash((self.alpha, self.beta))

    def degree(self) -> int:
        return max(self.alpha.degree(), self.beta.degree())

    def bits(self) -> int:
        return self.alpha.bits() + self.beta.bits()


@dataclass(frozen=True)
class CurveAutomorphismState:
    X: FieldElement
    Y: FieldElement
    n: int = 0
    max_degree: int = 0

    def is_identity(self) -> bool:
        f = self.X.field
        return self.X == f.x and self.Y == f.y

    def degree(self) -> int:
        return max(self.X.degree(), self.Y.degree())

    def bits(self) -> int:
        return self.X.bits() + self.Y.bits()


class OrbitContext:
    """Kernel polynomials plus the function field, built once per walk."""

    def __init__(self, w: StepWeights):
        if not w.exact:
            raise NotExact("the exact oracle needs rational weights")
        self.k = build_kernel(w)
        if is_singular(self.k):
            raise SingularWalk(is_singular(self.k).reason)
        self.field = FunctionField(self.k.a, self.k.b, self.k.c)

    def start(self) -> CurveAutomorphismState:
        return CurveAutomorphismState(self.field.x, self.field.y)

    def on_curve(self, s: CurveAutomorphismState) -> bool:
        f, k = self.field, self.k
        val = f.poly_at(k.a, s.X) * s.Y * s.Y + f.poly_at(k.b, s.X) * s.Y + f.poly_at(k.c, s.X)
        return val.is_zero()


def _bump(s: CurveAutomorphismState, X, Y, steps: int) -> CurveAutomorphismState:
    deg = max(X.degree(), Y.degree(), s.max_degree)
    return CurveAutomorphismState(X, Y, s.n + steps, deg)


def xi_step(ctx: OrbitContext, s: CurveAutomorphismState) -> CurveAutomorphismState:
    """(X, Y) -> (X, -Y - b(X)/a(X)); falls back to c(X)/(a(X) Y) on a zero norm."""
    f, k = ctx.field, ctx.k
    aX = f.poly_at(k.a, s.X)
    try:
        Y = -s.Y - f.poly_at(k.b, s.X) / aX
    except NormZero:
        Y = f.poly_at(k.c, s.X) / (aX * s.Y)
    return _bump(s, s.X, Y, 0)


def eta_step(ctx: OrbitContext, s: CurveAutomorphismState) -> CurveAutomorphismState:
    """(X, Y) -> (-X - b~(Y)/a~(Y), Y); falls back to c~(Y)/(a~(Y) X) on a zero norm."""
    f, k = ctx.field, ctx.k
    aY = f.poly_at(k.at, s.Y)
    try:
        X = -s.X - f.poly_at(k.bt, s.Y) / aY
    except NormZero:
        X = f.poly_at(k.ct, s.Y) / (aY * s.X)
    return _bump(s, X, s.Y, 0)


def delta_step(ctx: OrbitContext, s: CurveAutomorphismState) -> CurveAutomorphismState:
    t = eta_step(ctx, xi_step(ctx, s))
    return CurveAutomorphismState(t.X, t.Y, s.n + 1, t.max_degree)


@dataclass(frozen=True)
class TraceRow:
    n: int
    degree_X: int
    degree_Y: int
    bits: int


def write_trace_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["n", "degree_X", "degree_Y", "bits"])
        for r in rows:
            out.writerow([r.n, r.degree_X, r.degree_Y, r.bits])


def delta_order(
    w: StepWeights,
    max_iter: int = DEFAULT_MAX_ITER,
    max_degree: int = DEFAULT_MAX_DEGREE,
    max_bits: int = DEFAULT_MAX_BITS,
    check_curve: bool = True,
) -> GroupOrderResult:
    """Iterate delta exactly until (X_n, Y_n) = (x, y) or a cap is hit.

    The per-iteration trace is stored in ``details['trace']``.
    """
    ctx = OrbitContext(w)
    s = ctx.start()
    trace: list[TraceRow] = []
    for _ in range(max_iter):
        s = delta_step(ctx, s)
        trace.append(TraceRow(s.n, s.X.degree(), s.Y.degree(), s.bits()))
        if check_curve and not ctx.on_curve(s):
            raise AssertionError(f"iterate {s.n} left the curve")
        if s.is_identity():
            res = finite(2 * s.n, ProofPath.ORBIT_ORACLE)
            res.details["trace"] = trace
            return res
        if s.degree() > max_degree or s.bits() > max_bits:
            break
    bound = max_iter if s.n >= max_iter else s.n
    res = GroupOrderResult(
        Verdict.UNDECIDED,
        ProofPath.ORBIT_ORACLE,
        bound=bound,
        reason=f"no return after {s.n} iterations (degree {s.degree()}, {s.bits()} bits)",
    )
    res.details["trace"] = trace
    return res


# -- floating-point shadow ---------------------------------------------------

@dataclass(frozen=True)
class NumericOrbit:
    returned: bool
    period: int | None
    iterations: int
    settled: bool = False  # stopped at a fixed point of delta other than the start

    @property
    def order(self) -> int | None:
        return None if self.period is None else 2 * self.period


DEFAULT_START_X = complex(0.31, 0.47)


def curve_point(w: StepWeights, x: complex = DEFAULT_START_X) -> tuple[complex, complex]:
    k = build_kernel(w)
    y = branch_Y(x, k)[0]
    return complex(x), complex(y)


def numeric_orbit(w: StepWeights, start=None, max_iter: int = 500, tol: float = 1e-9) -> NumericOrbit:
    """Apply y -> c(x)/(a(x) y), then x -> c~(y)/(a~(y) x), until the start point recurs.

    Points are carried as homogeneous pairs, so the orbit may pass through or
    accumulate at infinity; the return test uses the chordal distance on each axis.
    An orbit that reaches a fixed point of delta away from the start stops early
    with ``settled=True``. OrbitEscape is raised only when a map is indeterminate
    (0/0) at an iterate.
    """
    k = build_kernel(w)
    x0, y0 = curve_point(w) if start is None else (complex(start[0]), complex(start[1]))
    if abs(k.K(x0, y0)) > tol * max(1.0, k.K_scale(x0, y0)):
        raise ValueError("start point is not on the curve")
    status, n = _kernels.orbit(x0, y0, k.coefficient_matrix(), max_iter, tol)
    if status == _kernels.ORBIT_ESCAPED:
        raise OrbitEscape(f"delta is indeterminate at iterate {n}")
    if status == _kernels.ORBIT_RETURNED:
        return NumericOrbit(True, n, n)
    return NumericOrbit(False, None, n, settled=status == _kernels.ORBIT_FIXED)
