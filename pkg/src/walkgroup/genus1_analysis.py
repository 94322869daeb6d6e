"""Elliptic periods, the Weierstrass function and the genus-1 uniformization.

The uniformization x(w), z(w) in terms of wp(w) - D''(x4)/6 traces dw = -dx/(2z),
so the lattice of the parametrization is generated by half the periods
omega1/2 and omega2/2. ``uniformize`` therefore builds its Weierstrass
function on that half lattice, and the group element delta acts as the shift
w -> w + omega3/2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from . import _poly as P
from .errors import DivisionNearZero, PoleAtLatticePoint, QuadratureFailure, WrongGenus
from .finiteness_criterion import (
    CF_WINDOW,
    DEFAULT_MAX_DENOMINATOR,
    GroupOrderResult,
    ProofPath,
    Verdict,
    detect_rational,
    finite,
    order_from_ratio,
)
from .kernel_algebra import (
    INFINITY,
    BranchPoints,
    GenusClass,
    KernelData,
    X_at_branch_point,
    branch_X,
    branch_points,
    genus_classify,
    moebius_coord,
)
from .quadrature import inv_sqrt_integral


@dataclass(frozen=True)
class Periods:
    omega1: complex
    omega2: float
    omega3: float
    errors: tuple

    @property
    def ratio(self) -> float:
        return self.omega3 / self.omega2


def _real_roots(bp: BranchPoints) -> list:
    out = []
    for r in bp.x_roots:
        if r is INFINITY:
            out.append(INFINITY)
            continue
        if abs(complex(r).imag) > 1e-10 * max(1.0, abs(r)):
            raise WrongGenus("branch points are not real")
        out.append(float(complex(r).real))
    return out


def periods(k: KernelData, bp: BranchPoints | None = None, tol: float = 1e-12) -> Periods:
    """omega1 = 2i int_{x1}^{x2} dx/sqrt(-D), omega2 = 2 int_{x2}^{x3}, omega3 = 2 int_{X(y1)}^{x1}."""
    if genus_classify(k.weights, k) is not GenusClass.Genus1:
        raise WrongGenus("periods need a genus-1 walk")
    bp = branch_points(k) if bp is None else bp
    x1, x2, x3, x4 = _real_roots(bp)
    if x3 is INFINITY or not (x1 < x2 < x3):
        raise WrongGenus("expected x1 < x2 < x3 finite")
    D = P.trim(k.f["D"])
    lc = D[-1]
    finite_roots = [r for r in (x1, x2, x3, x4) if r is not INFINITY]
    r1 = inv_sqrt_integral(x1, x2, lc, [r for r in finite_roots if r not in (x1, x2)], tol=tol)
    r2 = inv_sqrt_integral(x2, x3, lc, [r for r in finite_roots if r not in (x2, x3)], tol=tol)
    # the arc from X(y1) to x1 avoids (x2, x3); v = 1/(c - x) with c in (x2, x3) keeps it finite
    c = 0.5 * (x2 + x3)
    Dc = P.evaluate(D, c)
    v = [moebius_coord(r, c).real for r in (x1, x2, x3, x4)]
    X = X_at_branch_point(float(np.real(bp.y_roots[0])), k)
    vX = moebius_coord(X, c).real
    if not vX < v[0]:
        raise QuadratureFailure("X(y1) does not lie on the arc ending at x1")
    r3 = inv_sqrt_integral(vX, v[0], Dc, v[1:], a_is_root=False, b_is_root=True, tol=tol)
    return Periods(2j * r1.value, 2 * r2.value, 2 * r3.value, (2 * r1.error, 2 * r2.error, 2 * r3.error))


def group_order_genus1(p: Periods, max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> GroupOrderResult:
    """Order 2 inf{l : l omega3/omega2 in Z}, detected by continued fractions."""
    r = detect_rational(p.ratio, max_denominator)
    if r is None:
        return GroupOrderResult(Verdict.UNDECIDED, ProofPath.NUMERIC_CF, bound=max_denominator, tolerance=CF_WINDOW)
    return finite(order_from_ratio(r), ProofPath.NUMERIC_CF, denominator=r.denominator, tolerance=CF_WINDOW)


def decide_genus1(k: KernelData, max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> GroupOrderResult:
    try:
        p = periods(k)
    except (WrongGenus, QuadratureFailure) as exc:
        return GroupOrderResult(
            Verdict.UNDECIDED, ProofPath.NUMERIC_CF, bound=max_denominator, reason=f"periods unavailable: {exc}"
        )
    res = group_order_genus1(p, max_denominator)
    res.details["omega_ratio"] = p.ratio
    return res


# -- Weierstrass function -----------------------------------------------------

@dataclass(frozen=True)
class WeierstrassParams:
    """Lattice generated by omega_a and omega_b (not collinear)."""

    omega_a: complex
    omega_b: complex
    tail_tol: float = 1e-17

    def __post_init__(self):
        if abs((complex(self.omega_b) / complex(self.omega_a)).imag) < 1e-12:
            raise ValueError("lattice generators are collinear")

    @property
    def reduced(self) -> tuple[complex, complex]:
        """Basis (w, w tau) with tau in the standard fundamental domain."""
        wa, wb = complex(self.omega_a), complex(self.omega_b)
        if (wb / wa).imag < 0:
            wb = -wb
        for _ in range(100):
            tau = wb / wa
            n = round(tau.real)
            wb -= n * wa
            tau = wb / wa
            if abs(tau) < 1 - 1e-15:
                wa, wb = wb, -wa
                continue
            break
        return wa, wb

    @property
    def nterms(self) -> int:
        """Truncation radius of the csc^2 sum for the tail bound ``tail_tol``."""
        wa, wb = self.reduced
        h = (wb / wa).imag
        r = math.exp(-2 * math.pi * h)
        pref = 8 / (1 - math.exp(-math.pi * h)) ** 2 / (1 - r)
        n = 1
        while pref * math.exp(-2 * math.pi * (n + 0.5) * h) > self.tail_tol:
            n += 1
        return n


def _e_series(q: complex, weights) -> complex:
    total = 0j
    k = 1
    while True:
        qk = q**k
        term = weights(k) * qk / (1 - qk)
        total += term
        if abs(qk) * k**6 < 1e-20 or k > 200:
            return total
        k += 1


def _eisenstein(tau: complex) -> tuple[complex, complex, complex]:
    q = cmath.exp(2j * math.pi * tau)
    e2 = 1 - 24 * _e_series(q, lambda k: k)
    e4 = 1 + 240 * _e_series(q, lambda k: k**3)
    e6 = 1 - 504 * _e_series(q, lambda k: k**5)
    return e2, e4, e6


def wp_and_derivative(params: WeierstrassParams, z) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized wp(z) and wp'(z) for the lattice of ``params``."""
    wa, wb = params.reduced
    tau = wb / wa
    w = np.atleast_1d(np.asarray(z, dtype=np.complex128)) / wa
    m = np.round(w.imag / tau.imag)
    w = w - m * tau
    w = w - np.round(w.real)
    if np.any(np.abs(w) < 1e-14):
        raise PoleAtLatticePoint("argument is a lattice point")
    e2, _, _ = _eisenstein(tau)
    s, sd = _kernels.lattice_sums(w, tau, params.nterms)
    c = (math.pi / wa) ** 2
    return c * (s - e2 / 3), c * (-2 * math.pi / wa) * sd


def wp_eval(params: WeierstrassParams, omega: complex) -> complex:
    return complex(wp_and_derivative(params, [omega])[0][0])


def invariants(params: WeierstrassParams) -> tuple[complex, complex]:
    """(g2, g3) of the lattice through Eisenstein series."""
    wa, wb = params.reduced
    _, e4, e6 = _eisenstein(wb / wa)
    g2 = (4 * math.pi**4 / 3) * e4 / wa**4
    g3 = (8 * math.pi**6 / 27) * e6 / wa**6
    return g2, g3


def quartic_invariants(D) -> tuple[float, float]:
    """Invariants g2, g3 of the binary quartic with coefficients d0..d4."""
    d0, d1, d2, d3, d4 = (float(c) for c in D)
    g2 = d4 * d0 - d3 * d1 / 4 + d2 * d2 / 12
    g3 = d4 * d2 * d0 / 6 + d3 * d2 * d1 / 48 - d2**3 / 216 - d4 * d1 * d1 / 16 - d3 * d3 * d0 / 16
    return g2, g3


# -- uniformization ---------------------------------------------------------

class Uniformization:
    """Curve point (x(w), y(w)) of a genus-1 kernel."""

    def __init__(self, k: KernelData, bp: BranchPoints | None = None, per: Periods | None = None):
        self.k = k
        self.bp = branch_points(k) if bp is None else bp
        self.periods = periods(k, self.bp) if per is None else per
        self.lattice = WeierstrassParams(self.periods.omega1 / 2, self.periods.omega2 / 2)
        D = k.f["D"]
        self.x4 = self.bp.x_roots[3]
        if self.x4 is INFINITY:
            self.d2, self.d3 = D[2], D[3]
            self.dp4 = None
        else:
            x4 = float(np.real(self.x4))
            self.dp4 = P.evaluate(P.deriv(D), x4)
            self.dpp4 = P.evaluate(P.deriv(P.deriv(D)), x4)
            if self.dp4 <= 0:
                raise WrongGenus("expected D'(x4) > 0")

    def xz(self, omega):
        W, Wd = wp_and_derivative(self.lattice, omega)
        if self.x4 is INFINITY:
            return (W - self.d2 / 3) / self.d3, -Wd / (2 * self.d3)
        x4 = float(np.real(self.x4))
        den = W - self.dpp4 / 6
        return x4 + self.dp4 / den, self.dp4 * Wd / (2 * den * den)

    def point(self, omega) -> tuple[np.ndarray, np.ndarray]:
        x, z = self.xz(omega)
        fa, fb = self.k.f["a"], self.k.f["b"]
        ax = P.evaluate(fa, x)
        scale = max(abs(c) for c in fa)
        if np.any(np.abs(ax) <= 1e-12 * scale * np.maximum(1.0, np.abs(x)) ** 2):
            raise DivisionNearZero("a(x(w)) vanishes")
        y = (z - P.evaluate(fb, x)) / (2 * ax)
        return x, y


def uniformize(k: KernelData, bp: BranchPoints | None, omega: complex) -> tuple[complex, complex]:
    x, y = Uniformization(k, bp).point([omega])
    return complex(x[0]), complex(y[0])


def delta_shift_residual(u: Uniformization, omega: complex) -> float:
    """Distance between delta = eta o xi applied to the point at w and the point at w + omega3/2."""
    k = u.k
    x, y = (complex(v[0]) for v in u.point([omega]))
    fa, fc, fat, fct = k.f["a"], k.f["c"], k.f["at"], k.f["ct"]
    y2 = P.evaluate(fc, x) / (P.evaluate(fa, x) * y)
    x2 = P.evaluate(fct, y2) / (P.evaluate(fat, y2) * x)
    xs, ys = (complex(v[0]) for v in u.point([omega + u.periods.omega3 / 2]))
    return (abs(x2 - xs) + abs(y2 - ys)) / (1 + abs(xs) + abs(ys))


# -- the gluing function spot check ------------------------------------------

def _inverse_wp(params: WeierstrassParams, value: complex, grid: int = 6) -> list[complex]:
    wa, wb = params.reduced
    s = (np.arange(grid) + 0.5) / grid
    z = (s[:, None] * wa + s[None, :] * wb).ravel()
    for _ in range(80):
        W, Wd = wp_and_derivative(params, z)
        step = (W - value) / Wd
        z = z - step
        if np.all(np.abs(step) < 1e-14 * (abs(wa) + abs(wb))):
            break
    W, _ = wp_and_derivative(params, z)
    ok = np.abs(W - value) <= 1e-9 * max(1.0, abs(value))
    return list(z[ok])


@dataclass(frozen=True)
class GluingCheck:
    max_imag: float
    max_conj_gap: float
    n_points: int


def genus1_cgf_gluing(k: KernelData, n_points: int = 10, bp: BranchPoints | None = None) -> GluingCheck:
    """Evaluate w(t) = wp_{1,3}(wp_{1,2}^{-1}(f(t)) - omega2/4) on M1 and measure its imaginary part.

    Lattices are the half-period lattices used by the uniformization.
    """
    u = Uniformization(k, bp)
    per = u.periods
    lat2 = u.lattice
    lat3 = WeierstrassParams(per.omega1 / 2, per.omega3 / 2)
    y1, y2 = float(np.real(u.bp.y_roots[0])), float(np.real(u.bp.y_roots[1]))
    ys = y1 + (y2 - y1) * (np.arange(n_points) + 0.5) / n_points
    x4 = float(np.real(u.x4))
    worst_im = worst_gap = 0.0
    for yv in ys:
        t = min((r for r in branch_X(yv, k) if r is not INFINITY), key=abs)
        vals = []
        for tt in (t, t.conjugate()):
            f = u.dpp4 / 6 + u.dp4 / (tt - x4)
            roots = _inverse_wp(lat2, f)
            if not roots:
                raise QuadratureFailure("could not invert the Weierstrass function")
            # the gluing branch takes the preimage with real part in [0, omega2/2)
            half = per.omega2 / 2
            u0 = complex(roots[0].real % half, roots[0].imag)
            w, _ = wp_and_derivative(lat3, np.array([u0 - per.omega2 / 4]))
            vals.append(complex(w[0]))
        worst_im = max(worst_im, abs(vals[0].imag) / abs(vals[0]))
        worst_gap = max(worst_gap, abs(vals[0] - vals[1]) / abs(vals[0]))
    return GluingCheck(worst_im, worst_gap, n_points)
