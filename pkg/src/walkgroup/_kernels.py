"""Hot numeric loops with a numba backend and a pure-numpy fallback.

The numba versions are used when numba imports cleanly and the environment
variable ``WALKGROUP_DISABLE_NUMBA`` is unset or ``0``. Both backends are kept
importable through :func:`get_backend` so tests and benchmarks can compare them.
"""

from __future__ import annotations

import cmath
import math
import os
from types import SimpleNamespace

import numpy as np

ORBIT_RETURNED, ORBIT_NO_RETURN, ORBIT_ESCAPED, ORBIT_FIXED = 0, 1, 2, 3


# -- loop versions (compiled by numba when available) -----------------------

def _csc2_cot(z):
    # csc^2(pi z) and cot(pi z) through a decaying exponential, stable for large |Im z|
    if z.imag >= 0:
        p = cmath.exp(2j * math.pi * z)
        cot = -1j * (1 + p) / (1 - p)
    else:
        p = cmath.exp(-2j * math.pi * z)
        cot = 1j * (1 + p) / (1 - p)
    return -4 * p / ((1 - p) * (1 - p)), cot


def _lattice_sums_loop(w, tau, nterms):
    s = np.zeros(w.shape[0], dtype=np.complex128)
    sd = np.zeros(w.shape[0], dtype=np.complex128)
    for k in range(w.shape[0]):
        acc = 0j
        accd = 0j
        for n in range(-nterms, nterms + 1):
            c2, ct = _csc2_cot(w[k] + n * tau)
            acc += c2
            accd += c2 * ct
        s[k] = acc
        sd[k] = accd
    return s, sd


def _tanh_sinh_loop(a, b, lc, others, ea, eb, h, tmax):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    nmax = int(tmax / h)
    total = 0.0
    for k in range(-nmax, nmax + 1):
        t = k * h
        u = 0.5 * math.pi * math.sinh(t)
        ch = math.cosh(u)
        wgt = 0.5 * math.pi * math.cosh(t) / (ch * ch)
        da = half * math.exp(u) / ch
        db = half * math.exp(-u) / ch
        if da == 0.0 or db == 0.0:
            continue
        x = mid + half * math.tanh(u)
        prod = abs(lc)
        if ea:
            prod *= da
        if eb:
            prod *= db
        for r in others:
            prod *= abs(x - r)
        if prod == 0.0:
            continue
        total += wgt / math.sqrt(prod)
    return total * half * h


def _hom3(c0, c1, c2, X, Z):
    return c0 * Z * Z + c1 * X * Z + c2 * X * X


def _chordal(X, Z, X0, Z0):
    n = math.sqrt((abs(X) ** 2 + abs(Z) ** 2) * (abs(X0) ** 2 + abs(Z0) ** 2))
    return abs(X * Z0 - X0 * Z) / n


def _involution(P, Q, S, T, row):
    # other root of the quadratic in the second point [S:T] over the first point [P:Q],
    # by whichever of the two Vieta forms is better scaled there
    a = _hom3(row[0, 0], row[0, 1], row[0, 2], P, Q)
    b = _hom3(row[1, 0], row[1, 1], row[1, 2], P, Q)
    c = _hom3(row[2, 0], row[2, 1], row[2, 2], P, Q)
    n1, d1 = c * T, a * S
    n2, d2 = -S * a - T * b, T * a
    m1 = max(abs(n1), abs(d1))
    m2 = max(abs(n2), abs(d2))
    if m2 > m1:
        n1, d1, m1 = n2, d2, m2
    if not (m1 > 0.0 and m1 < math.inf):
        return n1, d1, False
    return n1 / m1, d1 / m1, True


def _orbit_loop(x0, y0, coefs, max_iter, tol):
    # coefs rows: a, b, c, a~, b~, c~ (ascending, length 3); points are kept as
    # unit-scaled homogeneous pairs so the orbit may pass through infinity
    # an iterate that delta leaves in place (within tol) away from the start is a
    # fixed point the orbit has settled on, so it can no longer return
    X, Z = x0, 1.0 + 0j
    V, W = y0, 1.0 + 0j
    for n in range(1, max_iter + 1):
        X1, Z1, V1, W1 = X, Z, V, W
        V, W, ok = _involution(X, Z, V, W, coefs[0:3])
        if not ok:
            return ORBIT_ESCAPED, n
        X, Z, ok = _involution(V, W, X, Z, coefs[3:6])
        if not ok:
            return ORBIT_ESCAPED, n
        if _chordal(X, Z, x0, 1.0 + 0j) <= tol and _chordal(V, W, y0, 1.0 + 0j) <= tol:
            return ORBIT_RETURNED, n
        if _chordal(X, Z, X1, Z1) <= tol and _chordal(V, W, V1, W1) <= tol:
            return ORBIT_FIXED, n
    return ORBIT_NO_RETURN, max_iter


def _newton_loop(coefs, roots, iters):
    out = roots.copy()
    n = coefs.shape[0]
    for k in range(out.shape[0]):
        z = out[k]
        for _ in range(iters):
            p = coefs[n - 1]
            dp = 0j
            for m in range(n - 2, -1, -1):
                dp = dp * z + p
                p = p * z + coefs[m]
            if dp == 0:
                break
            step = p / dp
            z = z - step
            if abs(step) <= 1e-17 * max(1.0, abs(z)):
                break
        out[k] = z
    return out


# -- numpy versions ---------------------------------------------------------

def _lattice_sums_np(w, tau, nterms):
    n = np.arange(-nterms, nterms + 1)
    z = w[:, None] + n[None, :] * tau
    up = z.imag >= 0
    p = np.where(up, np.exp(2j * np.pi * z), np.exp(-2j * np.pi * z))
    cot = np.where(up, -1j, 1j) * (1 + p) / (1 - p)
    c2 = -4 * p / (1 - p) ** 2
    return c2.sum(axis=1), (c2 * cot).sum(axis=1)


def _tanh_sinh_np(a, b, lc, others, ea, eb, h, tmax):
    half = 0.5 * (b - a)
    nmax = int(tmax / h)
    t = np.arange(-nmax, nmax + 1) * h
    u = 0.5 * np.pi * np.sinh(t)
    ch = np.cosh(u)
    wgt = 0.5 * np.pi * np.cosh(t) / ch ** 2
    da = half * np.exp(u) / ch
    db = half * np.exp(-u) / ch
    x = 0.5 * (a + b) + half * np.tanh(u)
    prod = np.full(t.shape, abs(lc))
    if ea:
        prod = prod * da
    if eb:
        prod = prod * db
    for r in others:
        prod = prod * np.abs(x - r)
    ok = (da > 0) & (db > 0) & (prod > 0)
    return float(np.sum(wgt[ok] / np.sqrt(prod[ok])) * half * h)


def _orbit_np(x0, y0, coefs, max_iter, tol):
    with np.errstate(all="ignore"):
        return _orbit_loop(complex(x0), complex(y0), np.asarray(coefs), max_iter, tol)


def _newton_np(coefs, roots, iters):
    c = coefs[::-1]
    dc = np.polyder(c)
    z = roots.astype(np.complex128).copy()
    for _ in range(iters):
        d = np.polyval(dc, z)
        step = np.where(d != 0, np.polyval(c, z) / np.where(d != 0, d, 1), 0)
        z = z - step
        if np.all(np.abs(step) <= 1e-17 * np.maximum(1.0, np.abs(z))):
            break
    return z


_NUMPY = SimpleNamespace(
    name="numpy",
    lattice_sums=_lattice_sums_np,
    tanh_sinh=_tanh_sinh_np,
    orbit=_orbit_np,
    newton=_newton_np,
)
_NUMBA = None


def _build_numba():
    import numba

    jit = numba.njit(cache=True)
    g = dict(globals())

    def rebind(fn):
        # compile the loop with the jitted helpers visible under the same names
        f = type(fn)(fn.__code__, g, fn.__name__, fn.__defaults__, fn.__closure__)
        return jit(f)

    g.update(_csc2_cot=jit(_csc2_cot), _hom3=jit(_hom3), _chordal=jit(_chordal))
    g["_involution"] = rebind(_involution)

    return SimpleNamespace(
        name="numba",
        lattice_sums=rebind(_lattice_sums_loop),
        tanh_sinh=rebind(_tanh_sinh_loop),
        orbit=rebind(_orbit_loop),
        newton=rebind(_newton_loop),
    )


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def get_backend(name: str | None = None) -> SimpleNamespace:
    """Kernel namespace for ``name`` ('numba' or 'numpy'); default follows the env flag."""
    global _NUMBA
    if name is None:
        disabled = os.environ.get("WALKGROUP_DISABLE_NUMBA", "0") not in ("", "0")
        name = "numpy" if disabled or not numba_available() else "numba"
    if name == "numpy":
        return _NUMPY
    if name != "numba":
        raise ValueError(f"unknown backend {name!r}")
    if _NUMBA is None:
        _NUMBA = _build_numba()
    return _NUMBA


def lattice_sums(w, tau, nterms):
    return get_backend().lattice_sums(np.ascontiguousarray(w, dtype=np.complex128), complex(tau), int(nterms))


def tanh_sinh(a, b, lc, others, ea, eb, h, tmax):
    return get_backend().tanh_sinh(
        float(a), float(b), float(lc), np.ascontiguousarray(others, dtype=np.float64), bool(ea), bool(eb), float(h), float(tmax)
    )


def orbit(x0, y0, coefs, max_iter, tol):
    """Floating orbit of delta from (x0, y0); returns (status, n) with chordal return test."""
    status, n = get_backend().orbit(
        complex(x0), complex(y0), np.ascontiguousarray(coefs, dtype=np.complex128), int(max_iter), float(tol)
    )
    return int(status), int(n)


def newton(coefs, roots, iters=50):
    return get_backend().newton(
        np.ascontiguousarray(coefs, dtype=np.complex128), np.ascontiguousarray(roots, dtype=np.complex128), int(iters)
    )
