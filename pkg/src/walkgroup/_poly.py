"""Small dense polynomial helpers on ascending coefficient tuples.

Coefficients may be ``Fraction``, mpmath reals, floats or complex numbers; the
same code serves the exact and the inexact paths.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def trim(p: Sequence, is_zero=lambda c: c == 0) -> tuple:
    p = list(p)
    while p and is_zero(p[-1]):
        p.pop()
    return tuple(p)


def degree(p: Sequence, is_zero=lambda c: c == 0) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(trim(p, is_zero)) - 1


def add(p: Sequence, q: Sequence) -> tuple:
    n = max(len(p), len(q))
    zero = 0
    return tuple((p[k] if k < len(p) else zero) + (q[k] if k < len(q) else zero) for k in range(n))


def scale(p: Sequence, s) -> tuple:
    return tuple(s * c for c in p)


def mul(p: Sequence, q: Sequence) -> tuple:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return tuple(out)


def evaluate(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def deriv(p: Sequence) -> tuple:
    return tuple(k * p[k] for k in range(1, len(p)))


def deflate(p: Sequence, r) -> tuple[tuple, object]:
    """Divide by (x - r); returns (quotient, remainder)."""
    p = list(p)
    if len(p) < 2:
        return (), (p[0] if p else 0)
    n = len(p) - 1
    q = [0] * n
    acc = p[n]
    for k in range(n - 1, -1, -1):
        q[k] = acc
        acc = p[k] + acc * r
    return tuple(q), acc


def divmod_poly(p: Sequence, q: Sequence, is_zero=lambda c: c == 0) -> tuple[tuple, tuple]:
    p = list(trim(p, is_zero))
    q = trim(q, is_zero)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    out = [0] * max(len(p) - len(q) + 1, 1)
    while len(p) >= len(q) and p:
        f = p[-1] / q[-1]
        shift = len(p) - len(q)
        out[shift] = f
        for k, c in enumerate(q):
            p[shift + k] = p[shift + k] - f * c
        p.pop()
        p = list(trim(p, is_zero))
    return tuple(out), tuple(p)


def gcd(p: Sequence, q: Sequence, is_zero=lambda c: c == 0) -> tuple:
    """Monic greatest common divisor (Euclid); the zero polynomial if both vanish."""
    p, q = trim(p, is_zero), trim(q, is_zero)
    while q:
        _, r = divmod_poly(p, q, is_zero)
        p, q = q, r
    if not p:
        return ()
    return tuple(c / p[-1] for c in p)


def monic_square_root(p: Sequence, is_zero=lambda c: c == 0):
    """Monic g with p/lc(p) == g**2 by coefficient matching, else None.

    Only degrees up to four are needed. The zero polynomial is its own root.
    """
    p = trim(p, is_zero)
    if not p:
        return ()
    n = len(p) - 1
    if n % 2:
        return None
    e = [c / p[-1] for c in p]
    if n == 0:
        return (Fraction(1) if isinstance(e[0], Fraction) else 1,)
    if n == 2:
        s = e[1] / 2
        return (s, 1) if is_zero(s * s - e[0]) else None
    if n == 4:
        s = e[3] / 2
        t = (e[2] - s * s) / 2
        if is_zero(2 * s * t - e[1]) and is_zero(t * t - e[0]):
            return (t, s, 1)
        return None
    raise ValueError("degree above four is not supported")
