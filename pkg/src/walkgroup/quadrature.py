"""Tanh-sinh quadrature for integrals of 1/sqrt(polynomial) between real roots."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import _kernels
from .errors import QuadratureFailure

T_MAX = 4.5
LEVELS = (1 / 8, 1 / 16, 1 / 32, 1 / 64, 1 / 128, 1 / 256)


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float


def inv_sqrt_integral(
    a: float,
    b: float,
    lc: float,
    other_roots: Sequence[float] = (),
    a_is_root: bool = True,
    b_is_root: bool = True,
    tol: float = 1e-12,
) -> QuadResult:
    """Integral over [a, b] of 1/sqrt(|lc| * prod |x - r|).

    The product runs over ``other_roots`` and over the endpoints flagged as roots;
    endpoint distances are formed directly from the node offsets, which keeps the
    inverse square-root singularities accurate. Requires a < b.
    """
    if not a < b:
        raise QuadratureFailure(f"empty or reversed interval [{a}, {b}]")
    prev = None
    err = float("inf")
    for h in LEVELS:
        val = _kernels.tanh_sinh(a, b, lc, list(other_roots), a_is_root, b_is_root, h, T_MAX)
        if prev is not None:
            err = abs(val - prev)
            if err <= tol * max(1.0, abs(val)):
                return QuadResult(val, err)
        prev = val
    if err <= 1e-10 * max(1.0, abs(prev)):
        return QuadResult(prev, err)
    raise QuadratureFailure(f"tanh-sinh did not settle: last change {err:.2e}")
