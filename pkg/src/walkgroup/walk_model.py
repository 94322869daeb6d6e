"""Jump weights of a small-step quarter-plane walk and their moments.

Weights live on the 3x3 grid of steps (i, j) with i, j in {-1, 0, 1}.
Rational weights are kept as ``Fraction``; irrational families are kept as
high-precision ``mpmath`` reals and flagged ``exact=False``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Union

import mpmath
from sympy.ntheory.factor_ import core

from .errors import DegenerateCorrelation, DegenerateVariance, InvalidWeights, ParseError

# Working precision for inexact weight families (bits).
HP = mpmath.MPContext()
HP.prec = 200

Number = Union[Fraction, "mpmath.mpf"]

STEPS: tuple[tuple[int, int], ...] = tuple((i, j) for i in (-1, 0, 1) for j in (-1, 0, 1))
_INDEX = {ij: k for k, ij in enumerate(STEPS)}
INEXACT_SUM_TOL = 1e-12

# The eight symmetries of the square acting on a step (i, j).
SYMMETRIES: dict[str, Callable[[int, int], tuple[int, int]]] = {
    "id": lambda i, j: (i, j),
    "swap": lambda i, j: (j, i),
    "flip_x": lambda i, j: (-i, j),
    "flip_y": lambda i, j: (i, -j),
    "rot180": lambda i, j: (-i, -j),
    "rot90": lambda i, j: (-j, i),
    "rot270": lambda i, j: (j, -i),
    "antiswap": lambda i, j: (-j, -i),
}


def _to_exact(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise InvalidWeights("float weights are ambiguous; pass Fraction or a 'num/den' string")
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot read weight {value!r}") from exc


def _to_inexact(value):
    if isinstance(value, Fraction):
        return HP.mpf(value.numerator) / value.denominator
    try:
        return HP.mpf(value if not isinstance(value, str) else value.strip())
    except (ValueError, TypeError) as exc:
        raise ParseError(f"cannot read weight {value!r}") from exc


def mpf_to_fraction(x) -> Fraction:
    """Exact rational value of a binary floating-point mpf."""
    man, exp = HP.mpf(x).man_exp
    return Fraction(man) * (Fraction(2) ** exp)


@dataclass(frozen=True)
class StepWeights:
    """Probabilities p[i, j] of the nine steps, including the idle step (0, 0)."""

    grid: tuple
    exact: bool = True

    def __post_init__(self):
        if len(self.grid) != 9:
            raise InvalidWeights("expected nine weights")
        for v in self.grid:
            if v < 0:
                raise InvalidWeights(f"negative weight {v}")
        total = sum(self.grid)
        if self.exact:
            if total != 1:
                raise InvalidWeights(f"weights sum to {total}, expected 1")
        elif abs(total - 1) > INEXACT_SUM_TOL:
            raise InvalidWeights(f"weights sum to {total}, expected 1 within {INEXACT_SUM_TOL}")
        if all(v == 0 for ij, v in zip(STEPS, self.grid) if ij != (0, 0)):
            raise InvalidWeights("at least one non-idle step must have positive weight")

    @classmethod
    def from_mapping(cls, mapping: Mapping[tuple[int, int], object], exact: bool = True) -> StepWeights:
        conv = _to_exact if exact else _to_inexact
        zero = Fraction(0) if exact else HP.mpf(0)
        grid = [zero] * 9
        for ij, v in mapping.items():
            ij = tuple(ij)
            if ij not in _INDEX:
                raise InvalidWeights(f"step {ij} is not a small step")
            grid[_INDEX[ij]] = conv(v)
        return cls(tuple(grid), exact)

    def __getitem__(self, ij: tuple[int, int]):
        return self.grid[_INDEX[ij]]

    def items(self) -> Iterator[tuple[tuple[int, int], Number]]:
        return zip(STEPS, self.grid)

    def support(self) -> frozenset:
        return frozenset(ij for ij, v in self.items() if v != 0)

    def transform(self, name: str) -> StepWeights:
        """Image of the walk under one of the square symmetries in ``SYMMETRIES``."""
        f = SYMMETRIES[name]
        return StepWeights.from_mapping({f(*ij): v for ij, v in self.items()}, self.exact)

    def to_jsonable(self) -> dict:
        weights = {}
        for (i, j), v in self.items():
            if v == 0:
                continue
            weights[f"{i},{j}"] = str(v) if self.exact else HP.nstr(v, 60)
        return {"weights": weights, "exact": self.exact}

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable(), sort_keys=True)

    @classmethod
    def from_jsonable(cls, data: Mapping) -> StepWeights:
        if not isinstance(data, Mapping) or "weights" not in data:
            raise ParseError("expected an object with a 'weights' field")
        exact = bool(data.get("exact", True))
        mapping = {}
        for key, v in data["weights"].items():
            try:
                i, j = (int(s) for s in str(key).split(","))
            except ValueError as exc:
                raise ParseError(f"bad step key {key!r}") from exc
            mapping[(i, j)] = v
        return cls.from_mapping(mapping, exact)

    @classmethod
    def from_json(cls, text: str) -> StepWeights:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from exc
        return cls.from_jsonable(data)


@dataclass(frozen=True)
class Moments:
    drift_x: Number
    drift_y: Number
    var_x: Number
    var_y: Number
    mixed: Number
    R: "mpmath.mpf"
    R_squared: Number

    @property
    def zero_drift(self) -> bool:
        return self.drift_x == 0 and self.drift_y == 0


def moments(w: StepWeights) -> Moments:
    """Drift, second moments and normalized correlation of the jumps."""
    dx = sum(i * v for (i, j), v in w.items())
    dy = sum(j * v for (i, j), v in w.items())
    vx = sum(i * i * v for (i, j), v in w.items())
    vy = sum(j * j * v for (i, j), v in w.items())
    m = sum(i * j * v for (i, j), v in w.items())
    if vx == 0 or vy == 0:
        raise DegenerateVariance("walk is confined to a line")
    r2 = m * m / (vx * vy)
    if w.exact:
        R = _hp(m) / HP.sqrt(_hp(vx) * _hp(vy))
    else:
        R = m / HP.sqrt(vx * vy)
    return Moments(dx, dy, vx, vy, m, R, r2)


def _hp(x):
    if isinstance(x, Fraction):
        return HP.mpf(x.numerator) / x.denominator
    return HP.mpf(x)


@dataclass(frozen=True)
class RationalCos:
    value: Fraction


@dataclass(frozen=True)
class QuadraticCos:
    """cos(theta) = a + b*sqrt(d) with d a squarefree integer > 1."""

    a: Fraction
    b: Fraction
    d: int


@dataclass(frozen=True)
class NumericOnly:
    pass


@dataclass(frozen=True)
class AngleTheta:
    theta: float
    theta_hp: "mpmath.mpf"
    cos_theta: "mpmath.mpf"
    exact_class: Union[RationalCos, QuadraticCos, NumericOnly]

    @property
    def over_pi(self) -> "mpmath.mpf":
        return self.theta_hp / HP.pi


def _sqrt_fraction(r: Fraction) -> tuple[Fraction, int]:
    """Write sqrt(r) as k*sqrt(d) with k rational and d squarefree."""
    n = r.numerator * r.denominator
    d = int(core(n)) if n else 1
    k = Fraction(math.isqrt(n // d), r.denominator)
    return k, d


def angle_theta(m: Moments) -> AngleTheta:
    """theta = arccos(-R) together with an exact description of cos(theta) when available."""
    if abs(m.R) >= 1:
        raise DegenerateCorrelation(f"|R| = {float(abs(m.R))} >= 1")
    cos_t = -m.R
    theta_hp = HP.acos(cos_t)
    if isinstance(m.R_squared, Fraction):
        sign = -1 if m.mixed > 0 else 1
        k, d = _sqrt_fraction(m.R_squared)
        if d == 1:
            cls = RationalCos(sign * k)
        else:
            cls = QuadraticCos(Fraction(0), sign * k, d)
    else:
        cls = NumericOnly()
    return AngleTheta(float(theta_hp), theta_hp, cos_t, cls)


@dataclass(frozen=True)
class DeltaDeterminant:
    value: Number
    matrix: tuple


def delta_determinant(w: StepWeights) -> DeltaDeterminant:
    """3x3 determinant with rows (p[1,.]), (p[0,.] with centre p00-1), (p[-1,.]), columns j = 1, 0, -1."""
    rows = []
    for i in (1, 0, -1):
        rows.append(tuple(w[i, j] - (1 if (i, j) == (0, 0) else 0) for j in (1, 0, -1)))
    (a, b, c), (d, e, f), (g, h, k) = rows
    det = a * (e * k - f * h) - b * (d * k - f * g) + c * (d * h - e * g)
    return DeltaDeterminant(det, tuple(rows))
