"""Named walks with known group orders, and seeded random walk generators."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .errors import DegenerateCorrelation, DegenerateVariance, InvalidWeights
from .kernel_algebra import GenusClass, build_kernel, genus_classify, is_singular
from .walk_model import HP, StepWeights, angle_theta, moments

F = Fraction


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    weights: StepWeights
    expected_order: Optional[int]  # None means an infinite group
    note: str
    genus: GenusClass

    @property
    def expected_label(self) -> str:
        return "ProvenInfinite" if self.expected_order is None else f"Finite({self.expected_order})"


def _w(mapping, exact=True) -> StepWeights:
    return StepWeights.from_mapping(mapping, exact)


SIMPLE = _w({(1, 0): F(1, 4), (-1, 0): F(1, 4), (0, 1): F(1, 4), (0, -1): F(1, 4)})
GESSEL = _w({(1, 0): F(1, 4), (1, 1): F(1, 4), (-1, 0): F(1, 4), (-1, -1): F(1, 4)})
KREWERAS = _w({(-1, 0): F(1, 3), (0, -1): F(1, 3), (1, 1): F(1, 3)})
R_ONE_THIRD = _w({
    (1, 0): F(1, 5), (-1, 0): F(1, 5), (0, 1): F(1, 5), (0, -1): F(1, 5),
    (1, 1): F(1, 10), (-1, -1): F(1, 10),
})
DELTA0_GENUS1 = _w({(1, 0): F(3, 10), (0, 1): F(3, 10), (-1, 0): F(1, 5), (0, -1): F(1, 5)})

# For each zero pattern, the five non-idle steps it leaves allowed.
_CASE_STEPS = {
    2: [(1, 1), (1, 0), (1, -1), (0, -1), (-1, -1)],
    3: [(1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1)],
    4: [(1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)],
    5: [(1, 1), (1, 0), (1, -1), (0, 1), (-1, 1)],
}


def case_exemplar(case: int) -> StepWeights:
    """Uniform weight 1/5 on the steps allowed by zero pattern ``case`` (2..5)."""
    if case not in _CASE_STEPS:
        raise KeyError(f"no zero pattern numbered {case}")
    return _w({ij: F(1, 5) for ij in _CASE_STEPS[case]})


def krsp4(n: int) -> StepWeights:
    """p(1,0) = p(-1,0) = s/2, p(-1,1) = p(1,-1) = 1/2 - s/2 with s = sin^2(pi/n); group order 2n."""
    if n < 3:
        raise InvalidWeights("the family is defined for n >= 3")
    s = HP.sin(HP.pi / n) ** 2
    h = HP.mpf(1) / 2
    return _w({(1, 0): s / 2, (-1, 0): s / 2, (-1, 1): h - s / 2, (1, -1): h - s / 2}, exact=False)


def _entry(name, w, order, note) -> CatalogEntry:
    return CatalogEntry(name, w, order, note, genus_classify(w))


def entries(n: int = 5) -> dict[str, CatalogEntry]:
    """All named walks; ``n`` selects the member of the krsp4 family."""
    out = [
        _entry("simple", SIMPLE, 4, "the determinant test vanishes"),
        _entry("gessel", GESSEL, 8, "theta/pi = 3/4"),
        _entry("kreweras", KREWERAS, 6, "cos(theta) = -1/2"),
        _entry("krsp4", krsp4(n), 2 * n, f"theta = pi/{n}"),
        _entry("r13", R_ONE_THIRD, None, "cos(theta) = -1/3 is not a rational angle"),
        _entry("delta0-genus1", DELTA0_GENUS1, 4, "nonzero drift, vanishing determinant"),
    ]
    for c in (2, 3, 4, 5):
        out.append(_entry(f"case{c}", case_exemplar(c), None, "nonzero drift with a genus-0 zero pattern"))
    return {e.name: e for e in out}


CATALOG_NAMES = ("simple", "gessel", "kreweras", "krsp4", "r13", "delta0-genus1", "case2", "case3", "case4", "case5")


def get(name: str, n: int = 5) -> CatalogEntry:
    cat = entries(n)
    if name not in cat:
        raise KeyError(f"unknown catalog walk {name!r}; known: {', '.join(CATALOG_NAMES)}")
    return cat[name]


# -- random walks ---------------------------------------------------------------

_FREE = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 0), (1, -1), (1, 1)]


def _usable(w: StepWeights) -> bool:
    if is_singular(build_kernel(w)):
        return False
    try:
        angle_theta(moments(w))
    except (DegenerateVariance, DegenerateCorrelation):
        return False
    return True


def _random_walk(rng: random.Random, grid: int, mixed_zero: bool) -> StepWeights:
    while True:
        k = {ij: rng.randint(0, grid) for ij in _FREE}
        if mixed_zero:
            # sum of i*j*k over the steps vanishes
            k[(1, 1)] = k[(1, -1)] + k[(-1, 1)] - k[(-1, -1)]
        # both drifts vanish
        k[(1, 0)] = k[(-1, -1)] + k[(-1, 0)] + k[(-1, 1)] - k[(1, 1)] - k[(1, -1)]
        k[(0, 1)] = k[(-1, -1)] + k[(0, -1)] + k[(1, -1)] - k[(1, 1)] - k[(-1, 1)]
        if min(k.values()) < 0:
            continue
        total = sum(k.values())
        if total == k[(0, 0)]:
            continue
        w = _w({ij: F(v, total) for ij, v in k.items() if v})
        if _usable(w):
            return w


def random_zero_drift(seed: int, grid: int = 6) -> StepWeights:
    """Rational zero-drift walk with integer counts in [0, grid] before normalization."""
    return _random_walk(random.Random(seed), grid, mixed_zero=False)


def random_delta0(seed: int, grid: int = 6) -> StepWeights:
    """Rational zero-drift walk whose mixed moment, hence the determinant, vanishes."""
    return _random_walk(random.Random(seed), grid, mixed_zero=True)


def random_walks(seed: int, count: int, grid: int = 6, kind: str = "zero-drift") -> list[StepWeights]:
    gen: Callable[[int, int], StepWeights] = random_zero_drift if kind == "zero-drift" else random_delta0
    rng = random.Random(seed)
    return [gen(rng.randrange(2**32), grid) for _ in range(count)]
