from fractions import Fraction as F

import pytest

from walkgroup import catalog as cat
from walkgroup.errors import InvalidWeights
from walkgroup.finiteness_criterion import decide
from walkgroup.kernel_algebra import GenusClass
from walkgroup.walk_model import moments


@pytest.mark.parametrize("name", cat.CATALOG_NAMES)
def test_entries_match_their_expected_orders(name):
    e = cat.get(name)
    assert decide(e.weights).label() == e.expected_label


@pytest.mark.parametrize("n", [3, 4, 6, 10, 17])
def test_krsp4_family(n):
    assert decide(cat.krsp4(n)).order == 2 * n
    assert cat.get("krsp4", n).expected_order == 2 * n
    with pytest.raises(InvalidWeights):
        cat.krsp4(2)


def test_unknown_name():
    with pytest.raises(KeyError):
        cat.get("nope")


def test_random_generators_are_seeded_and_constrained():
    a = cat.random_walks(42, 10)
    assert a == cat.random_walks(42, 10)
    assert a != cat.random_walks(43, 10)
    for w in a:
        m = moments(w)
        assert m.drift_x == m.drift_y == 0
        assert all(isinstance(v, F) for v in w.grid)
    for w in cat.random_walks(42, 10, kind="delta0"):
        assert moments(w).mixed == 0
        assert decide(w).label() == "Finite(4)"


def test_genus_annotations():
    es = cat.entries()
    assert es["delta0-genus1"].genus is GenusClass.Genus1
    assert es["gessel"].genus is GenusClass.Genus0ZeroDrift
    assert es["case4"].genus is GenusClass.Genus0Case4
