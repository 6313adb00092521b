import random
from fractions import Fraction as F

import pytest

from credalnet.core import Interval, Variable, conditional_bounds, lower_prob, upper_prob
from credalnet.errors import InfeasibleSpec, UnsupportedScale
from credalnet.independence import epistemically_independent
from credalnet.natext import (
    TwoVarSpec,
    conditional_interval_hrep,
    independent_natural_extension,
    independent_natural_extension_2,
)
from credalnet.network import strong_extension
from credalnet.polytope import member_of_hull
from credalnet.repro import EXAMPLE2_NATURAL, EXAMPLE2_SPEC, unconnected_network

from helpers import random_interval
from oracles import basis_vertices


def oracle_rows(ix, iy):
    """Rows lo*p(B) <= p(A and B) <= hi*p(B) over [xy, xyc, xcy, xcyc]."""
    cells = {"x": (1, 1, 0, 0), "y": (1, 0, 1, 0), "xc": (0, 0, 1, 1), "yc": (0, 1, 0, 1), "all": (1, 1, 1, 1)}
    rows = []
    for a, b, iv in [("x", "all", ix), ("y", "all", iy), ("x", "y", ix), ("x", "yc", ix),
                     ("y", "x", iy), ("y", "xc", iy)]:
        joint = [s * t for s, t in zip(cells[a], cells[b])]
        rows.append((tuple(iv.lo * e - j for j, e in zip(joint, cells[b])), "<=", 0))
        rows.append((tuple(j - iv.hi * e for j, e in zip(joint, cells[b])), "<=", 0))
    return rows


def random_spec(rng):
    return TwoVarSpec(random_interval(rng, positive=True, p_point=0.1),
                      random_interval(rng, positive=True, p_point=0.1))


def test_example2_vertices():
    assert independent_natural_extension_2(EXAMPLE2_SPEC).points == EXAMPLE2_NATURAL


def test_point_intervals_give_product():
    K = independent_natural_extension_2(TwoVarSpec((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2))))
    assert K.points == [(F(1, 4),) * 4]


def test_twelve_rows():
    assert len(conditional_interval_hrep(EXAMPLE2_SPEC).rows) == 12


def test_random_vs_oracle():
    rng = random.Random(1)
    for _ in range(10):
        spec = random_spec(rng)
        want = basis_vertices(4, oracle_rows(spec.x_interval, spec.y_interval))
        assert independent_natural_extension_2(spec).points == want


def test_random_properties():
    rng = random.Random(2)
    for _ in range(30):
        spec = random_spec(rng)
        K = independent_natural_extension_2(spec)
        ix, iy = spec.x_interval, spec.y_interval
        assert (lower_prob(K, {"X": "x"}), upper_prob(K, {"X": "x"})) == (ix.lo, ix.hi)
        assert (lower_prob(K, {"Y": "y"}), upper_prob(K, {"Y": "y"})) == (iy.lo, iy.hi)
        for given in ({"Y": "y"}, {"Y": "yc"}):
            lo, hi = conditional_bounds(K, {"X": "x"}, given)
            assert ix.lo <= lo and hi <= ix.hi
        assert epistemically_independent(K, ["X"], ["Y"])
        S = strong_extension(unconnected_network([ix, iy]))
        assert all(member_of_hull(p, K.points) for p in S.points)


def test_rejects_bad_intervals():
    with pytest.raises(InfeasibleSpec):
        TwoVarSpec((F(1, 2), F(1, 3)), (F(0), F(1)))
    with pytest.raises(InfeasibleSpec):
        TwoVarSpec("bad", (F(0), F(1)))


def test_unsupported_scale():
    T = Variable("T", ("t0", "t1", "t2"))
    B = Variable("B", ("b", "bc"))
    with pytest.raises(UnsupportedScale):
        independent_natural_extension([T, B], [(0, 1), (0, 1)])
    with pytest.raises(UnsupportedScale):
        independent_natural_extension([B], [(0, 1)])


def test_general_entry_renames_scope():
    A = Variable("A", ("a", "ac"))
    B = Variable("B", ("b", "bc"))
    K = independent_natural_extension([A, B], [Interval(F(2, 5), F(1, 2))] * 2)
    assert K.names == ("A", "B") and K.points == EXAMPLE2_NATURAL
