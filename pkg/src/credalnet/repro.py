"""Reference models and reproductions of the worked examples.

Every number checked here is recomputed from the raw inputs shipped in
``data/``: the chain network ``figure1.credal`` and the three reference
densities ``table1_*.txt``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Iterator

from .core import (
    CredalSet,
    Interval,
    JointDensity,
    Variable,
    belief_change_all,
    conditional_bounds,
    format_rat,
)
from .fileformat import parse_network
from .independence import epistemically_independent, strongly_independent
from .natext import TwoVarSpec, independent_natural_extension_2
from .network import (
    CredalNetwork,
    IntervalLocal,
    LocalCredalSet,
    add_vertex,
    factorizes,
    product_density,
    restrict_vertices,
    selections,
    strong_extension,
)
from .polytope import member_of_hull

CHAIN = ("W", "X", "Y", "Z")
TABLE1_ORDER = ("Z", "Y", "X", "W")
F = Fraction


def data_text(name: str) -> str:
    return resources.files("credalnet").joinpath("data", name).read_text(encoding="utf-8")


def figure1_network() -> CredalNetwork:
    return parse_network(data_text("figure1.credal"))


def table1_density(name: str, net: CredalNetwork = None) -> JointDensity:
    """``p1``, ``p2`` or ``pstar`` as a joint over (W, X, Y, Z)."""
    net = net or figure1_network()
    lines = [ln.strip() for ln in data_text(f"table1_{name}.txt").splitlines()]
    table = [F(ln) for ln in lines if ln and not ln.startswith("#")]
    scope = [net.by_name[n] for n in TABLE1_ORDER]
    return JointDensity(scope, table).reordered(CHAIN)


Z_PAIRS = ((F(7, 10), F(1, 5)), (F(4, 5), F(1, 10)))


def in_k_prime(p: JointDensity) -> bool:
    """Does ``p`` use one of the two admitted (p(z|y), p(z|y^c)) pairs?"""
    pair = (p.conditional_prob({"Z": "z"}, {"Y": "y"}), p.conditional_prob({"Z": "z"}, {"Y": "yc"}))
    return pair in Z_PAIRS


def k_prime(net: CredalNetwork = None) -> CredalSet:
    net = net or figure1_network()
    return restrict_vertices(strong_extension(net), in_k_prime)


def k_double_prime(net: CredalNetwork = None) -> CredalSet:
    net = net or figure1_network()
    return add_vertex(k_prime(net), table1_density("pstar", net))


def matching_selections(net: CredalNetwork, p: JointDensity) -> list:
    return [s for s in selections(net) if product_density(net, s) == p]


def local_bound_report(net: CredalNetwork, p: JointDensity) -> list:
    """(node, parent configuration, value, p(value | config), inside, at endpoint) per stated interval."""
    out = []
    for n, cfg in net.local_sets():
        loc = net.locals[n]
        event = {v.name: c for v, c in zip(loc.parents, cfg)}
        value, iv = loc.entries[cfg].intervals[0]
        x = p.conditional_prob({n: value}, event)
        out.append((n, cfg, value, x, x in iv, x in (iv.lo, iv.hi)))
    return out


# ----------------------------------------------------------------------
# example2: interval marginals on two binary variables

EXAMPLE2_SPEC = TwoVarSpec(Interval(F(2, 5), F(1, 2)), Interval(F(2, 5), F(1, 2)))
EXAMPLE2_VARS = (Variable("X", ("x", "xc")), Variable("Y", ("y", "yc")))
EXAMPLE2_STRONG = [(F(1, 4),) * 4, (F(4, 25), F(6, 25), F(6, 25), F(9, 25)),
                   (F(1, 5), F(1, 5), F(3, 10), F(3, 10)), (F(1, 5), F(3, 10), F(1, 5), F(3, 10))]
EXAMPLE2_NATURAL = sorted(EXAMPLE2_STRONG + [(F(2, 9), F(2, 9), F(2, 9), F(1, 3)),
                                             (F(2, 11), F(3, 11), F(3, 11), F(3, 11))])
EXAMPLE2_CHANGED = sorted([(F(4, 25), F(6, 25), F(6, 25), F(9, 25)), (F(1, 5), F(3, 10), F(1, 5), F(3, 10)),
                           (F(1, 5), F(6, 25), F(1, 5), F(9, 25)), (F(4, 25), F(3, 10), F(6, 25), F(3, 10))])
# p(y|x) over the four changed points, from hand-computed ratios
EXAMPLE2_PY_GIVEN_X = (F(8, 23), F(5, 11))
EXAMPLE2_REFERENCE_PY_GIVEN_X = (F(2, 5), F(4, 7))


def example2_network() -> CredalNetwork:
    X, Y = EXAMPLE2_VARS
    locs = {
        v.name: LocalCredalSet(v, (), {(): IntervalLocal(((v.values[0], EXAMPLE2_SPEC.x_interval),))})
        for v in (X, Y)
    }
    return CredalNetwork(EXAMPLE2_VARS, [], locs)


def example2_changed() -> CredalSet:
    K = independent_natural_extension_2(EXAMPLE2_SPEC)
    q = JointDensity((EXAMPLE2_VARS[1],), (F(2, 5), F(3, 5)))
    return belief_change_all(K, ["Y"], q)


# ----------------------------------------------------------------------
# example3: unconnected nodes


def unconnected_network(intervals) -> CredalNetwork:
    """Binary nodes X1..Xn without edges, node j with p(first value) in ``intervals[j]``."""
    variables = [Variable(f"X{j + 1}", (f"x{j + 1}", f"x{j + 1}c")) for j in range(len(intervals))]
    locs = {v.name: LocalCredalSet(v, (), {(): IntervalLocal(((v.values[0], iv),))})
            for v, iv in zip(variables, intervals)}
    return CredalNetwork(variables, [], locs)


# ----------------------------------------------------------------------
# Check runners


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}" + (f": {self.detail}" if self.detail else "")


def _fmt_pair(pair):
    return f"[{format_rat(pair[0])}, {format_rat(pair[1])}]"


def _vertices(points):
    return "; ".join("[" + ", ".join(format_rat(x) for x in p) + "]" for p in points)


def run_example1() -> Iterator[Check]:
    net = figure1_network()
    K1 = k_prime(net)
    yield Check("K' has 64 extreme points", len(K1) == 64, str(len(K1)))
    pstar = table1_density("pstar", net)
    K2 = add_vertex(K1, pstar)
    yield Check("K'' has 65 extreme points", len(K2) == 65, str(len(K2)))
    lo_x = conditional_bounds(K2, {"Z": "z"}, {"X": "x"})[0]
    yield Check("lower p(z|x) over K'' = 8501/22707", lo_x == F(8501, 22707), format_rat(lo_x))
    lo_xw = conditional_bounds(K2, {"Z": "z"}, {"X": "x", "W": "w"})[0]
    yield Check("lower p(z|x,w) over K'' = 19/50", lo_xw == F(19, 50), format_rat(lo_xw))
    v = epistemically_independent(K2, ["W"], ["Y"], ["X"])
    yield Check("(W EIN Y | X) holds in K''", v.holds)
    v = epistemically_independent(K2, ["W", "X"], ["Z"], ["Y"])
    yield Check("((W,X) EIN Z | Y) holds in K''", v.holds)
    v = epistemically_independent(K2, ["W"], ["Z"], ["X"])
    vals = v.counterexample.values if v.counterexample else None
    yield Check("(W EIN Z | X) fails in K'' with bounds 8501/22707 vs 19/50",
                not v.holds and vals == (F(8501, 22707), F(19, 50)), _fmt_pair(vals) if vals else "holds")
    rows = local_bound_report(net, pstar)
    inside = all(r[4] for r in rows)
    attained = [f"p({r[2]}|{','.join(r[1]) or '-'})={format_rat(r[3])}" for r in rows if r[5]]
    yield Check("p* satisfies every local interval", inside, "at endpoint: " + (", ".join(attained) or "none"))


def run_table1() -> Iterator[Check]:
    net = figure1_network()
    for name in ("p1", "p2"):
        p = table1_density(name, net)
        sel = matching_selections(net, p)
        yield Check(f"{name} is the product density of an endpoint selection", len(sel) >= 1,
                    f"{len(sel)} selection(s)")
        yield Check(f"{name} lies in K'", in_k_prime(p))
    pstar = table1_density("pstar", net)
    K1 = k_prime(net)
    yield Check("p* is outside the hull of K'", not member_of_hull(pstar.table, K1.points))
    yield Check("p* does not factorize over the network", not factorizes(net, pstar))


def run_example2() -> Iterator[Check]:
    K = independent_natural_extension_2(EXAMPLE2_SPEC)
    yield Check("independent natural extension has the six listed vertices", K.points == EXAMPLE2_NATURAL,
                _vertices(K.points))
    S = strong_extension(example2_network())
    yield Check("strong extension has the four listed vertices", S.points == sorted(EXAMPLE2_STRONG),
                _vertices(S.points))
    yield Check("strong extension lies inside the natural extension",
                all(member_of_hull(p, K.points) for p in S.points))
    v = strongly_independent(K, ["X"], ["Y"])
    yield Check("natural extension is not strongly independent", not v.holds)
    C = example2_changed()
    yield Check("belief change p'(y)=2/5 leaves the four listed vertices", C.points == EXAMPLE2_CHANGED,
                _vertices(C.points))
    pyx = conditional_bounds(C, {"Y": "y"}, {"X": "x"})
    yield Check("p(y|x) after the change is [8/23, 5/11]", pyx == EXAMPLE2_PY_GIVEN_X,
                f"{_fmt_pair(pyx)}; reference value {_fmt_pair(EXAMPLE2_REFERENCE_PY_GIVEN_X)} differs")
    v = epistemically_independent(C, ["X"], ["Y"])
    yield Check("X and Y are not epistemically independent after the change", not v.holds)


def run_example3() -> Iterator[Check]:
    cases = [(Interval(F(1, 5), F(3, 10)), Interval(F(2, 5), F(1, 2))),
             (Interval(F(1, 5), F(3, 10)), Interval(F(1, 2), F(1, 2)), Interval(F(1, 10), F(3, 5)))]
    for ivs in cases:
        net = unconnected_network(ivs)
        n = len(ivs)
        raw = strong_extension(net, reduce=False)
        expected = net.selection_count()
        yield Check(f"n={n}: raw vertex count is the product of local counts", len(raw) == expected,
                    f"{len(raw)} = {expected}")
        K = strong_extension(net)
        yield Check(f"n={n}: every extreme point factorizes", all(factorizes(net, p) for p in K.vertices))
        yield Check(f"n={n}: variables are strongly independent",
                    strongly_independent(K, [net.names[0]], list(net.names[1:])).holds)


REPRODUCTIONS: dict = {
    "example1": run_example1,
    "example2": run_example2,
    "example3": run_example3,
    "table1": run_table1,
}
