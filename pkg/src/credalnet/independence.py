"""Deciders for independence relations over credal sets.

Epistemic irrelevance compares convex hulls of conditional credal sets.
Strong independence asks every extreme point to factorize.  The deciders
return an :class:`IndependenceVerdict` whose counterexample can be fed back
into the bound computations to reproduce the violation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .core import (
    CredalSet,
    Gamble,
    JointDensity,
    change_marginal,
    configurations,
    gamble_vector,
    sub_scope,
    uniform,
)
from .errors import ZeroMarginal
from .network import CredalNetwork
from .polytope import extreme_flags, member_of_hull, reduce_to_extreme, unique_sorted


@dataclass(frozen=True)
class Counterexample:
    """Where a relation fails.

    ``given`` is the conditioning configuration checked, ``extra`` the
    additional configuration whose knowledge changed the credal set (for
    irrelevance), ``target``/``bound``/``values`` a differing lower or upper
    probability when one exists, and ``witness`` a vertex or hull point
    demonstrating the failure.
    """

    given: dict
    extra: Optional[dict] = None
    target: Optional[dict] = None
    bound: Optional[str] = None
    values: Optional[tuple] = None
    witness: Optional[tuple] = None
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class IndependenceVerdict:
    holds: bool
    counterexample: Optional[Counterexample] = None
    skipped: tuple = ()
    vacuous: bool = False
    exhaustive: bool = True
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.holds == (self.counterexample is not None):
            raise ValueError("a counterexample is present exactly when the relation fails")

    def __bool__(self):
        return self.holds


def _check_sets(K, *groups, nonempty=2):
    groups = [list(g) for g in groups]
    order = {n: i for i, n in enumerate(K.names)}
    seen = set()
    for g in groups:
        for n in g:
            if n not in K.names:
                raise KeyError(f"variable {n!r} is not in scope")
            if n in seen:
                raise ValueError("variable sets must be disjoint")
            seen.add(n)
    for g in groups[:nonempty]:
        if not g:
            raise ValueError("the two related variable sets must be nonempty")
    # configurations are built in scope order, so names must follow it too
    return [sorted(g, key=order.get) for g in groups]


def _event(names, config):
    return dict(zip(names, config))


@lru_cache(maxsize=1 << 14)
def _marginal_table(scope, names, table):
    # belief-change sweeps re-test sets that differ in a single point
    return JointDensity(scope, table, check=False).marginal(names).table


class _Marginal:
    """Vertices of K marginalized onto a few variables, with event sums."""

    def __init__(self, K: CredalSet, names: Sequence[str]):
        self.scope = sub_scope(K.scope, names)
        self.names = tuple(v.name for v in self.scope)
        self.tables = unique_sorted(_marginal_table(K.scope, self.names, v.table) for v in K.vertices)
        self.configs = configurations(self.scope)
        self._cell_cache = {}

    def _cells(self, event):
        key = tuple(sorted(event.items()))
        cells = self._cell_cache.get(key)
        if cells is None:
            pos = [(self.names.index(k), v) for k, v in key]
            cells = [j for j, c in enumerate(self.configs) if all(c[i] == v for i, v in pos)]
            self._cell_cache[key] = cells
        return cells

    def mass(self, table, event):
        return sum((table[j] for j in self._cells(event)), Fraction(0))

    def conditional_points(self, xnames, event):
        """{p(X | event)} over vertices giving the event positive mass."""
        xconfs = configurations(sub_scope(self.scope, xnames))
        xpos = [self.names.index(n) for n in xnames]
        slot = {xc: k for k, xc in enumerate(xconfs)}
        cells = tuple((j, slot[tuple(self.configs[j][i] for i in xpos)]) for j in self._cells(event))
        out = []
        for t in self.tables:
            c = _conditional(t, cells, len(xconfs))
            if c is not None:
                out.append(c)
        return out


@lru_cache(maxsize=1 << 15)
def _conditional(table, cells, size):
    acc = [Fraction(0)] * size
    for j, k in cells:
        if table[j]:
            acc[k] += table[j]
    pe = sum(acc)
    return tuple(a / pe for a in acc) if pe > 0 else None


@lru_cache(maxsize=1 << 12)
def _reduced(points):
    return reduce_to_extreme(points)


def _hull_difference(A, B, xnames, xscope, given, extra):
    """Counterexample explaining why hull(A) != hull(B)."""
    xconfs = configurations(xscope)
    for k, xc in enumerate(xconfs):
        lo_a, lo_b = min(p[k] for p in A), min(p[k] for p in B)
        if lo_a != lo_b:
            return Counterexample(given, extra, _event(xnames, xc), "lower", (lo_a, lo_b),
                                  _first_outside(A, B))
        hi_a, hi_b = max(p[k] for p in A), max(p[k] for p in B)
        if hi_a != hi_b:
            return Counterexample(given, extra, _event(xnames, xc), "upper", (hi_a, hi_b),
                                  _first_outside(A, B))
    return Counterexample(given, extra, witness=_first_outside(A, B))


def _first_outside(A, B):
    for p in A:
        if not member_of_hull(p, B):
            return p
    for p in B:
        if not member_of_hull(p, A):
            return p
    return None


def epistemically_irrelevant(K: CredalSet, Y: Iterable[str], X: Iterable[str], Z: Iterable[str] = ()
                             ) -> IndependenceVerdict:
    """Is Y irrelevant to X given Z?  K(X|z) and K(X|y,z) must share a hull.

    Configurations whose conditioning event has upper probability zero are
    skipped and listed in the verdict.
    """
    Y, X, Z = _check_sets(K, Y, X, Z)
    m = _Marginal(K, X + Y + Z)
    xscope = sub_scope(m.scope, X)
    yconfs = configurations(sub_scope(m.scope, Y))
    skipped, tested = [], 0
    for zc in configurations(sub_scope(m.scope, Z)):
        z = _event(Z, zc)
        A = m.conditional_points(X, z)
        if not A:
            skipped.append(z)
            continue
        ra = _reduced(tuple(A))
        for yc in yconfs:
            y = _event(Y, yc)
            B = m.conditional_points(X, {**z, **y})
            if not B:
                skipped.append({**z, **y})
                continue
            tested += 1
            rb = _reduced(tuple(B))
            if ra != rb:
                cx = _hull_difference(ra, rb, X, xscope, z, y)
                return IndependenceVerdict(False, cx, tuple(skipped))
    return IndependenceVerdict(True, None, tuple(skipped), vacuous=tested == 0)


def epistemically_independent(K: CredalSet, X: Iterable[str], Y: Iterable[str], Z: Iterable[str] = ()
                              ) -> IndependenceVerdict:
    """Irrelevance in both directions: (X EIR Y | Z) and (Y EIR X | Z)."""
    X, Y, Z = list(X), list(Y), list(Z)
    first = epistemically_irrelevant(K, X, Y, Z)
    if not first:
        return IndependenceVerdict(False, first.counterexample, first.skipped,
                                   notes={"direction": "X irrelevant to Y"})
    second = epistemically_irrelevant(K, Y, X, Z)
    if not second:
        return IndependenceVerdict(False, second.counterexample, first.skipped + second.skipped,
                                   notes={"direction": "Y irrelevant to X"})
    return IndependenceVerdict(True, None, first.skipped + second.skipped,
                               vacuous=first.vacuous and second.vacuous)


def _factorization_failure(m: _Marginal, table, X, Y, Z):
    """First z at which p(x,y|z) != p(x|z) p(y|z), or None."""
    xconfs = configurations(sub_scope(m.scope, X))
    yconfs = configurations(sub_scope(m.scope, Y))
    for zc in configurations(sub_scope(m.scope, Z)):
        z = _event(Z, zc)
        pz = m.mass(table, z)
        if pz == 0:
            continue
        for xc in xconfs:
            x = _event(X, xc)
            pxz = m.mass(table, {**z, **x})
            for yc in yconfs:
                y = _event(Y, yc)
                if m.mass(table, {**z, **x, **y}) * pz != pxz * m.mass(table, {**z, **y}):
                    return z, x, y
    return None


def strongly_independent(K: CredalSet, X: Iterable[str], Y: Iterable[str], Z: Iterable[str] = ()
                         ) -> IndependenceVerdict:
    """Does every extreme point of K(X, Y, Z) factorize given each z?

    Marginal images of the stored vertices contain every extreme point of
    the marginal, so only non-factorizing images need an extremality test.
    """
    X, Y, Z = _check_sets(K, X, Y, Z)
    m = _Marginal(K, X + Y + Z)
    failing = [(i, f) for i, t in enumerate(m.tables) if (f := _factorization_failure(m, t, X, Y, Z))]
    if not failing:
        return IndependenceVerdict(True)
    flags = extreme_flags(m.tables, [i for i, _ in failing])
    for (i, (z, x, y)), extreme in zip(failing, flags):
        if extreme:
            cx = Counterexample(z, witness=m.tables[i], detail={"x": x, "y": y, "scope": m.names})
            return IndependenceVerdict(False, cx)
    return IndependenceVerdict(True, notes={"non_extreme_dependent_points": len(failing)})


def _interval_product(a, b):
    prods = [x * y for x in a for y in b]
    return min(prods), max(prods)


def kuznetsov_check(K: CredalSet, f: Gamble, g: Gamble, X: Iterable[str], Y: Iterable[str],
                    Z: Iterable[str] = ()) -> IndependenceVerdict:
    """Compare [E(fg|z)] with the interval product [E(f|z)] x [E(g|z)] for every z.

    ``f`` is a gamble over the variables ``X``, ``g`` over ``Y``.
    """
    X, Y, Z = _check_sets(K, X, Y, Z)
    m = _Marginal(K, X + Y + Z)
    fv = gamble_vector(sub_scope(K.scope, X), f)
    gv = gamble_vector(sub_scope(K.scope, Y), g)
    xconfs = configurations(sub_scope(K.scope, X))
    yconfs = configurations(sub_scope(K.scope, Y))
    skipped = []
    for zc in configurations(sub_scope(m.scope, Z)):
        z = _event(Z, zc)
        ef, eg, efg = [], [], []
        for t in m.tables:
            pz = m.mass(t, z)
            if pz == 0:
                continue
            joint = [[m.mass(t, {**z, **_event(X, xc), **_event(Y, yc)}) / pz for yc in yconfs] for xc in xconfs]
            ef.append(sum(fv[i] * sum(row) for i, row in enumerate(joint)))
            eg.append(sum(gv[j] * sum(joint[i][j] for i in range(len(xconfs))) for j in range(len(yconfs))))
            efg.append(sum(fv[i] * gv[j] * joint[i][j] for i in range(len(xconfs)) for j in range(len(yconfs))))
        if not efg:
            skipped.append(z)
            continue
        lhs = (min(efg), max(efg))
        rhs = _interval_product((min(ef), max(ef)), (min(eg), max(eg)))
        if lhs != rhs:
            cx = Counterexample(z, values=(lhs, rhs), detail={"f": (min(ef), max(ef)), "g": (min(eg), max(eg))})
            return IndependenceVerdict(False, cx, tuple(skipped))
    return IndependenceVerdict(True, None, tuple(skipped), vacuous=len(skipped) == len(configurations(sub_scope(m.scope, Z))))


def contraction_holds(K: CredalSet, W: Iterable[str], X: Iterable[str], Y: Iterable[str],
                      Z: Iterable[str] = ()) -> IndependenceVerdict:
    """(Y EIR X | Z) and (Y EIR W | X, Z) imply (Y EIR (W, X) | Z)?

    True vacuously when the antecedent fails; ``notes["antecedent"]``
    records which case applied.
    """
    W, X, Y, Z = _check_sets(K, W, X, Y, Z, nonempty=3)
    a1 = epistemically_irrelevant(K, Y, X, Z)
    a2 = epistemically_irrelevant(K, Y, W, X + Z) if a1 else None
    if not (a1 and a2):
        return IndependenceVerdict(True, notes={"antecedent": False})
    c = epistemically_irrelevant(K, Y, W + X, Z)
    if c:
        return IndependenceVerdict(True, notes={"antecedent": True})
    return IndependenceVerdict(False, c.counterexample, c.skipped, notes={"antecedent": True})


def markov_condition(net: CredalNetwork, K: CredalSet, notion: str = "epistemic") -> dict:
    """Per node: is it independent of its nondescendants non-parents given its parents?"""
    if notion not in ("epistemic", "strong"):
        raise ValueError("notion must be 'epistemic' or 'strong'")
    if set(K.names) != set(net.names):
        raise ValueError("credal set scope must match the network nodes")
    decide = epistemically_independent if notion == "epistemic" else strongly_independent
    out = {}
    for n in net.names:
        nd = net.dag.nondescendants_nonparents(n)
        if not nd:
            out[n] = IndependenceVerdict(True, vacuous=True)
        else:
            out[n] = decide(K, [n], list(nd), list(net.dag.parents(n)))
    return out


# ----------------------------------------------------------------------
# Belief-change probe


TINY_CONFIGURATIONS = 4


def _replacements(K: CredalSet, ynames, rng, n_random):
    """Positive replacement densities for the Y-marginal, in a fixed order.

    The uniform density first, then the strictly positive extreme points
    of K's Y-marginal, then ``n_random`` random positive rational densities.
    """
    yscope = sub_scope(K.scope, ynames)
    out = [uniform(yscope).table]
    for t in reduce_to_extreme([v.marginal(ynames).table for v in K.vertices]):
        if all(x > 0 for x in t) and t not in out:
            out.append(t)
    size = len(configurations(yscope))
    for _ in range(n_random):
        w = [rng.randint(1, 20) for _ in range(size)]
        t = tuple(Fraction(x, sum(w)) for x in w)
        if t not in out:
            out.append(t)
    return [JointDensity(yscope, t, check=False) for t in out]


def _sweep(K, ynames, q, node, nd, pa, budget):
    """Belief changes towards ``q`` on every extreme point, one at a time.

    Yields (sequence so far, verdict after the step).  The working list
    stays unreduced: only a point about to be changed must be extreme, and
    a point found non-extreme at its turn is dropped without changing the
    hull.
    """
    current = list(K.points)
    pending = list(K.points)
    seq = []
    for u in pending:
        if budget[0] <= 0:
            return
        if u not in current:
            continue
        p = JointDensity(K.scope, u, check=False)
        if p.marginal(q.names).table == q.table:
            continue
        others = [w for w in current if w != u]
        if not extreme_flags([u] + others, [0])[0]:
            current.remove(u)
            continue
        try:
            changed = change_marginal(p, ynames, q)
        except ZeroMarginal:
            continue
        budget[0] -= 1
        current = others + [changed.table]
        seq.append((u, tuple(ynames), q.table))
        state = CredalSet(K.scope, [JointDensity(K.scope, t, check=False) for t in current], reduce=False)
        yield list(seq), epistemically_independent(state, [node], nd, pa)


def strong_markov_probe(net: CredalNetwork, K: CredalSet, budget: int = 10_000, seed: int = 0
                        ) -> IndependenceVerdict:
    """Search belief-change sequences that break the epistemic Markov condition.

    For each node, each nonempty set Y of its nondescendants and each
    positive replacement density for Y, the probe changes the Y-marginal of
    the extreme points one after another and re-tests the node's epistemic
    Markov condition after every step.  When every node has at most
    ``TINY_CONFIGURATIONS`` nondescendant configurations the replacements
    are the uniform density and the positive extreme points of K's
    Y-marginal, and the search is exhaustive over that family; otherwise a
    few seeded random densities are added and a pass means only "no
    violation found".
    """
    if set(K.names) != set(net.names):
        raise ValueError("credal set scope must match the network nodes")
    rng = random.Random(seed)
    remaining = [budget]
    tiny = True
    for n in net.names:
        nondesc = net.dag.nondescendants(n)
        if nondesc and len(configurations(sub_scope(K.scope, nondesc))) > TINY_CONFIGURATIONS:
            tiny = False
    n_random = 0 if tiny else 3
    steps = 0
    # the empty sequence comes first
    for n, verdict in markov_condition(net, K, "epistemic").items():
        if not verdict:
            cx = Counterexample({}, detail={"node": n, "sequence": [], "violation": verdict.counterexample})
            return IndependenceVerdict(False, cx, notes={"steps": 0})
    for n in net.names:
        nd = list(net.dag.nondescendants_nonparents(n))
        if not nd:
            continue
        pa = list(net.dag.parents(n))
        nondesc = list(net.dag.nondescendants(n))
        # the full nondescendant set first
        targets = [nondesc] + [list(c) for r in range(len(nondesc) - 1, 0, -1) for c in combinations(nondesc, r)]
        for ynames in targets:
            for q in _replacements(K, ynames, rng, n_random):
                for seq, verdict in _sweep(K, ynames, q, n, nd, pa, remaining):
                    steps += 1
                    if not verdict:
                        cx = Counterexample({}, witness=None, detail={
                            "node": n, "sequence": seq, "violation": verdict.counterexample})
                        return IndependenceVerdict(False, cx, notes={"steps": steps})
                if remaining[0] <= 0:
                    return IndependenceVerdict(True, exhaustive=False,
                                               notes={"steps": steps, "result": "no violation within budget"})
    return IndependenceVerdict(True, exhaustive=tiny,
                               notes={"steps": steps,
                                      "result": "no violation" if tiny else "no violation found"})
