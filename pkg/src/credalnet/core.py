"""Variables, joint densities and credal sets with exact rational entries.

A credal set is stored as a finite list of densities and stands for the
convex hull of that list.  Every lower or upper quantity is a minimum or
maximum over the stored vertices, which is exact for the hull because the
quantities are linear (or linear-fractional) in the density.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence, Union

from .errors import ZeroEvidence, ZeroMarginal
from .polytope import reduce_to_extreme, same_hull, unique_sorted

Rat = Fraction
Assignment = Mapping[str, str]
Gamble = Union[Callable[[Mapping[str, str]], object], Sequence]


def parse_rat(text) -> Fraction:
    """Exact rational from ``"a/b"``, an integer or a decimal string.

    ``parse_rat("0.2") == parse_rat("1/5")``.  Floats are rejected since
    they are already rounded.
    """
    if isinstance(text, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    s = str(text).strip()
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rat(q) -> str:
    return str(Fraction(q))


@dataclass(frozen=True)
class Variable:
    name: str
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) < 2:
            raise ValueError(f"variable {self.name} needs at least two values")
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"variable {self.name} has repeated values")

    @property
    def size(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = parse_rat(self.lo), parse_rat(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not 0 <= lo <= hi <= 1:
            raise ValueError(f"invalid probability interval [{lo}, {hi}]")

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


# ----------------------------------------------------------------------
# Scope bookkeeping (cached, scopes are tuples of frozen Variables)


@lru_cache(maxsize=None)
def configurations(scope: tuple) -> tuple:
    """All configurations of ``scope`` as label tuples, first variable slowest."""
    return tuple(product(*(v.values for v in scope)))


def _names(scope) -> tuple:
    return tuple(v.name for v in scope)


@lru_cache(maxsize=None)
def _projection(scope: tuple, keep: tuple) -> tuple:
    """Index into configurations(keep) for each configuration of scope."""
    pos = [_names(scope).index(v.name) for v in keep]
    sub = {c: i for i, c in enumerate(configurations(keep))}
    return tuple(sub[tuple(c[p] for p in pos)] for c in configurations(scope))


@lru_cache(maxsize=None)
def _event_mask(scope: tuple, event: tuple) -> tuple:
    names = _names(scope)
    pos = [(names.index(k), v) for k, v in event]
    return tuple(all(c[p] == v for p, v in pos) for c in configurations(scope))


def _event_key(scope, event: Assignment) -> tuple:
    lookup = {v.name: v for v in scope}
    for k, v in event.items():
        if k not in lookup:
            raise KeyError(f"variable {k!r} is not in scope {_names(scope)}")
        if v not in lookup[k].values:
            raise ValueError(f"{v!r} is not a value of {k}")
    return tuple(sorted(event.items()))


def sub_scope(scope, names: Iterable[str]) -> tuple:
    """Variables of ``scope`` whose names are in ``names``, in scope order."""
    wanted = set(names)
    missing = wanted - set(_names(scope))
    if missing:
        raise KeyError(f"variables {sorted(missing)} are not in scope")
    return tuple(v for v in scope if v.name in wanted)


# ----------------------------------------------------------------------
# Densities


class JointDensity:
    """Probability table over an ordered tuple of variables."""

    __slots__ = ("scope", "table")

    def __init__(self, scope: Sequence[Variable], table: Sequence, check: bool = True):
        self.scope = tuple(scope)
        self.table = tuple(parse_rat(t) if not isinstance(t, Fraction) else t for t in table)
        if check:
            size = 1
            for v in self.scope:
                size *= v.size
            if len(self.table) != size:
                raise ValueError(f"table has {len(self.table)} entries, expected {size}")
            if any(t < 0 for t in self.table):
                raise ValueError("negative probability")
            if sum(self.table) != 1:
                raise ValueError(f"table sums to {sum(self.table)}, not 1")

    def __eq__(self, other):
        return isinstance(other, JointDensity) and self.scope == other.scope and self.table == other.table

    def __hash__(self):
        return hash((self.scope, self.table))

    def __repr__(self):
        return f"JointDensity({list(_names(self.scope))}, [{', '.join(map(str, self.table))}])"

    @property
    def names(self) -> tuple:
        return _names(self.scope)

    def prob(self, event: Assignment) -> Fraction:
        mask = _event_mask(self.scope, _event_key(self.scope, event))
        return sum((t for t, m in zip(self.table, mask) if m), Fraction(0))

    def marginal(self, names: Iterable[str]) -> "JointDensity":
        keep = sub_scope(self.scope, names)
        proj = _projection(self.scope, keep)
        out = [Fraction(0)] * len(configurations(keep))
        for t, j in zip(self.table, proj):
            if t:
                out[j] += t
        return JointDensity(keep, out, check=False)

    def reordered(self, names: Sequence[str]) -> "JointDensity":
        """Same density with the scope listed in the order ``names``."""
        lookup = {v.name: v for v in self.scope}
        if sorted(names) != sorted(lookup):
            raise ValueError("reordering must list every scope variable once")
        target = tuple(lookup[n] for n in names)
        proj = _projection(self.scope, target)
        out = [Fraction(0)] * len(self.table)
        for t, j in zip(self.table, proj):
            out[j] = t
        return JointDensity(target, out, check=False)

    def conditional(self, event: Assignment) -> "JointDensity":
        """p(. | event) over the full scope; raises ZeroEvidence if P(event) = 0."""
        mask = _event_mask(self.scope, _event_key(self.scope, event))
        pe = sum((t for t, m in zip(self.table, mask) if m), Fraction(0))
        if pe == 0:
            raise ZeroEvidence(f"P({dict(event)}) = 0")
        return JointDensity(self.scope, [t / pe if m else Fraction(0) for t, m in zip(self.table, mask)], check=False)

    def conditional_prob(self, target: Assignment, evidence: Assignment) -> Fraction:
        pe = self.prob(evidence)
        if pe == 0:
            raise ZeroEvidence(f"P({dict(evidence)}) = 0")
        both = dict(evidence)
        for k, v in target.items():
            if both.get(k, v) != v:
                return Fraction(0)
            both[k] = v
        return self.prob(both) / pe


def uniform(scope: Sequence[Variable]) -> JointDensity:
    scope = tuple(scope)
    n = len(configurations(scope))
    return JointDensity(scope, [Fraction(1, n)] * n)


def product_of(*densities: JointDensity) -> JointDensity:
    """Product density of factors over disjoint scopes."""
    scope = tuple(v for d in densities for v in d.scope)
    table = []
    for combo in product(*(d.table for d in densities)):
        t = Fraction(1)
        for x in combo:
            t *= x
        table.append(t)
    return JointDensity(scope, table)


def gamble_vector(scope, f: Gamble) -> tuple:
    """Values of ``f`` on every configuration of ``scope``."""
    scope = tuple(scope)
    configs = configurations(scope)
    if callable(f):
        names = _names(scope)
        return tuple(parse_rat(f(dict(zip(names, c)))) for c in configs)
    vals = tuple(parse_rat(v) for v in f)
    if len(vals) != len(configs):
        raise ValueError("gamble has the wrong length for this scope")
    return vals


def indicator(scope, event: Assignment) -> tuple:
    mask = _event_mask(tuple(scope), _event_key(tuple(scope), event))
    return tuple(Fraction(int(m)) for m in mask)


def expectation(p: JointDensity, f: Gamble) -> Fraction:
    g = gamble_vector(p.scope, f)
    return sum((a * b for a, b in zip(p.table, g) if a and b), Fraction(0))


# ----------------------------------------------------------------------
# Credal sets


class CredalSet:
    """Finite list of densities over one scope, read as its convex hull.

    On construction the list is deduplicated and sorted by table entries;
    with ``reduce=True`` (the default) non-extreme members are discarded.
    Equality between credal sets is hull equality.
    """

    __slots__ = ("scope", "vertices", "reduced")

    def __init__(self, scope: Sequence[Variable], vertices: Iterable, reduce: bool = True):
        self.scope = tuple(scope)
        tables = []
        for v in vertices:
            if isinstance(v, JointDensity):
                if v.scope != self.scope:
                    raise ValueError("vertex scope does not match credal set scope")
                tables.append(v.table)
            else:
                tables.append(JointDensity(self.scope, v).table)
        if not tables:
            raise ValueError("a credal set needs at least one vertex")
        pts = reduce_to_extreme(tables) if reduce else unique_sorted(tables)
        self.vertices = tuple(JointDensity(self.scope, t, check=False) for t in pts)
        self.reduced = reduce

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __repr__(self):
        return f"CredalSet({list(_names(self.scope))}, {len(self.vertices)} vertices)"

    __hash__ = None

    def __eq__(self, other):
        if not isinstance(other, CredalSet):
            return NotImplemented
        if self.scope != other.scope:
            return False
        return same_hull(self.points, other.points)

    @property
    def names(self) -> tuple:
        return _names(self.scope)

    @property
    def points(self) -> list:
        return [v.table for v in self.vertices]

    def canonical(self) -> "CredalSet":
        return self if self.reduced else CredalSet(self.scope, self.vertices)


def lower_expectation(K: CredalSet, f: Gamble) -> Fraction:
    g = gamble_vector(K.scope, f)
    return min(sum((a * b for a, b in zip(v.table, g) if a and b), Fraction(0)) for v in K.vertices)


def upper_expectation(K: CredalSet, f: Gamble) -> Fraction:
    g = gamble_vector(K.scope, f)
    return max(sum((a * b for a, b in zip(v.table, g) if a and b), Fraction(0)) for v in K.vertices)


def lower_prob(K: CredalSet, event: Assignment) -> Fraction:
    return lower_expectation(K, indicator(K.scope, event))


def upper_prob(K: CredalSet, event: Assignment) -> Fraction:
    return upper_expectation(K, indicator(K.scope, event))


def condition(K: CredalSet, evidence: Assignment, reduce: bool = True) -> CredalSet:
    """Bayes rule on every vertex; vertices giving the evidence zero mass are dropped."""
    posts = [v.conditional(evidence) for v in K.vertices if v.prob(evidence) > 0]
    if not posts:
        raise ZeroEvidence(f"upper probability of {dict(evidence)} is zero")
    return CredalSet(K.scope, posts, reduce=reduce)


def marginalize(K: CredalSet, keep: Iterable[str], reduce: bool = True) -> CredalSet:
    keep = list(keep)
    if not keep:
        raise ValueError("cannot marginalize onto an empty set of variables")
    scope = sub_scope(K.scope, keep)
    return CredalSet(scope, [v.marginal(keep) for v in K.vertices], reduce=reduce)


def conditional_bounds(K: CredalSet, target: Assignment, evidence: Assignment) -> tuple:
    """(lower, upper) of P(target | evidence) over the vertices of ``K``.

    A ratio of linear functions attains its extrema over a polytope at
    vertices, so scanning the vertex list is exact.
    """
    vals = [v.conditional_prob(target, evidence) for v in K.vertices if v.prob(evidence) > 0]
    if not vals:
        raise ZeroEvidence(f"upper probability of {dict(evidence)} is zero")
    return min(vals), max(vals)


def change_marginal(p: JointDensity, names: Iterable[str], q: JointDensity) -> JointDensity:
    """Write ``p`` as p(rest | Y) p(Y) and replace p(Y) by ``q``."""
    names = list(names)
    ys = sub_scope(p.scope, names)
    if set(q.names) != set(names):
        raise ValueError("replacement density must be over exactly the changed variables")
    q = q.marginal(_names(ys))  # reorder to scope order
    proj = _projection(p.scope, ys)
    py = p.marginal(_names(ys)).table
    for j, (a, b) in enumerate(zip(py, q.table)):
        if a == 0 and b > 0:
            raise ZeroMarginal(f"vertex gives zero mass to configuration {configurations(ys)[j]}")
    table = [t * q.table[j] / py[j] if t else Fraction(0) for t, j in zip(p.table, proj)]
    return JointDensity(p.scope, table, check=False)


def belief_change(K: CredalSet, idx: int, names: Iterable[str], q: JointDensity,
                  reduce: bool = True) -> CredalSet:
    """Replace the Y-marginal of vertex ``idx`` by ``q`` and retake the hull."""
    names = list(names)
    if not 0 <= idx < len(K.vertices):
        raise IndexError(f"vertex index {idx} out of range")
    if not set(names) < set(K.names):
        raise ValueError("belief change needs a proper subset of the scope")
    changed = change_marginal(K.vertices[idx], names, q)
    rest = [v for i, v in enumerate(K.vertices) if i != idx]
    return CredalSet(K.scope, rest + [changed], reduce=reduce)


def belief_change_all(K: CredalSet, names: Iterable[str], q: JointDensity, reduce: bool = True) -> CredalSet:
    """Give every vertex the Y-marginal ``q`` and take the hull of the results."""
    names = list(names)
    return CredalSet(K.scope, [change_marginal(v, names, q) for v in K.vertices], reduce=reduce)
