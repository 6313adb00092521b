"""Locally defined credal networks and their strong extensions."""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator, Mapping, Sequence, Union

from .core import (
    Assignment,
    CredalSet,
    Interval,
    JointDensity,
    Variable,
    conditional_bounds,
    configurations,
)
from .errors import CombinationLimit, EmptyRestriction, Infeasible, InfeasibleLocal, MissingCpt
from .graph import Dag
from .polytope import HRep, enumerate_vertices, reduce_to_extreme

DEFAULT_LIMIT = 10**6


def default_limit() -> int:
    env = os.environ.get("CREDAL_LIMIT")
    return int(env) if env else DEFAULT_LIMIT


@dataclass(frozen=True)
class IntervalLocal:
    """Per-value probability intervals for one parent configuration."""

    intervals: tuple  # ((value, Interval), ...) in the node's value order


@dataclass(frozen=True)
class VertexLocal:
    """Explicit extreme points (densities over the node's values)."""

    vertices: tuple


LocalEntry = Union[IntervalLocal, VertexLocal]


class LocalCredalSet:
    """K(X_i | pa(X_i)): one entry per configuration of the parents."""

    def __init__(self, node: Variable, parents: Sequence[Variable], entries: Mapping[tuple, LocalEntry]):
        self.node = node
        self.parents = tuple(parents)
        configs = configurations(self.parents)
        missing = [c for c in configs if c not in entries]
        extra = [c for c in entries if c not in configs]
        if missing or extra:
            raise MissingCpt(f"local set of {node.name}: missing configurations {missing}, unknown {extra}")
        self.entries = {c: self._normalize(c, entries[c]) for c in configs}
        self._vertices = {}

    def _normalize(self, config, entry):
        node = self.node
        if isinstance(entry, IntervalLocal):
            given = dict(entry.intervals)
            bad = set(given) - set(node.values)
            if bad:
                raise ValueError(f"{sorted(bad)} are not values of {node.name}")
            if len(given) < node.size:
                if node.size == 2 and len(given) == 1:
                    (v, iv), = given.items()
                    other = next(w for w in node.values if w != v)
                    given[other] = Interval(1 - iv.hi, 1 - iv.lo)
                else:
                    raise MissingCpt(f"{node.name} at {config}: every value needs an interval")
            ivs = [given[v] for v in node.values]
            if sum(i.lo for i in ivs) > 1 or sum(i.hi for i in ivs) < 1:
                raise InfeasibleLocal(f"intervals of {node.name} at {config} admit no density")
            return IntervalLocal(tuple((v, given[v]) for v in node.values))
        if isinstance(entry, VertexLocal):
            verts = tuple(JointDensity((node,), v).table for v in entry.vertices)
            if not verts:
                raise InfeasibleLocal(f"{node.name} at {config}: empty vertex list")
            return VertexLocal(verts)
        raise TypeError(f"unknown local entry {entry!r}")

    def vertices(self, config: tuple) -> list:
        """Extreme points of the local set at one parent configuration."""
        if config not in self._vertices:
            entry = self.entries[config]
            if isinstance(entry, IntervalLocal):
                h = HRep(self.node.size)
                for k, (_, iv) in enumerate(entry.intervals):
                    e = [Fraction(int(j == k)) for j in range(self.node.size)]
                    h = h.add(e, ">=", iv.lo).add(e, "<=", iv.hi)
                try:
                    self._vertices[config] = enumerate_vertices(h)
                except Infeasible as exc:
                    raise InfeasibleLocal(str(exc)) from exc
            else:
                self._vertices[config] = reduce_to_extreme(entry.vertices)
        return self._vertices[config]


class CredalNetwork:
    """A DAG whose nodes carry local credal sets."""

    def __init__(self, variables: Sequence[Variable], edges, locals_: Mapping[str, LocalCredalSet]):
        self.variables = tuple(variables)
        self.dag = Dag([v.name for v in self.variables], edges)
        self.by_name = {v.name: v for v in self.variables}
        for v in self.variables:
            if v.name not in locals_:
                raise MissingCpt(f"no local credal set for {v.name}")
            loc = locals_[v.name]
            if loc.node != v:
                raise ValueError(f"local set for {v.name} is attached to {loc.node.name}")
            want = tuple(self.by_name[p] for p in self.dag.parents(v.name))
            if loc.parents != want:
                raise MissingCpt(f"local set of {v.name} conditions on {[p.name for p in loc.parents]}, "
                                 f"graph parents are {[p.name for p in want]}")
        extra = set(locals_) - set(self.by_name)
        if extra:
            raise ValueError(f"local sets for unknown nodes {sorted(extra)}")
        self.locals = {v.name: locals_[v.name] for v in self.variables}

    @property
    def scope(self) -> tuple:
        return self.variables

    @property
    def names(self) -> tuple:
        return self.dag.nodes

    def local_vertices(self, node: str, config: tuple) -> list:
        return self.locals[node].vertices(tuple(config))

    def local_sets(self) -> list:
        """(node, parent configuration) for every local set, in a fixed order."""
        return [(n, c) for n in self.names for c in configurations(self.locals[n].parents)]

    def selection_count(self) -> int:
        count = 1
        for n, c in self.local_sets():
            count *= len(self.local_vertices(n, c))
        return count

    def __eq__(self, other):
        if not isinstance(other, CredalNetwork):
            return NotImplemented
        if self.variables != other.variables or self.dag != other.dag:
            return False
        return all(self.locals[n].entries == other.locals[n].entries for n in self.names)

    __hash__ = None


Selection = Mapping[str, tuple]


def selections(net: CredalNetwork) -> Iterator[dict]:
    """Every selection of local extreme points, in a fixed order."""
    sets = net.local_sets()
    ranges = [range(len(net.local_vertices(n, c))) for n, c in sets]
    for combo in product(*ranges):
        sel = {n: [] for n in net.names}
        for (n, _), i in zip(sets, combo):
            sel[n].append(i)
        yield {n: tuple(v) for n, v in sel.items()}


class _Factorizer:
    """Precomputed lookups turning a selection into a joint table."""

    def __init__(self, net: CredalNetwork):
        self.net = net
        names = net.names
        self.plan = []
        for config in configurations(net.scope):
            row = []
            for i, n in enumerate(names):
                loc = net.locals[n]
                pa_pos = [names.index(p.name) for p in loc.parents]
                pa_cfg = tuple(config[p] for p in pa_pos)
                pa_idx = configurations(loc.parents).index(pa_cfg)
                row.append((n, pa_cfg, pa_idx, loc.node.values.index(config[i])))
            self.plan.append(row)

    def table(self, sel: Selection) -> tuple:
        net = self.net
        out = []
        for row in self.plan:
            t = Fraction(1)
            for n, pa_cfg, pa_idx, val in row:
                t *= net.local_vertices(n, pa_cfg)[sel[n][pa_idx]][val]
                if not t:
                    break
            out.append(t)
        return tuple(out)


def product_density(net: CredalNetwork, sel: Selection) -> JointDensity:
    """The factorized joint of one selection of local extreme points."""
    for n, c in net.local_sets():
        idx = configurations(net.locals[n].parents).index(c)
        if not 0 <= sel[n][idx] < len(net.local_vertices(n, c)):
            raise IndexError(f"selection index out of range for {n} at {c}")
    return JointDensity(net.scope, _Factorizer(net).table(sel))


def strong_extension(net: CredalNetwork, limit: int = None, reduce: bool = True) -> CredalSet:
    """Convex hull of the product densities of all local selections."""
    limit = default_limit() if limit is None else limit
    count = net.selection_count()
    if count > limit:
        raise CombinationLimit(count, limit)
    fz = _Factorizer(net)
    tables = [fz.table(sel) for sel in selections(net)]
    return CredalSet(net.scope, [JointDensity(net.scope, t, check=False) for t in tables], reduce=reduce)


def restrict_vertices(K: CredalSet, pred: Callable[[JointDensity], bool], reduce: bool = None) -> CredalSet:
    kept = [v for v in K.vertices if pred(v)]
    if not kept:
        raise EmptyRestriction("no vertex satisfies the predicate")
    return CredalSet(K.scope, kept, reduce=K.reduced if reduce is None else reduce)


def add_vertex(K: CredalSet, p: JointDensity, reduce: bool = True) -> CredalSet:
    if p.scope != K.scope:
        raise ValueError("density scope does not match credal set scope")
    return CredalSet(K.scope, list(K.vertices) + [p], reduce=reduce)


def query(model, target: Assignment, evidence: Assignment = None, bound: str = "lower",
          reduce: bool = True, limit: int = None) -> Fraction:
    """Lower or upper P(target | evidence) over a network's strong extension or a credal set."""
    if bound not in ("lower", "upper"):
        raise ValueError("bound must be 'lower' or 'upper'")
    K = strong_extension(model, limit=limit, reduce=reduce) if isinstance(model, CredalNetwork) else model
    lo, hi = conditional_bounds(K, target, evidence or {})
    return lo if bound == "lower" else hi


def recovered_conditional(net: CredalNetwork, p: JointDensity, node: str, config: tuple):
    """p(node | parents = config) read off a joint, or None if P(config) = 0."""
    loc = net.locals[node]
    event = {v.name: c for v, c in zip(loc.parents, config)}
    pe = p.prob(event)
    if pe == 0:
        return None
    return tuple(p.prob({**event, node: x}) / pe for x in loc.node.values)


def factorizes(net: CredalNetwork, p: JointDensity) -> bool:
    """Does every realizable conditional of ``p`` equal some local extreme point?"""
    for n, c in net.local_sets():
        cond = recovered_conditional(net, p, n, c)
        if cond is not None and cond not in net.local_vertices(n, c):
            return False
    return True
