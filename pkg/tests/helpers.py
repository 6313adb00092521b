"""Random model generators shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from credalnet.core import Interval, JointDensity, Variable, configurations
from credalnet.network import CredalNetwork, IntervalLocal, LocalCredalSet, VertexLocal


def random_dag_edges(rng: random.Random, names, p_edge=0.5):
    """Edges respecting a random topological order."""
    order = list(names)
    rng.shuffle(order)
    return [(a, b) for i, a in enumerate(order) for b in order[i + 1:] if rng.random() < p_edge]


def random_rational(rng, lo=1, hi=9, den=10):
    return Fraction(rng.randint(lo, hi), den)


def random_interval(rng, positive=True, p_point=0.0, den=10):
    """[lo, hi] inside (0, 1) when ``positive``; a point with probability ``p_point``."""
    lo_min = 1 if positive else 0
    hi_max = den - 1 if positive else den
    a = rng.randint(lo_min, hi_max)
    if rng.random() < p_point:
        return Interval(Fraction(a, den), Fraction(a, den))
    b = rng.randint(lo_min, hi_max)
    while b == a:
        b = rng.randint(lo_min, hi_max)
    return Interval(Fraction(min(a, b), den), Fraction(max(a, b), den))


def binary_variables(n):
    return [Variable(f"V{i}", (f"v{i}", f"v{i}c")) for i in range(n)]


def random_interval_network(rng: random.Random, n, positive=True, p_point=0.0, p_edge=0.5, den=10):
    variables = binary_variables(n)
    names = [v.name for v in variables]
    edges = random_dag_edges(rng, names, p_edge)
    by_name = dict(zip(names, variables))
    locs = {}
    for v in variables:
        parents = [by_name[a] for a in names if (a, v.name) in edges]
        entries = {c: IntervalLocal(((v.values[0], random_interval(rng, positive, p_point, den)),))
                   for c in configurations(tuple(parents))}
        locs[v.name] = LocalCredalSet(v, parents, entries)
    return CredalNetwork(variables, edges, locs)


def random_density(rng: random.Random, size, positive=True, hi=9):
    w = [rng.randint(1 if positive else 0, hi) for _ in range(size)]
    if not any(w):
        w[0] = 1
    s = sum(w)
    return tuple(Fraction(x, s) for x in w)


def random_point_network(rng: random.Random, n, p_edge=0.5, max_values=3):
    """Every local set is a single density; variables take 2..max_values values."""
    variables = [Variable(f"V{i}", tuple(f"v{i}_{k}" for k in range(rng.randint(2, max_values))))
                 for i in range(n)]
    names = [v.name for v in variables]
    edges = random_dag_edges(rng, names, p_edge)
    by_name = dict(zip(names, variables))
    locs = {}
    for v in variables:
        parents = [by_name[a] for a in names if (a, v.name) in edges]
        entries = {c: VertexLocal((random_density(rng, v.size, positive=rng.random() < 0.8),))
                   for c in configurations(tuple(parents))}
        locs[v.name] = LocalCredalSet(v, parents, entries)
    return CredalNetwork(variables, edges, locs)


def random_points(rng: random.Random, count, dim, den=6):
    """Random probability vectors with small denominators (many coincidences)."""
    return [random_density(rng, dim, positive=False, hi=den) for _ in range(count)]


def as_density(scope, table):
    return JointDensity(scope, table)
