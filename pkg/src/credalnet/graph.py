"""Directed acyclic graphs and d-separation."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from .errors import CycleError


class Dag:
    """Immutable DAG over an ordered list of node names.

    Parent and child sets are returned in node order so every derived
    structure is deterministic.
    """

    def __init__(self, nodes: Sequence[str], edges: Iterable[tuple] = ()):
        self.nodes = tuple(nodes)
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node names")
        known = set(self.nodes)
        seen = []
        for a, b in edges:
            if a not in known or b not in known:
                raise ValueError(f"edge {a} -> {b} uses an unknown node")
            if (a, b) in seen:
                raise ValueError(f"duplicate edge {a} -> {b}")
            seen.append((a, b))
        self.edges = tuple(seen)
        order = {n: i for i, n in enumerate(self.nodes)}
        self._parents = {n: tuple(sorted((a for a, b in self.edges if b == n), key=order.get)) for n in self.nodes}
        self._children = {n: tuple(sorted((b for a, b in self.edges if a == n), key=order.get)) for n in self.nodes}
        cycle = self._find_cycle()
        if cycle:
            raise CycleError("directed cycle " + " -> ".join(cycle))

    def __eq__(self, other):
        return isinstance(other, Dag) and self.nodes == other.nodes and set(self.edges) == set(other.edges)

    def __hash__(self):
        return hash((self.nodes, frozenset(self.edges)))

    def __repr__(self):
        return f"Dag({list(self.nodes)}, {list(self.edges)})"

    def _find_cycle(self):
        state = {n: 0 for n in self.nodes}
        stack = []

        def visit(n):
            state[n] = 1
            stack.append(n)
            for c in self._children[n]:
                if state[c] == 1:
                    return stack[stack.index(c):] + [c]
                if state[c] == 0:
                    found = visit(c)
                    if found:
                        return found
            stack.pop()
            state[n] = 2
            return None

        for n in self.nodes:
            if state[n] == 0:
                found = visit(n)
                if found:
                    return found
        return None

    def _check(self, x):
        if x not in self._parents:
            raise KeyError(f"unknown node {x!r}")

    def parents(self, x) -> tuple:
        self._check(x)
        return self._parents[x]

    def children(self, x) -> tuple:
        self._check(x)
        return self._children[x]

    def descendants(self, x) -> set:
        """Strict descendants of ``x``."""
        self._check(x)
        out, todo = set(), list(self._children[x])
        while todo:
            n = todo.pop()
            if n not in out:
                out.add(n)
                todo.extend(self._children[n])
        return out

    def ancestors(self, nodes: Iterable[str]) -> set:
        """``nodes`` together with all their ancestors."""
        out, todo = set(), list(nodes)
        while todo:
            n = todo.pop()
            if n not in out:
                out.add(n)
                todo.extend(self._parents[n])
        return out

    def topological_order(self) -> tuple:
        indeg = {n: len(self._parents[n]) for n in self.nodes}
        ready = [n for n in self.nodes if indeg[n] == 0]
        out = []
        while ready:
            n = ready.pop(0)
            out.append(n)
            for c in self._children[n]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        return tuple(out)

    def nondescendants_nonparents(self, x) -> tuple:
        excluded = {x} | self.descendants(x) | set(self._parents[x])
        return tuple(n for n in self.nodes if n not in excluded)

    def nondescendants(self, x) -> tuple:
        excluded = {x} | self.descendants(x)
        return tuple(n for n in self.nodes if n not in excluded)


def d_separated(g: Dag, X: Iterable[str], Y: Iterable[str], Z: Iterable[str] = ()) -> bool:
    """True iff every path between ``X`` and ``Y`` is blocked given ``Z``.

    Reachability over (node, direction) states: a trail may pass a
    non-collider outside ``Z``, and a collider that is in ``Z`` or has a
    descendant in ``Z``.
    """
    X, Y, Z = set(X), set(Y), set(Z)
    for n in X | Y | Z:
        g._check(n)
    if not X or not Y:
        raise ValueError("X and Y must be nonempty")
    if X & Y or X & Z or Y & Z:
        raise ValueError("X, Y and Z must be disjoint")
    anc_z = g.ancestors(Z)
    # "up": arrived from a child (or start); "down": arrived from a parent
    queue = deque((x, "up") for x in X)
    visited = set()
    while queue:
        node, way = queue.popleft()
        if (node, way) in visited:
            continue
        visited.add((node, way))
        if node in Y:
            return False
        if way == "up" and node not in Z:
            for p in g.parents(node):
                queue.append((p, "up"))
            for c in g.children(node):
                queue.append((c, "down"))
        elif way == "down":
            if node not in Z:
                for c in g.children(node):
                    queue.append((c, "down"))
            if node in anc_z:
                for p in g.parents(node):
                    queue.append((p, "up"))
    return True
