"""Exact convex geometry over probability tables.

Points are tuples of :class:`fractions.Fraction`.  All answers are exact:
the linear programs run a revised simplex method on rationals, and vertex
enumeration is a double description method on rationals.  Hull reduction
may consult a floating point solver to *propose* a certificate, but every
verdict it returns has been checked in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionCap, Infeasible

DEFAULT_MAX_DIMENSION = 16

Point = tuple


def as_point(values: Iterable) -> Point:
    if type(values) is tuple and all(type(v) is Fraction for v in values):
        return values
    return tuple(v if type(v) is Fraction else Fraction(v) for v in values)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


# ----------------------------------------------------------------------
# Constraint systems


LE = "<="
EQ = "="


@dataclass(frozen=True)
class HRep:
    """Linear constraints over the coordinates of a probability table.

    The rows ``coordinate >= 0`` and ``sum of coordinates == 1`` are always
    implied and never stored in ``rows``.
    """

    dimension: int
    rows: tuple = field(default=())

    def __post_init__(self):
        cleaned = []
        for coeffs, rel, rhs in self.rows:
            if rel not in (LE, EQ):
                raise ValueError(f"unknown relation {rel!r}")
            coeffs = as_point(coeffs)
            if len(coeffs) != self.dimension:
                raise ValueError("coefficient vector has the wrong length")
            cleaned.append((coeffs, rel, Fraction(rhs)))
        object.__setattr__(self, "rows", tuple(cleaned))

    @classmethod
    def simplex(cls, dimension: int) -> "HRep":
        return cls(dimension)

    def add(self, coeffs, rel, rhs) -> "HRep":
        """Return a copy with one more row; ``>=`` is stored negated."""
        if rel == ">=":
            coeffs, rel, rhs = [-Fraction(c) for c in coeffs], LE, -Fraction(rhs)
        return HRep(self.dimension, self.rows + ((coeffs, rel, rhs),))

    def full_rows(self):
        """All rows including the implicit simplex rows."""
        n = self.dimension
        rows = list(self.rows)
        rows.append(((Fraction(1),) * n, EQ, Fraction(1)))
        for i in range(n):
            rows.append((tuple(Fraction(-1 if j == i else 0) for j in range(n)), LE, Fraction(0)))
        return rows

    def satisfied_by(self, x: Sequence) -> bool:
        for coeffs, rel, rhs in self.full_rows():
            lhs = dot(coeffs, x)
            if rel == EQ and lhs != rhs:
                return False
            if rel == LE and lhs > rhs:
                return False
        return True


@dataclass(frozen=True)
class LpResult:
    optimum: Fraction
    witness: Point


# ----------------------------------------------------------------------
# Revised simplex on rationals


def _sparse(col):
    return tuple((i, v) for i, v in enumerate(col) if v)


try:  # GMP rationals are much faster than Fraction inside the pivot loop
    from gmpy2 import mpq as Q

    def _to_fraction(v):
        return Fraction(int(v.numerator), int(v.denominator))
except ImportError:  # pragma: no cover
    Q = Fraction

    def _to_fraction(v):
        return v


class _Simplex:
    """min cost.x subject to A x = b, x >= 0, with b >= 0.

    Columns are kept sparse and the basis inverse explicitly.  Pivoting uses
    Bland's rule (smallest index enters, smallest basic index leaves among
    ratio ties), so the method terminates and is deterministic.
    """

    def __init__(self, columns, b):
        self.m = len(b)
        self.n = len(columns)
        self.cols = [_sparse([Q(v) for v in c]) for c in columns]
        # artificial columns n .. n+m-1
        for i in range(self.m):
            self.cols.append(((i, Q(1)),))
        self.basis = [self.n + i for i in range(self.m)]
        self.binv = [[Q(int(i == j)) for j in range(self.m)] for i in range(self.m)]
        self.xb = [Q(v) for v in b]

    def duals_exact(self, y):
        return [_to_fraction(v) for v in y]

    def _duals(self, cost):
        m = self.m
        y = [Q(0)] * m
        for i, k in enumerate(self.basis):
            ck = cost[k]
            if ck:
                row = self.binv[i]
                for j in range(m):
                    if row[j]:
                        y[j] += ck * row[j]
        return y

    def _direction(self, j):
        col = self.cols[j]
        return [sum((row[k] * v for k, v in col if row[k]), Q(0)) for row in self.binv]

    def _pivot(self, r, j, d):
        piv = d[r]
        row_r = [v / piv for v in self.binv[r]]
        x_r = self.xb[r] / piv
        self.binv[r] = row_r
        self.xb[r] = x_r
        for i in range(self.m):
            if i != r and d[i]:
                f = d[i]
                row = self.binv[i]
                self.binv[i] = [a - f * c if c else a for a, c in zip(row, row_r)]
                self.xb[i] -= f * x_r
        self.basis[r] = j

    def run(self, cost, allowed):
        """Iterate to optimality over the column indices in ``allowed``."""
        cost = [Q(c) for c in cost]
        while True:
            y = self._duals(cost)
            inbasis = set(self.basis)
            entering = None
            for j in allowed:
                if j in inbasis:
                    continue
                r = cost[j] - sum((y[i] * v for i, v in self.cols[j] if y[i]), Q(0))
                if r < 0:
                    entering = j
                    break
            if entering is None:
                return "optimal", self.duals_exact(y)
            d = self._direction(entering)
            leave = None
            best = None
            for i in range(self.m):
                if d[i] > 0:
                    ratio = self.xb[i] / d[i]
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return "unbounded", self.duals_exact(y)
            self._pivot(leave, entering, d)

    def phase_one(self):
        cost = [Q(0)] * self.n + [Q(1)] * self.m
        _, y = self.run(cost, range(self.n + self.m))
        value = sum((cost[k] * x for k, x in zip(self.basis, self.xb)), Q(0))
        return _to_fraction(value), y

    def drive_out_artificials(self):
        for r in range(self.m):
            if self.basis[r] < self.n:
                continue
            inbasis = set(self.basis)
            for j in range(self.n):
                if j in inbasis:
                    continue
                d = self._direction(j)
                if d[r] != 0:
                    self._pivot(r, j, d)
                    break

    def solution(self):
        x = [Q(0)] * self.n
        for k, v in zip(self.basis, self.xb):
            if k < self.n:
                x[k] = v
        return [_to_fraction(v) for v in x]


def _standard_form(h: HRep):
    """Columns and rhs of ``h`` with one slack per inequality, rhs made >= 0."""
    n = h.dimension
    rows = h.full_rows()
    ineq = [r for r in rows if r[1] == LE and not _is_nonneg_row(r)]
    eq = [r for r in rows if r[1] == EQ]
    all_rows = eq + ineq
    m = len(all_rows)
    nslack = len(ineq)
    columns = [[Fraction(0)] * m for _ in range(n + nslack)]
    b = []
    for i, (coeffs, rel, rhs) in enumerate(all_rows):
        sign = -1 if rhs < 0 else 1
        for j, c in enumerate(coeffs):
            columns[j][i] = sign * c
        if rel == LE:
            columns[n + i - len(eq)][i] = Fraction(sign)
        b.append(sign * rhs)
    return columns, b


def _is_nonneg_row(row):
    coeffs, rel, rhs = row
    return rel == LE and rhs == 0 and sum(1 for c in coeffs if c) == 1 and min(coeffs) == -1


def lp_optimize(objective: Sequence, h: HRep, direction: str = "min") -> LpResult:
    """Exact optimum of a linear objective over the polytope ``h``.

    Raises :class:`Infeasible` when ``h`` has no points.  The simplex rows
    bound the region, so the problem is never unbounded.
    """
    if direction not in ("min", "max"):
        raise ValueError("direction must be 'min' or 'max'")
    objective = as_point(objective)
    if len(objective) != h.dimension:
        raise ValueError("objective has the wrong length")
    columns, b = _standard_form(h)
    lp = _Simplex(columns, b)
    infeas, _ = lp.phase_one()
    if infeas > 0:
        raise Infeasible("constraint system has no solution")
    lp.drive_out_artificials()
    sign = 1 if direction == "min" else -1
    cost = [sign * c for c in objective] + [Fraction(0)] * (lp.n - h.dimension + lp.m)
    status, _ = lp.run(cost, range(lp.n))
    assert status == "optimal"
    witness = tuple(lp.solution()[: h.dimension])
    return LpResult(dot(objective, witness), witness)


# ----------------------------------------------------------------------
# Hull membership


def _membership_lp(q, points):
    """Exact LP: is q a convex combination of points?

    Returns ``(True, weights)`` or ``(False, (c, c0))`` where the Farkas
    certificate satisfies ``c.p + c0 <= 0 < c.q + c0`` for every point p.
    """
    d = len(q)
    b = list(q) + [Fraction(1)]
    signs = [-1 if v < 0 else 1 for v in b]
    columns = [[s * v for s, v in zip(signs, list(p) + [Fraction(1)])] for p in points]
    lp = _Simplex(columns, [s * v for s, v in zip(signs, b)])
    value, y = lp.phase_one()
    if value == 0:
        return True, lp.solution()
    y = [s * v for s, v in zip(signs, y)]
    return False, (tuple(y[:d]), y[d])


def member_of_hull(q: Sequence, points: Sequence[Sequence]) -> bool:
    """True iff ``q`` is a convex combination of ``points`` (exact LP)."""
    q = as_point(q)
    pts = [as_point(p) for p in points]
    if not pts:
        return False
    if any(len(p) != len(q) for p in pts):
        raise ValueError("dimension mismatch")
    if any(p == q for p in pts):
        return True
    return _membership_lp(q, pts)[0]


def _scaled(p):
    """Integer numerators over a common denominator: (ints, den)."""
    den = 1
    for v in p:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return tuple(v.numerator * (den // v.denominator) for v in p), den


def unique_sorted(points) -> list:
    """Sorted list of distinct points (sorting avoids hashing Fractions)."""
    out = []
    for p in sorted(points):
        if not out or out[-1] != p:
            out.append(p)
    return out


def _float_tools():
    try:
        import numpy as np
        from scipy.optimize import linprog
    except ImportError:  # pragma: no cover
        return None
    return np, linprog


_GRID = 1 << 24
# below this many competing points the exact LP alone is faster
FLOAT_GUIDANCE_MIN = 12


class _Prepared:
    """A point list with integer-scaled and floating point copies."""

    def __init__(self, points, use_float=True):
        self.pts = points
        scaled = [_scaled(p) for p in points]
        self.ints = [s[0] for s in scaled]
        self.dens = [s[1] for s in scaled]
        # two coordinates with a common sum: the points lie on one segment
        self.on_segment = bool(points) and len(points[0]) == 2 and len({p[0] + p[1] for p in points}) == 1
        self.tools = _float_tools() if use_float else None
        if self.tools is not None:
            np = self.tools[0]
            self.floats = np.array([[v.numerator / v.denominator for v in p] for p in points])

    def separates(self, c, i, others) -> bool:
        """Exact check that c.p_i > c.p_k for every k in others."""
        cu = sum(a * b for a, b in zip(c, self.ints[i]))
        du = self.dens[i]
        for k in others:
            if cu * self.dens[k] <= sum(a * b for a, b in zip(c, self.ints[k])) * du:
                return False
        return True

    def float_separator(self, i, others):
        """Suggest an integer functional c with c.p_i > c.p_k for k in others."""
        np, linprog = self.tools
        u = self.floats[i]
        W = self.floats[others]
        d = len(u)
        # variables (c, s): maximize s subject to c.(w - u) + s <= 0
        A = np.hstack([W - u, np.ones((len(others), 1))])
        res = linprog(np.r_[np.zeros(d), -1.0], A_ub=A, b_ub=np.zeros(len(others)),
                      bounds=[(-1, 1)] * d + [(None, 1)], method="highs")
        if res.status != 0 or -res.fun <= 0:
            return None
        return [int(round(v * _GRID)) for v in res.x[:d]]

    def float_support(self, i, others):
        """Members of others carrying weight in a float convex combination of p_i."""
        np, linprog = self.tools
        A = np.vstack([self.floats[others].T, np.ones((1, len(others)))])
        res = linprog(np.zeros(len(others)), A_eq=A, b_eq=np.r_[self.floats[i], 1.0],
                      bounds=[(0, None)] * len(others), method="highs")
        if res.status != 0:
            return None
        return [k for k, lam in zip(others, res.x) if lam > 1e-12]

    def outside(self, i, others) -> bool:
        if not others:
            return True
        u = self.pts[i]
        if any(self.pts[k] == u for k in others):
            return False
        if self.on_segment:
            firsts = [self.pts[k][0] for k in others]
            return not min(firsts) <= u[0] <= max(firsts)
        if self.tools is not None and len(others) >= FLOAT_GUIDANCE_MIN:
            c = self.float_separator(i, others)
            if c is not None and self.separates(c, i, others):
                return True
            support = self.float_support(i, others)
            if support and _membership_lp(u, [self.pts[k] for k in support])[0]:
                return False
        return not _membership_lp(u, [self.pts[k] for k in others])[0]


def outside_hull(u: Sequence, others: Sequence[Sequence], use_float: bool = True) -> bool:
    """True iff ``u`` is not a convex combination of ``others``.

    A floating point LP may suggest a separating functional (rounded to a
    rational grid and verified exactly) or the support of a convex
    combination (re-solved exactly on that support).  Suggestions that do
    not verify fall through to the exact LP over all of ``others``.
    """
    pts = [as_point(u)] + [as_point(w) for w in others]
    return _Prepared(pts, use_float).outside(0, list(range(1, len(pts))))


def extreme_flags(points: Sequence[Sequence], candidates=None, use_float: bool = True) -> list:
    """For each index in ``candidates``: is that point outside the hull of all the others?"""
    pts = [as_point(p) for p in points]
    prep = _Prepared(pts, use_float)
    idx = range(len(pts)) if candidates is None else candidates
    return [prep.outside(i, [k for k in range(len(pts)) if k != i]) for i in idx]


def reduce_to_extreme(points: Sequence[Sequence], use_float: bool = True) -> list:
    """Extreme points of the hull of ``points``, deduplicated and sorted.

    Every survivor lies outside the hull of the other survivors, and the
    hull is unchanged.
    """
    pts = unique_sorted(as_point(p) for p in points)
    if not pts:
        raise ValueError("empty point list")
    if len({len(p) for p in pts}) != 1:
        raise ValueError("dimension mismatch")
    if len(pts) <= 2:
        return pts
    prep = _Prepared(pts, use_float)
    alive = list(range(len(pts)))
    for i in range(len(pts)):
        others = [k for k in alive if k != i]
        if not prep.outside(i, others):
            alive.remove(i)
    return [pts[k] for k in alive]


def same_hull(A: Sequence[Sequence], B: Sequence[Sequence]) -> bool:
    """True iff the convex hulls of ``A`` and ``B`` coincide."""
    a = unique_sorted(as_point(p) for p in A)
    b = unique_sorted(as_point(p) for p in B)
    if a == b:
        return True
    if not a or not b:
        return False
    if len({len(p) for p in a + b}) != 1:
        raise ValueError("dimension mismatch")
    return all(member_of_hull(p, b) for p in a) and all(member_of_hull(p, a) for p in b)


# ----------------------------------------------------------------------
# Vertex enumeration (double description method)


def _rref(rows, ncols):
    """Reduced row echelon form of an augmented matrix; returns (rows, pivots)."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pv = mat[r][c]
        mat[r] = [v / pv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def _affine_parametrization(eq_rows, n):
    """Solve E x = f; return (x0, N) with solutions x0 + N y, or None."""
    aug = [list(c) + [rhs] for c, _, rhs in eq_rows]
    mat, pivots = _rref(aug, n)
    for row in mat[len(pivots):]:
        if row[n] != 0:
            return None
    x0 = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        x0[c] = mat[r][n]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -mat[r][f]
        basis.append(v)
    N = [[basis[k][i] for k in range(len(free))] for i in range(n)]
    return x0, N


def _primitive(v):
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def _double_description(M):
    """Extreme rays of the pointed cone {z : M z >= 0}.

    ``M`` must have full column rank.  Rays are primitive integer tuples.
    """
    k = len(M[0])
    # initial simplicial cone from the first k linearly independent rows
    chosen, basis_rows = [], []
    for i, row in enumerate(M):
        trial = basis_rows + [list(row)]
        _, piv = _rref(trial, k)
        if len(piv) == len(trial):
            chosen.append(i)
            basis_rows = trial
            if len(chosen) == k:
                break
    if len(chosen) < k:
        raise ValueError("cone is not pointed")
    # columns of the inverse of the chosen rows are the initial rays
    aug = [list(r) + [Fraction(int(i == j)) for j in range(k)] for i, r in enumerate(basis_rows)]
    inv, _ = _rref(aug, k)
    rays = []
    for j in range(k):
        ray = _primitive([Fraction(inv[i][k + j]) for i in range(k)])
        tight = frozenset(chosen[t] for t in range(k) if t != j)
        rays.append((ray, tight))
    processed = set(chosen)
    for i, row in enumerate(M):
        if i in processed:
            continue
        pos, zero, neg = [], [], []
        for ray, tight in rays:
            s = sum(a * b for a, b in zip(row, ray))
            if s > 0:
                pos.append((ray, tight, s))
            elif s < 0:
                neg.append((ray, tight, s))
            else:
                zero.append((ray, tight | {i}))
        new = [(r, t) for r, t, _ in pos] + zero
        all_tight = [t for _, t in rays]
        for rp, tp, sp in pos:
            for rn, tn, sn in neg:
                common = tp & tn
                if len(common) < k - 2:
                    continue
                adjacent = True
                for t in all_tight:
                    if t is not tp and t is not tn and common <= t:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                ray = _primitive([Fraction(sp * b - sn * a) for a, b in zip(rp, rn)])
                new.append((ray, common | {i}))
        rays = new
        processed.add(i)
        if not rays:
            break
    return [r for r, _ in rays]


def enumerate_vertices(h: HRep, max_dimension: int = DEFAULT_MAX_DIMENSION) -> list:
    """Exact extreme points of the polytope ``h``, deduplicated and sorted."""
    n = h.dimension
    if n > max_dimension:
        raise DimensionCap(f"dimension {n} exceeds the cap of {max_dimension}")
    rows = h.full_rows()
    eqs = [r for r in rows if r[1] == EQ]
    ineqs = [r for r in rows if r[1] == LE]
    param = _affine_parametrization(eqs, n)
    if param is None:
        raise Infeasible("equality rows are inconsistent")
    x0, N = param
    k = len(N[0]) if N else 0
    if k == 0:
        if not h.satisfied_by(x0):
            raise Infeasible("constraint system has no solution")
        return [tuple(x0)]
    # a.(x0 + N y) <= rhs  ->  (rhs - a.x0) t - (a N) y >= 0
    M = []
    for coeffs, _, rhs in ineqs:
        aN = [sum((coeffs[i] * N[i][c] for i in range(n) if coeffs[i]), Fraction(0)) for c in range(k)]
        beta = rhs - dot(coeffs, x0)
        M.append([-v for v in aN] + [beta])
    M.append([Fraction(0)] * k + [Fraction(1)])
    rays = _double_description(M)
    verts = set()
    for ray in rays:
        t = ray[k]
        if t <= 0:
            continue
        y = [Fraction(v, t) for v in ray[:k]]
        x = tuple(x0[i] + sum((N[i][c] * y[c] for c in range(k) if N[i][c]), Fraction(0)) for i in range(n))
        verts.add(x)
    if not verts:
        raise Infeasible("constraint system has no solution")
    return sorted(verts)

