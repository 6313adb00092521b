"""Independent natural extension of two binary variables with interval marginals.

The extension is the polytope of joints over (X, Y) in which p(x), p(x|y)
and p(x|y^c) all lie in the X interval and p(y), p(y|x), p(y|x^c) lie in the
Y interval.  Table order is [xy, xy^c, x^cy, x^cy^c].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import CredalSet, Interval, Variable
from .errors import Infeasible, InfeasibleSpec, UnsupportedScale
from .polytope import HRep, enumerate_vertices

X_VAR = Variable("X", ("x", "xc"))
Y_VAR = Variable("Y", ("y", "yc"))

# indicator vectors over [xy, xyc, xcy, xcyc]
_X = (1, 1, 0, 0)
_Y = (1, 0, 1, 0)
_XC = (0, 0, 1, 1)
_YC = (0, 1, 0, 1)


def _as_interval(iv) -> Interval:
    if isinstance(iv, Interval):
        return iv
    try:
        lo, hi = iv
        return Interval(Fraction(lo), Fraction(hi))
    except (TypeError, ValueError) as exc:
        raise InfeasibleSpec(f"not a probability interval: {iv!r}") from exc


@dataclass(frozen=True)
class TwoVarSpec:
    """Intervals for p(x) and p(y)."""

    x_interval: Interval
    y_interval: Interval

    def __post_init__(self):
        object.__setattr__(self, "x_interval", _as_interval(self.x_interval))
        object.__setattr__(self, "y_interval", _as_interval(self.y_interval))


def _between(h: HRep, target, event, iv: Interval) -> HRep:
    """lo * p(event) <= p(target and event) <= hi * p(event)."""
    joint = [Fraction(t * e) for t, e in zip(target, event)]
    h = h.add([j - iv.lo * e for j, e in zip(joint, event)], ">=", 0)
    return h.add([j - iv.hi * e for j, e in zip(joint, event)], "<=", 0)


def conditional_interval_hrep(spec: TwoVarSpec) -> HRep:
    """Twelve rows: two bounds for each of p(x), p(y), p(x|y), p(x|y^c), p(y|x), p(y|x^c)."""
    ones = (1, 1, 1, 1)
    h = HRep(4)
    h = _between(h, _X, ones, spec.x_interval)
    h = _between(h, _Y, ones, spec.y_interval)
    h = _between(h, _X, _Y, spec.x_interval)
    h = _between(h, _X, _YC, spec.x_interval)
    h = _between(h, _Y, _X, spec.y_interval)
    h = _between(h, _Y, _XC, spec.y_interval)
    return h


def independent_natural_extension_2(spec: TwoVarSpec) -> CredalSet:
    try:
        verts = enumerate_vertices(conditional_interval_hrep(spec))
    except Infeasible as exc:
        raise InfeasibleSpec(str(exc)) from exc
    return CredalSet((X_VAR, Y_VAR), verts)


def independent_natural_extension(variables: Sequence[Variable], intervals: Sequence) -> CredalSet:
    """Entry point for arbitrary inputs; only two binary variables are supported."""
    variables = list(variables)
    if len(variables) != 2 or any(v.size != 2 for v in variables) or len(intervals) != 2:
        raise UnsupportedScale("independent natural extensions are built for two binary variables only")
    K = independent_natural_extension_2(TwoVarSpec(*intervals))
    return CredalSet(tuple(variables), K.points)
