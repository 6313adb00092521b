"""Exact credal networks: strong extensions, bounds and independence deciders."""

from .core import (
    Assignment,
    CredalSet,
    Interval,
    JointDensity,
    Rat,
    Variable,
    belief_change,
    belief_change_all,
    change_marginal,
    condition,
    conditional_bounds,
    expectation,
    format_rat,
    indicator,
    lower_expectation,
    lower_prob,
    marginalize,
    parse_rat,
    product_of,
    uniform,
    upper_expectation,
    upper_prob,
)
from .errors import (
    CombinationLimit,
    CredalError,
    CycleError,
    DimensionCap,
    EmptyRestriction,
    Infeasible,
    InfeasibleLocal,
    InfeasibleSpec,
    MissingCpt,
    NetworkSyntaxError,
    UnsupportedScale,
    ZeroEvidence,
    ZeroMarginal,
)
from .fileformat import parse_network, serialize_network
from .graph import Dag, d_separated
from .independence import (
    IndependenceVerdict,
    contraction_holds,
    epistemically_independent,
    epistemically_irrelevant,
    kuznetsov_check,
    markov_condition,
    strong_markov_probe,
    strongly_independent,
)
from .natext import TwoVarSpec, conditional_interval_hrep, independent_natural_extension, independent_natural_extension_2
from .network import (
    CredalNetwork,
    IntervalLocal,
    LocalCredalSet,
    VertexLocal,
    add_vertex,
    factorizes,
    product_density,
    query,
    restrict_vertices,
    selections,
    strong_extension,
)
from .polytope import (
    HRep,
    LpResult,
    enumerate_vertices,
    lp_optimize,
    member_of_hull,
    reduce_to_extreme,
    same_hull,
)

__all__ = [name for name in dir() if not name.startswith("_")]
