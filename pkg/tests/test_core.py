import random
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credalnet.core import (
    CredalSet,
    Interval,
    JointDensity,
    Variable,
    belief_change,
    belief_change_all,
    change_marginal,
    condition,
    conditional_bounds,
    configurations,
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
from credalnet.errors import ZeroEvidence, ZeroMarginal
from credalnet.network import strong_extension
from credalnet.repro import figure1_network, table1_density

from helpers import random_density
from oracles import change_by_factoring, marginal_by_summing

A = Variable("A", ("a", "ac"))
B = Variable("B", ("b", "bc"))
C = Variable("C", ("c0", "c1", "c2"))


@st.composite
def credal_sets(draw, scope=(A, B, C), max_vertices=5):
    size = 1
    for v in scope:
        size *= v.size
    n = draw(st.integers(1, max_vertices))
    tables = []
    for _ in range(n):
        w = draw(st.lists(st.integers(0, 5), min_size=size, max_size=size).filter(any))
        tables.append(tuple(F(x, sum(w)) for x in w))
    return CredalSet(scope, tables, reduce=draw(st.booleans()))


gambles = st.lists(st.integers(-5, 5), min_size=12, max_size=12).map(lambda g: [F(x) for x in g])
events = st.fixed_dictionaries({}, optional={"A": st.sampled_from(A.values), "B": st.sampled_from(B.values),
                                            "C": st.sampled_from(C.values)})


class TestRationals:
    def test_decimal_equals_fraction(self):
        assert parse_rat("0.2") == parse_rat("1/5") == F(1, 5)

    def test_format(self):
        assert format_rat(F(8501, 22707)) == "8501/22707"
        assert format_rat(F(4, 2)) == "2"

    def test_lowest_terms(self):
        q = parse_rat("6/8")
        assert (q.numerator, q.denominator) == (3, 4)

    def test_rejects_float(self):
        with pytest.raises(TypeError):
            parse_rat(0.2)

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_rat("two")


class TestTypes:
    def test_variable_needs_two_distinct_values(self):
        with pytest.raises(ValueError):
            Variable("V", ("v",))
        with pytest.raises(ValueError):
            Variable("V", ("v", "v"))

    def test_interval_bounds(self):
        assert F(1, 2) in Interval(F(0), F(1))
        with pytest.raises(ValueError):
            Interval(F(1, 2), F(1, 3))
        with pytest.raises(ValueError):
            Interval(F(-1, 2), F(1, 3))

    def test_density_checks(self):
        with pytest.raises(ValueError):
            JointDensity((A,), (F(1, 2), F(1, 3)))
        with pytest.raises(ValueError):
            JointDensity((A,), (F(3, 2), F(-1, 2)))
        with pytest.raises(ValueError):
            JointDensity((A,), (F(1),))

    def test_configuration_order(self):
        assert configurations((A, B)) == (("a", "b"), ("a", "bc"), ("ac", "b"), ("ac", "bc"))


class TestExpectation:
    def test_uniform_indicator(self):
        assert expectation(uniform((A, B)), indicator((A, B), {"A": "a"})) == F(1, 2)

    def test_constant_one(self):
        p = JointDensity((A, C), random_density(random.Random(1), 6))
        assert expectation(p, lambda cfg: 1) == 1

    def test_table1_p1_indicator_z(self):
        p1 = table1_density("p1")
        # sum of the eight z entries of the reference table
        assert expectation(p1, indicator(p1.scope, {"Z": "z"})) == F(417, 1000)

    def test_callable_gamble(self):
        p = JointDensity((A, B), (F(1, 10), F(2, 10), F(3, 10), F(4, 10)))
        f = lambda cfg: 1 if cfg["A"] == "a" else 0
        assert expectation(p, f) == F(3, 10)


class TestBounds:
    def test_singleton(self):
        p = JointDensity((A,), (F(1, 3), F(2, 3)))
        K = CredalSet((A,), [p])
        assert lower_expectation(K, [1, 0]) == upper_expectation(K, [1, 0]) == F(1, 3)

    def test_two_vertices(self):
        K = CredalSet((A,), [(F(1, 4), F(3, 4)), (F(1, 2), F(1, 2))])
        assert lower_expectation(K, [1, 0]) == F(1, 4)
        assert upper_expectation(K, [1, 0]) == F(1, 2)

    def test_uniform_prob(self):
        assert lower_prob(CredalSet((A,), [uniform((A,))]), {"A": "a"}) == F(1, 2)

    def test_chain_root_marginal(self):
        K = marginalize(strong_extension(figure1_network()), ["W"])
        assert lower_prob(K, {"W": "w"}) == F(1, 5)
        assert upper_prob(K, {"W": "w"}) == F(3, 10)
        assert sorted(v.table[0] for v in K.vertices) == [F(1, 5), F(3, 10)]

    def test_random_vs_scan(self):
        rng = random.Random(7)
        for _ in range(30):
            tabs = [random_density(rng, 12) for _ in range(3)]
            K = CredalSet((A, B, C), tabs)
            ev = {"A": "a", "C": "c1"}
            ind = indicator((A, B, C), ev)
            scan = [sum(t * g for t, g in zip(tab, ind)) for tab in tabs]
            assert lower_prob(K, ev) == min(scan)
            assert upper_prob(K, ev) == max(scan)

    @given(credal_sets(), gambles)
    @settings(max_examples=60, deadline=None)
    def test_conjugacy(self, K, f):
        assert upper_expectation(K, f) == -lower_expectation(K, [-x for x in f])

    @given(credal_sets(), events, events)
    @settings(max_examples=60, deadline=None)
    def test_monotonicity(self, K, e1, e2):
        # {e1 and e2} is a subset of {e1}
        both = {**e2, **e1}
        if any(e2.get(k, v) != v for k, v in e1.items()):
            return
        assert lower_prob(K, both) <= lower_prob(K, e1)
        assert lower_prob(K, e1) <= upper_prob(K, e1)

    @given(credal_sets(), events)
    @settings(max_examples=40, deadline=None)
    def test_lower_equals_upper_iff_vertices_agree(self, K, e):
        vals = {v.prob(e) for v in K.vertices}
        assert (lower_prob(K, e) == upper_prob(K, e)) == (len(vals) == 1)

    @given(credal_sets(), gambles, st.data())
    @settings(max_examples=40, deadline=None)
    def test_hull_insensitivity(self, K, f, data):
        w = data.draw(st.lists(st.integers(0, 4), min_size=len(K), max_size=len(K)).filter(any))
        mix = tuple(sum(F(wi, sum(w)) * v.table[k] for wi, v in zip(w, K.vertices)) for k in range(12))
        K2 = CredalSet(K.scope, list(K.vertices) + [mix], reduce=False)
        assert lower_expectation(K2, f) == lower_expectation(K, f)
        assert upper_expectation(K2, f) == upper_expectation(K, f)


class TestCredalSet:
    def test_canonical_order_and_reduction(self):
        pts = [(F(1, 2), F(1, 2)), (F(1), F(0)), (F(0), F(1)), (F(1), F(0))]
        K = CredalSet((A,), pts)
        assert K.points == [(F(0), F(1)), (F(1), F(0))]
        U = CredalSet((A,), pts, reduce=False)
        assert len(U) == 3
        assert U == K
        assert U.canonical().points == K.points

    def test_scope_mismatch(self):
        with pytest.raises(ValueError):
            CredalSet((A,), [uniform((B,))])

    def test_empty(self):
        with pytest.raises(ValueError):
            CredalSet((A,), [])

    def test_unhashable(self):
        with pytest.raises(TypeError):
            hash(CredalSet((A,), [uniform((A,))]))


class TestConditioning:
    def test_uniform_renormalizes(self):
        K = CredalSet((A, C), [uniform((A, C))])
        post = condition(K, {"C": "c2"})
        assert post.points == [(0, 0, F(1, 2), 0, 0, F(1, 2))]

    def test_zero_mass_vertices_dropped(self):
        K = CredalSet((A,), [(F(1), F(0)), (F(0), F(1))])
        assert condition(K, {"A": "a"}).points == [(F(1), F(0))]

    def test_zero_evidence(self):
        K = CredalSet((A, B), [(F(1), F(0), F(0), F(0))])
        with pytest.raises(ZeroEvidence):
            condition(K, {"A": "ac"})
        with pytest.raises(ZeroEvidence):
            conditional_bounds(K, {"B": "b"}, {"A": "ac"})

    def test_conditional_bounds_agree_with_conditioning(self):
        rng = random.Random(9)
        for _ in range(20):
            K = CredalSet((A, B, C), [random_density(rng, 12) for _ in range(4)])
            lo, hi = conditional_bounds(K, {"B": "b"}, {"C": "c0"})
            post = condition(K, {"C": "c0"})
            assert (lo, hi) == (lower_prob(post, {"B": "b"}), upper_prob(post, {"B": "b"}))

    def test_condition_marginalize_commute(self):
        rng = random.Random(13)
        for _ in range(30):
            K = CredalSet((A, B, C), [random_density(rng, 12) for _ in range(rng.randint(1, 4))])
            e = {"A": rng.choice(A.values)}
            # drop C, condition on A
            left = marginalize(condition(K, e), ["A", "B"])
            right = condition(marginalize(K, ["A", "B"]), e)
            assert left == right


class TestMarginalize:
    def test_product_marginal(self):
        pa = JointDensity((A,), (F(1, 3), F(2, 3)))
        pc = JointDensity((C,), (F(1, 6), F(1, 3), F(1, 2)))
        K = CredalSet((A, C), [product_of(pa, pc)])
        assert marginalize(K, ["C"]).points == [pc.table]
        assert marginalize(K, ["A"]).points == [pa.table]

    def test_vs_direct_summation(self):
        rng = random.Random(17)
        for _ in range(30):
            tabs = [random_density(rng, 12) for _ in range(3)]
            keep = rng.choice([["A"], ["C"], ["A", "C"], ["B", "C"]])
            K = CredalSet((A, B, C), tabs, reduce=False)
            got = marginalize(K, keep, reduce=False).points
            want = sorted(set(marginal_by_summing((A, B, C), t, keep) for t in tabs))
            assert got == want

    def test_empty_keep(self):
        with pytest.raises(ValueError):
            marginalize(CredalSet((A,), [uniform((A,))]), [])


class TestBeliefChange:
    def test_identity_change(self):
        rng = random.Random(2)
        K = CredalSet((A, B), [random_density(rng, 4) for _ in range(3)])
        v = K.vertices[1]
        same = belief_change(K, 1, ["B"], v.marginal(["B"]))
        assert same == K

    def test_vs_factoring_oracle(self):
        rng = random.Random(4)
        for _ in range(40):
            p = JointDensity((A, B, C), random_density(rng, 12))
            ys = rng.choice([["A"], ["C"], ["A", "C"], ["C", "A"], ["B", "C"]])
            yscope = tuple(v for v in (A, B, C) if v.name in ys)
            q = JointDensity(yscope, random_density(rng, len(configurations(yscope))))
            got = change_marginal(p, ys, q)
            qmap = dict(zip(configurations(yscope), q.table))
            want = change_by_factoring((A, B, C), p.table, [v.name for v in yscope], qmap)
            assert got.table == want
            assert got.marginal([v.name for v in yscope]).table == q.table

    def test_zero_marginal(self):
        p = JointDensity((A, B), (F(1, 2), F(1, 2), F(0), F(0)))
        q = JointDensity((A,), (F(1, 2), F(1, 2)))
        with pytest.raises(ZeroMarginal):
            change_marginal(p, ["A"], q)
        with pytest.raises(ZeroMarginal):
            belief_change(CredalSet((A, B), [p]), 0, ["A"], q)

    def test_zero_marginal_where_q_is_zero_is_fine(self):
        p = JointDensity((A, B), (F(1, 2), F(1, 2), F(0), F(0)))
        q = JointDensity((A,), (F(1), F(0)))
        assert change_marginal(p, ["A"], q) == p

    def test_needs_proper_subset(self):
        K = CredalSet((A, B), [uniform((A, B))])
        with pytest.raises(ValueError):
            belief_change(K, 0, ["A", "B"], uniform((A, B)))
        with pytest.raises(IndexError):
            belief_change(K, 3, ["A"], uniform((A,)))

    def test_change_all_sets_every_marginal(self):
        rng = random.Random(6)
        K = CredalSet((A, B, C), [random_density(rng, 12) for _ in range(4)])
        q = JointDensity((C,), (F(1, 5), F(2, 5), F(2, 5)))
        out = belief_change_all(K, ["C"], q)
        assert all(v.marginal(["C"]).table == q.table for v in out.vertices)

    def test_inputs_not_mutated(self):
        rng = random.Random(8)
        K = CredalSet((A, B), [random_density(rng, 4) for _ in range(3)])
        before = K.points
        belief_change(K, 0, ["A"], JointDensity((A,), (F(1, 3), F(2, 3))))
        assert K.points == before


def test_event_validation():
    p = uniform((A, B))
    with pytest.raises(KeyError):
        p.prob({"Q": "q"})
    with pytest.raises(ValueError):
        p.prob({"A": "nope"})


def test_product_of_order():
    pa = JointDensity((A,), (F(1, 4), F(3, 4)))
    pb = JointDensity((B,), (F(1, 3), F(2, 3)))
    joint = product_of(pa, pb)
    assert joint.table == tuple(x * y for x, y in product(pa.table, pb.table))
