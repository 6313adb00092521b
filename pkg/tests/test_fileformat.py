import random
from fractions import Fraction as F

import pytest

from credalnet.errors import CycleError, InfeasibleLocal, MissingCpt, NetworkSyntaxError
from credalnet.fileformat import parse_network, serialize_network
from credalnet.repro import data_text, figure1_network

from helpers import random_interval_network, random_point_network

HEADER = """variable A { values = [a, ac] }
variable B { values = [b, bc] }
edge A -> B
"""
CPT_A = "cpt A {\n  a in [0.2, 0.3]\n}\n"
CPT_B = "cpt B | A {\n  a: b in [1/10, 1/5]\n  ac: b in [4/5, 9/10]\n}\n"


def test_shipped_chain_file():
    net = parse_network(data_text("figure1.credal"))
    assert net.names == ("W", "X", "Y", "Z")
    assert net.dag.edges == (("W", "X"), ("X", "Y"), ("Y", "Z"))
    assert len(list(net.local_sets())) == 7
    assert net.local_vertices("X", ("wc",)) == [(F(4, 5), F(1, 5)), (F(9, 10), F(1, 10))]
    assert net == figure1_network()


def test_decimals_and_fractions_agree():
    a = parse_network(HEADER + CPT_A + CPT_B)
    b = parse_network(HEADER + CPT_A.replace("0.2", "1/5").replace("0.3", "3/10") + CPT_B.replace("1/10", "0.1"))
    assert a == b


def test_self_loop_is_cycle():
    with pytest.raises(CycleError):
        parse_network("variable A { values = [a, ac] }\nedge A -> A\ncpt A {\n  a in [0, 1]\n}\n")


def test_longer_cycle():
    text = HEADER + "edge B -> A\n" + CPT_A + CPT_B
    with pytest.raises(CycleError):
        parse_network(text)


@pytest.mark.parametrize("text, line, col", [
    ("variable A { values = [a, ac] \n", 2, 1),
    ("variable A { vals = [a, ac] }\n", 1, 14),
    ("variable A { values = [a, ac] }\nedge A => B\n", 2, 9),
    ("variable A { values = [a, ac] }\ncpt A {\n  a in [0.2; 0.3]\n}\n", 3, 12),
    ("bogus\n", 1, 1),
])
def test_syntax_error_positions(text, line, col):
    with pytest.raises(NetworkSyntaxError) as exc:
        parse_network(text)
    assert (exc.value.line, exc.value.column) == (line, col)
    assert exc.value.kind == "SyntaxError"


def test_unknown_value_label():
    with pytest.raises(NetworkSyntaxError):
        parse_network(HEADER + CPT_A + CPT_B.replace("ac:", "nope:"))


def test_missing_cpt_block():
    with pytest.raises(MissingCpt):
        parse_network(HEADER + CPT_A)


def test_missing_parent_configuration():
    with pytest.raises(MissingCpt):
        parse_network(HEADER + CPT_A + "cpt B | A {\n  a: b in [0.1, 0.2]\n}\n")


def test_wrong_parents():
    with pytest.raises(MissingCpt):
        parse_network(HEADER + CPT_A + "cpt B {\n  b in [0.1, 0.2]\n}\n")


def test_infeasible_local():
    three = "variable T { values = [t0, t1, t2] }\ncpt T {\n  t0 in [0.5, 0.6]\n  t1 in [0.5, 0.6]\n  t2 in [0.5, 0.6]\n}\n"
    with pytest.raises(InfeasibleLocal):
        parse_network(three)
    with pytest.raises(InfeasibleLocal):
        parse_network("variable A { values = [a, ac] }\ncpt A {\n  a in [0.6, 0.2]\n}\n")


def test_vertex_entries():
    text = "variable T { values = [t0, t1, t2] }\ncpt T {\n  vertex [1/2, 1/2, 0]\n  vertex [0, 0, 1]\n}\n"
    net = parse_network(text)
    assert net.local_vertices("T", ()) == [(0, 0, 1), (F(1, 2), F(1, 2), 0)]


def test_parent_order_in_cpt_header_is_free():
    text = """variable A { values = [a, ac] }
variable B { values = [b, bc] }
variable C { values = [c, cc] }
edge A -> C
edge B -> C
cpt A {
  a in [0.5, 0.5]
}
cpt B {
  b in [0.5, 0.5]
}
cpt C | B, A {
  b, a: c in [0.1, 0.1]
  b, ac: c in [0.2, 0.2]
  bc, a: c in [0.3, 0.3]
  bc, ac: c in [0.4, 0.4]
}
"""
    net = parse_network(text)
    assert net.local_vertices("C", ("ac", "b")) == [(F(1, 5), F(4, 5))]


def test_round_trip_random():
    rng = random.Random(4)
    for _ in range(40):
        if rng.random() < 0.5:
            net = random_interval_network(rng, rng.randint(1, 4), positive=False, p_point=0.2)
        else:
            net = random_point_network(rng, rng.randint(1, 4))
        text = serialize_network(net)
        again = parse_network(text)
        assert again == net
        assert serialize_network(again) == text
