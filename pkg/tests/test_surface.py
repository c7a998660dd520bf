import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logcy.lattice import DivisorClass, intersect
from logcy.surface import (
    CenterSpec,
    CurveRecord,
    NotContractible,
    SurfaceError,
    blow_up,
    contract,
    dual_graph,
    plane,
    strict_transform_class,
    validate_configuration,
)


def flex_surface(k):
    """Nodal cubic with k centers chained over a flex, plus its tangent line."""
    s = plane([CurveRecord.make("C", 3, nodes=["N"]),
               CurveRecord.make("L", 1, {"P1": 1, "P2": 1, "P3": 1})])
    for i in range(1, k + 1):
        s = blow_up(s, CenterSpec(f"P{i}", f"P{i - 1}" if i > 1 else None, frozenset({"C"})))
    return s


def test_blow_up_proper_point():
    s = blow_up(plane(), CenterSpec("P"))
    assert s.rank == 2
    assert s.pair("E1", "E1") == -1


def test_blow_up_node():
    s = blow_up(plane([CurveRecord.make("C", 3, nodes=["N"])]), CenterSpec("N"))
    assert s.class_of("C") == DivisorClass(3, (2,))
    assert s.pair("C", "C") == 5


def test_three_centers_over_a_flex():
    s = flex_surface(3)
    assert s.pair("E1", "E1") == -2
    assert s.pair("E2", "E2") == -2
    assert s.pair("E3", "E3") == -1
    assert s.class_of("C") == DivisorClass(3, (1, 1, 1))
    assert s.pair("C", "C") == 6


def test_strict_transform_examples():
    s = plane([CurveRecord.make("M", 1)])
    for name in "ABC":
        s = blow_up(s, CenterSpec(name))
    assert strict_transform_class(s, "M") == DivisorClass(1, (0, 0, 0))
    s8 = flex_surface(8)
    assert strict_transform_class(s8, "C") == DivisorClass(3, (1,) * 8)
    assert s8.pair("C", "C") == 1


def test_conic_with_six_multiplicities():
    s = plane([CurveRecord.make("Q", 2)])
    parents = [None, None, "P2", None, "P3", "P3b"]
    names = ["P1", "P2", "P2b", "P3", "P3b", "P3c"]
    for name, parent in zip(names, parents):
        s = blow_up(s, CenterSpec(name, parent, frozenset({"Q"})))
    assert s.pair("Q", "Q") == 4 - 6


def test_contract_examples():
    s = blow_up(plane(), CenterSpec("P"))
    assert contract(s, ["E1"]).rank == 1
    chain = flex_surface(3)
    t = contract(chain, ["E1", "E2"])
    assert t.gram(["E1", "E2"]) == [[-2, 1], [1, -2]]
    assert t.rank == 2


def test_contract_cycle_of_minus_two_curves():
    # a triangle of lines with two points blown up on each side is a (-1) triangle;
    # three points per side gives a cycle of (-2)-curves, which is not negative definite
    s = plane([CurveRecord.make("L1", 1), CurveRecord.make("L2", 1), CurveRecord.make("L3", 1)])
    for name, on in (("A", {"L1"}), ("B", {"L1"}), ("C", {"L2"}), ("D", {"L2"}),
                     ("E", {"L3"}), ("F", {"L3"})):
        s = blow_up(s, CenterSpec(name, None, frozenset(on)))
    assert all(s.pair(x, x) == -1 for x in ("L1", "L2", "L3"))
    s2 = plane([CurveRecord.make("L1", 1), CurveRecord.make("L2", 1), CurveRecord.make("L3", 1)])
    for i, on in enumerate(["L1", "L1", "L1", "L2", "L2", "L2", "L3", "L3", "L3"]):
        s2 = blow_up(s2, CenterSpec(f"X{i}", None, frozenset({on})))
    assert s2.gram(["L1", "L2", "L3"]) == [[-2, 1, 1], [1, -2, 1], [1, 1, -2]]
    with pytest.raises(NotContractible):
        contract(s2, ["L1", "L2", "L3"])


def test_contract_rejects():
    s = blow_up(plane(), CenterSpec("P"))
    with pytest.raises(SurfaceError):
        contract(s, ["E7"])
    with pytest.raises(SurfaceError):
        contract(contract(s, ["E1"]), ["E1"])
    with pytest.raises(NotContractible):
        contract(plane([CurveRecord.make("L", 1)]), ["L"])


def test_blow_up_rejects():
    s = blow_up(plane([CurveRecord.make("L", 1)]), CenterSpec("P", None, frozenset({"L"})))
    with pytest.raises(SurfaceError):
        blow_up(s, CenterSpec("P"))
    with pytest.raises(SurfaceError):
        blow_up(s, CenterSpec("Q", "nowhere"))
    with pytest.raises(SurfaceError):
        blow_up(s, CenterSpec("Q", None, frozenset({"M"})))
    t = contract(s, ["E1"])
    with pytest.raises(SurfaceError):
        blow_up(t, CenterSpec("Q", "P"))


def test_validation_examples():
    fine = flex_surface(8)
    assert validate_configuration(fine).ok
    bad_genus = plane([CurveRecord.make("L", 1, {"P": 2})])
    bad_genus = blow_up(bad_genus, CenterSpec("P"))
    kinds = {v.kind for v in validate_configuration(bad_genus).violations}
    assert "genus" in kinds
    two = plane([CurveRecord.make("A", 1, {"P": 1, "Q": 1}), CurveRecord.make("B", 1, {"P": 1, "Q": 1})])
    two = blow_up(blow_up(two, CenterSpec("P")), CenterSpec("Q"))
    report = validate_configuration(two)
    assert any(v.kind == "intersection" and v.subject == "A.B" for v in report.violations)
    assert validate_configuration(two) == report


def test_validation_proximity_inequality():
    s = plane([CurveRecord.make("L", 1, {"P": 1, "Q": 2})])
    s = blow_up(blow_up(s, CenterSpec("P")), CenterSpec("Q", "P"))
    msgs = [v for v in validate_configuration(s).violations if v.kind == "proximity"]
    assert msgs and msgs[0].subject == "L"


def test_dual_graph_examples():
    s = flex_surface(3)
    g = dual_graph(s, ["E1", "E2"])
    assert nx.is_isomorphic(nx.Graph(g), nx.path_graph(2))
    tri = plane([CurveRecord.make(f"L{i}", 1) for i in range(3)])
    assert nx.is_isomorphic(nx.Graph(dual_graph(tri, ["L0", "L1", "L2"])), nx.cycle_graph(3))
    cubic = plane([CurveRecord.make("C", 3, nodes=["N"])])
    g = dual_graph(cubic, ["C"])
    assert g.number_of_nodes() == 1 and list(g.edges()) == [("C", "C")]
    g2 = dual_graph(blow_up(cubic, CenterSpec("N")), ["C"])
    assert g2.number_of_edges() == 0


@settings(max_examples=1000)
@given(st.lists(st.integers(min_value=-1, max_value=20), min_size=1, max_size=9))
def test_lattice_stays_unimodular_after_blowups(parents):
    s = plane()
    for i, p in enumerate(parents):
        parent = f"c{p}" if 0 <= p < i else None
        s = blow_up(s, CenterSpec(f"c{i}", parent))
    n = s.n
    h = DivisorClass.line(n)
    assert intersect(h, h) == 1
    for i in range(n):
        e = DivisorClass.exceptional(i, n)
        assert intersect(e, e) == -1 and intersect(e, h) == 0
    # a strict exceptional curve has square -1 minus the number of centers proximate to it
    for i in range(n):
        kids = len(s.proximate_centers(i))
        assert s.pair(f"E{i + 1}", f"E{i + 1}") == -1 - kids
    assert validate_configuration(s).ok


@settings(max_examples=1000)
@given(st.integers(min_value=1, max_value=8), st.data())
def test_contract_rank_bookkeeping(k, data):
    s = flex_surface(k)
    chosen = data.draw(st.lists(st.sampled_from([f"E{i}" for i in range(1, k + 1)]),
                                unique=True, max_size=k))
    try:
        t = contract(s, chosen)
    except NotContractible:
        return
    assert t.rank == s.rank - len(chosen)
