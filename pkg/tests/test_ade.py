import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logcy.ade import (
    NotADE,
    SingularityLabel,
    classify_ade,
    dynkin_graph,
    format_labels,
    is_a_type_only,
    parse_labels,
    singular_points,
    singularity_labels,
    sort_labels,
)
from logcy.surface import CenterSpec, CurveRecord, blow_up, contract, plane

CONNECTED_ON_EIGHT = 11117


def lab(text):
    return SingularityLabel(text[0], int(text[1:]))


def test_classify_examples():
    assert classify_ade(nx.MultiGraph(nx.path_graph(4))) == [lab("A4")]
    assert classify_ade(nx.MultiGraph(dynkin_graph("D", 5))) == [lab("D5")]
    assert classify_ade(nx.MultiGraph(dynkin_graph("E", 8))) == [lab("E8")]
    two = nx.MultiGraph(nx.disjoint_union(nx.path_graph(2), nx.path_graph(1)))
    assert classify_ade(two) == [lab("A2"), lab("A1")]
    assert classify_ade(nx.MultiGraph()) == []


@pytest.mark.parametrize("g", [nx.cycle_graph(3), nx.star_graph(4), nx.path_graph(3)])
def test_classify_rejects(g):
    g = nx.MultiGraph(g)
    if g.number_of_nodes() == 3 and g.number_of_edges() == 2:
        g.nodes[1]["square"] = -3
    with pytest.raises(NotADE):
        classify_ade(g)


def test_double_edge_and_loop_rejected():
    g = nx.MultiGraph([(0, 1), (0, 1)])
    with pytest.raises(NotADE):
        classify_ade(g)
    g = nx.MultiGraph([(0, 0)])
    with pytest.raises(NotADE):
        classify_ade(g)


def test_labels_format_and_parse():
    labels = [lab("A1"), lab("D4"), lab("A1"), lab("A1"), lab("E6"), lab("A3")]
    assert format_labels(labels) == "E6+D4+A3+3A1"
    assert parse_labels("E6+D4+A3+3A1") == sort_labels(labels)
    assert parse_labels("A4+A4") == parse_labels("2A4")
    assert format_labels(parse_labels("A2+A2+A2")) == "3A2"
    assert format_labels([]) == "none" and parse_labels("none") == []
    for bad in ("E9", "D3", "A0", "X1", "0A1", "A"):
        with pytest.raises(ValueError):
            parse_labels(bad)


def test_singular_points_on_a_flex_chain():
    s = plane([CurveRecord.make("C", 3, nodes=["N"]), CurveRecord.make("L", 1, {"P1": 1, "P2": 1})])
    for i in range(1, 5):
        s = blow_up(s, CenterSpec(f"P{i}", f"P{i - 1}" if i > 1 else None, frozenset({"C"})))
    assert singularity_labels(contract(s, ["E1", "E2", "E3"])) == [lab("A3")]
    # a (-1)-curve at the end of the chain is blown down first, leaving nothing singular
    smooth = contract(s, ["E1", "E2", "E3", "E4"])
    pts = singular_points(smooth)
    assert [p.label for p in pts] == [None]
    assert is_a_type_only(smooth)


def test_dynkin_templates():
    for kind, rank in (("A", 5), ("D", 6), ("E", 7)):
        g = dynkin_graph(kind, rank)
        assert g.number_of_nodes() == rank and nx.is_tree(g)
    with pytest.raises(ValueError):
        dynkin_graph("E", 9)


# Oracle: a graph of (-2)-curves is ADE exactly when -2I + A is negative definite,
# and then each component is isomorphic to the template of its label.

def _oracle(adj):
    n = adj.shape[0]
    definite = np.linalg.eigvalsh(-2 * np.eye(n) + adj).max() < -1e-9
    return definite


def _check_against_oracle(adj):
    g = nx.MultiGraph(nx.from_numpy_array(adj))
    definite = _oracle(adj)
    try:
        labels = classify_ade(g)
    except NotADE:
        assert not definite
        return
    assert definite
    assert sum(x.rank for x in labels) == g.number_of_nodes()
    comps = sorted((g.subgraph(c) for c in nx.connected_components(g)),
                   key=lambda h: h.number_of_nodes())
    templates = sorted((dynkin_graph(x.kind, x.rank) for x in labels),
                       key=lambda h: h.number_of_nodes())
    matched = [False] * len(templates)
    for h in comps:
        for i, t in enumerate(templates):
            if not matched[i] and nx.is_isomorphic(nx.Graph(h), t):
                matched[i] = True
                break
        else:
            raise AssertionError(f"no template for component with {h.number_of_nodes()} nodes")


def test_atlas_up_to_seven_vertices():
    graphs = nx.graph_atlas_g()[1:]
    assert len(graphs) == 1252
    for g in graphs:
        _check_against_oracle(nx.to_numpy_array(g, nodelist=sorted(g.nodes())))


def _connected_graphs_on_eight():
    """One representative per isomorphism class, by extending connected 7-vertex graphs."""
    seven = [g for g in nx.graph_atlas_g() if g.number_of_nodes() == 7 and nx.is_connected(g)]
    subsets = np.array([[(m >> i) & 1 for i in range(7)] for m in range(1, 128)])
    base = np.array([nx.to_numpy_array(g, nodelist=range(7)) for g in seven])
    a = np.zeros((len(seven), 127, 8, 8))
    a[:, :, :7, :7] = base[:, None]
    a[:, :, 7, :7] = subsets[None]
    a[:, :, :7, 7] = subsets[None]
    a = a.reshape(-1, 8, 8)
    deg = a.sum(axis=2)
    lap = deg[:, :, None] * np.eye(8)[None] - a
    keys = np.concatenate([np.rint(np.linalg.eigvalsh(a) * 1e6).astype(np.int64),
                           np.rint(np.linalg.eigvalsh(lap) * 1e6).astype(np.int64),
                           np.sort(deg, axis=1).astype(np.int64)], axis=1)
    _, idx = np.unique(keys, axis=0, return_index=True)
    return a[idx]


def test_connected_graphs_on_eight_vertices():
    reps = _connected_graphs_on_eight()
    # every connected 8-vertex graph has a spanning tree, so deleting a leaf gives a
    # connected 7-vertex graph; the spectral key happens to separate all classes
    assert len(reps) == CONNECTED_ON_EIGHT
    ade = 0
    for adj in reps:
        _check_against_oracle(adj)
        ade += bool(_oracle(adj))
    assert ade == 3   # A8, D8, E8


@settings(max_examples=1000)
@given(st.integers(min_value=1, max_value=10).flatmap(
    lambda n: st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=12)
    .map(lambda edges: (n, edges))))
def test_random_graphs_against_oracle(data):
    n, edges = data
    adj = np.zeros((n, n))
    for u, v in edges:
        if u != v:
            adj[u, v] = adj[v, u] = 1
    _check_against_oracle(adj)


labels_st = st.lists(st.one_of(
    st.integers(1, 9).map(lambda r: SingularityLabel("A", r)),
    st.integers(4, 9).map(lambda r: SingularityLabel("D", r)),
    st.sampled_from([6, 7, 8]).map(lambda r: SingularityLabel("E", r))), max_size=6)


@settings(max_examples=1000)
@given(labels_st)
def test_format_parse_round_trip(labels):
    text = format_labels(labels)
    assert parse_labels(text) == sort_labels(labels)
    assert format_labels(parse_labels(text)) == text
