from fractions import Fraction as F

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tuttezeros.errors import BudgetExceeded, NotSeriesParallel, NotTwoTerminalGraph
from tuttezeros.graphs import (
    Edge,
    Multigraph,
    Opaque,
    Parallel,
    Series,
    TwoTerminalGraph,
    closure,
    complete_minus_edge,
    dual_term,
    edge_count,
    is_dipole,
    is_planar,
    is_two_terminal_graph,
    network,
    parse_term,
    path,
    petersen_minus_edge,
    realize,
    vertex_count,
)

V = F(-3)


def sp_terms(max_leaves=6):
    weights = st.sampled_from([F(-3), F(-1, 2), F(2), F(-39, 20)])
    leaf = weights.map(Edge)
    return st.recursive(
        leaf,
        lambda inner: st.one_of(
            st.lists(inner, min_size=2, max_size=3).map(lambda ps: Series(*ps)),
            st.lists(inner, min_size=2, max_size=3).map(lambda ps: Parallel(*ps)),
        ),
        max_leaves=max_leaves,
    )


def to_nx(g: Multigraph) -> nx.MultiGraph:
    h = nx.MultiGraph()
    h.add_nodes_from(range(g.vertex_count))
    h.add_edges_from((u, v) for u, v, _ in g.edges)
    return h


def test_realize_edge():
    g, (x, y) = realize(Edge(V))
    assert g.vertex_count == 2 and g.edges == ((0, 1, V),)
    assert (x, y) == (0, 1)


def test_realize_path_and_dipole():
    g, _ = realize(Series(*[Edge(V)] * 4))
    assert (g.vertex_count, g.edge_count) == (5, 4)
    assert nx.is_tree(to_nx(g))
    g, _ = realize(Parallel(Edge(V), Edge(V)))
    assert g.vertex_count == 2 and g.edge_count == 2


@settings(max_examples=80)
@given(sp_terms())
def test_counts_match_realization(t):
    g, (x, y) = realize(t)
    assert g.vertex_count == vertex_count(t)
    assert g.edge_count == edge_count(t)
    assert nx.is_connected(to_nx(g))
    assert g.adjacent(x, y) != is_two_terminal_graph(t)
    if is_dipole(t):
        assert g.vertex_count == 2


@settings(max_examples=80)
@given(sp_terms())
def test_serialization_round_trip(t):
    assert parse_term(str(t)) == t
    assert realize(parse_term(str(t)))[0].serialize() == realize(t)[0].serialize()


def test_serialization_examples():
    t = parse_term("P(E(-3),S(E(-3),E(-3),E(-3),E(-3)))")
    assert isinstance(t, Parallel) and isinstance(t.parts[1], Series)
    assert str(t) == "P(E(-3),S(E(-3),E(-3),E(-3),E(-3)))"
    assert str(parse_term("KnMinusEdge(6)")) == "KnMinusEdge(6)"
    assert str(parse_term("PetersenMinusEdge[S(E(-5),E(-5))]")) == "PetersenMinusEdge[S(E(-5),E(-5))]"
    with pytest.raises(ValueError):
        parse_term("S(E(-3)")
    with pytest.raises(ValueError):
        parse_term("Q(E(1),E(1))")


def test_petersen_minus_edge():
    p = petersen_minus_edge()
    g, (x, y) = realize(p)
    assert (g.vertex_count, g.edge_count) == (10, 14)
    assert not g.adjacent(x, y)
    degrees = [g.degree(i) for i in range(10)]
    assert degrees[x] == degrees[y] == 2
    assert all(d == 3 for i, d in enumerate(degrees) if i not in (x, y))
    assert g.girth() == 5 == nx.girth(nx.Graph(to_nx(g)))
    restored = to_nx(g)
    restored.add_edge(x, y)
    assert nx.is_isomorphic(nx.Graph(restored), nx.petersen_graph())
    assert not p.planar and not nx.check_planarity(nx.Graph(restored))[0]


def test_complete_minus_edge():
    g, _ = realize(complete_minus_edge(3))
    assert (g.vertex_count, g.edge_count) == (3, 2)
    g, (x, y) = realize(complete_minus_edge(4))
    assert (g.vertex_count, g.edge_count) == (4, 5) and not g.adjacent(x, y)
    with pytest.raises(BudgetExceeded):
        complete_minus_edge(8)
    assert complete_minus_edge(4).planar and not complete_minus_edge(5).planar
    for n in range(3, 8):
        h = nx.Graph(to_nx(realize(complete_minus_edge(n))[0]))
        h.add_edge(0, 1)
        assert nx.check_planarity(h)[0] == complete_minus_edge(n).planar


def test_dual_term():
    e = Edge(V)
    assert dual_term(Series(e, e)) == Parallel(e, e)
    assert dual_term(Parallel(e, e, e)) == Series(e, e, e)
    with pytest.raises(NotSeriesParallel):
        dual_term(Series(e, petersen_minus_edge()))


@settings(max_examples=60)
@given(sp_terms())
def test_dual_closure_is_planar_dual(t):
    # realize(t) and closure(dual_term(t)) are planar duals: Euler gives n + n* = m + 2
    g, _ = realize(t)
    d = closure(dual_term(t))
    assert g.edge_count == d.edge_count
    assert g.vertex_count + d.vertex_count == g.edge_count + 2
    assert dual_term(dual_term(t)) == t
    assert nx.check_planarity(nx.Graph(to_nx(g)))[0]


def test_two_terminal_checks():
    with pytest.raises(NotTwoTerminalGraph):
        TwoTerminalGraph(Multigraph(2, [(0, 1, 1)]), 0, 1)
    with pytest.raises(NotTwoTerminalGraph):
        TwoTerminalGraph(Multigraph(3, [(0, 2, 1)]), 0, 1)
    with pytest.raises(NotTwoTerminalGraph):
        TwoTerminalGraph(Multigraph(3, [(0, 2, 1), (2, 1, 1), (2, 2, 1)]), 0, 1)
    assert isinstance(network(path(3, Edge(V))), TwoTerminalGraph)


def test_subdivided_leaf_realization():
    unit = Series(Edge(V), Edge(V))
    t = petersen_minus_edge().subdivided(unit)
    g, _ = realize(t)
    assert g.edge_count == 28 == edge_count(t)
    assert g.vertex_count == 24 == vertex_count(t)
    assert not is_planar(t)
    assert isinstance(t, Opaque) and t.leaf_name == "PetersenMinusEdge"


def test_realize_is_deterministic():
    t = Parallel(Series(Edge(V), complete_minus_edge(5)), Edge(F(1, 2)))
    assert realize(t)[0].serialize() == realize(parse_term(str(t)))[0].serialize()
