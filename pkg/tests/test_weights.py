from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tuttezeros.algebra import Bracket, Interval, RatFn, UniPoly
from tuttezeros.errors import IdenticallyDegenerate, NotTwoTerminalGraph, PoleAt
from tuttezeros.graphs import (
    Edge,
    Parallel,
    Series,
    complete_minus_edge,
    dipole,
    is_dipole,
    is_two_terminal_graph,
    network,
    path,
    petersen_minus_edge,
)
from tuttezeros.tutte import z_split
from tuttezeros.weights import (
    GadgetType,
    check_lemma3,
    classify_type,
    double_parallel,
    effective_weight,
    effective_weight_at,
    effective_weight_over,
    term_type,
    type_persists,
)

Q = RatFn.q()


def raw_weight(t, v0) -> RatFn:
    """q z_same / z_diff of the realized graph, straight from subset expansion."""
    sp = z_split(network(t, v0), v0)
    return RatFn(sp.z_same * UniPoly.q(), sp.z_diff)


def sp_terms(v):
    leaf = st.just(Edge(v))
    return st.recursive(
        leaf,
        lambda inner: st.one_of(
            st.lists(inner, min_size=2, max_size=3).map(lambda ps: Series(*ps)),
            st.lists(inner, min_size=2, max_size=3).map(lambda ps: Parallel(*ps)),
        ),
        max_leaves=8,
    )


def test_weight_examples():
    assert effective_weight(Parallel(Edge(-3), Edge(-3)), -3) == RatFn.constant(3)
    p4 = path(4, Edge(-3))
    assert effective_weight_at(p4, -1, -3) == F(-81, 175)
    assert effective_weight(p4, -3)(-1) == F(-81, 175)
    j3 = effective_weight(path(3, Edge(-1)), -1)
    assert j3 == RatFn(UniPoly([-1]), UniPoly([3, -3, 1]))


def test_type_examples():
    assert term_type(Edge(-3), F(17, 5), -3) == GadgetType.A_MINUS
    assert classify_type(effective_weight(Parallel(Edge(-3), Edge(-3)), -3), 11) == GadgetType.A_PLUS
    assert classify_type(effective_weight(path(4, Edge(-3)), -3), -1) == GadgetType.B_PLUS
    assert 1 + effective_weight_at(path(4, Edge(-3)), -1, -3) == F(94, 175)
    assert classify_type(F(-1)) == GadgetType.BOUNDARY
    with pytest.raises(PoleAt):
        classify_type(RatFn(UniPoly([1]), UniPoly([-2, 1])), 2)


@pytest.mark.parametrize("w, expect", [(F(-3), F(3)), (F(-3, 2), F(-3, 4)), (F(-1), F(-1))])
def test_double_parallel(w, expect):
    t = double_parallel(Edge(w))
    assert effective_weight_at(t, F(5, 2), w) == expect == w * (w + 2)


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("v", [F(-3), F(-1, 2), F(-39, 20), F(2)])
def test_closed_forms_match_raw_split(n, v):
    assert effective_weight(dipole(n, Edge(v)), v) == RatFn.constant((1 + v) ** n - 1)
    expect = Q / ((1 + Q / v) ** n - 1)
    assert effective_weight(path(n, Edge(v)), v) == expect == raw_weight(path(n, Edge(v)), v)


@settings(max_examples=60, deadline=None)
@given(sp_terms(F(-5, 2)))
def test_composition_matches_raw_split(t):
    v = F(-5, 2)
    if not is_two_terminal_graph(t):
        return
    try:
        w = effective_weight(t, v)
    except IdenticallyDegenerate:
        return
    assert w == raw_weight(t, v)


@pytest.mark.parametrize("s", range(1, 6))
def test_series_dipole_identity(s):
    v = F(-5, 2)
    f = Parallel(Edge(v), Edge(v))
    g = Series(*([f] * s + [Edge(v)]))
    vf, vg = effective_weight(f, v), effective_weight(g, v)
    assert 1 + Q / vg == (1 + Q / vf) ** s * (1 + Q / v)


def test_opaque_leaves_match_raw_split():
    v = F(-3)
    for leaf in (petersen_minus_edge(), complete_minus_edge(5), complete_minus_edge(6)):
        assert effective_weight(leaf, v) == raw_weight(leaf, v)


def test_subdivided_leaf_weight():
    v = F(-5)
    unit = path(2, Edge(v))
    t = petersen_minus_edge().subdivided(unit)
    symbolic = effective_weight(t, v)
    for q in (F(5, 2), F(13, 4)):
        wu = effective_weight_at(unit, q, v)
        # a subdivided leaf behaves like the bare leaf at the unit's weight
        assert symbolic(q) == effective_weight_at(t, q, v) == effective_weight_at(petersen_minus_edge(), q, wu)


def test_large_complete_graph_leaf():
    leaf = complete_minus_edge(12, max_n=12)
    v = F(-1, 2)
    w = effective_weight(leaf, v)
    assert w(F(61, 20)) == effective_weight_at(leaf, F(61, 20), v)
    assert term_type(leaf, F(61, 20), v) == GadgetType.B_MINUS


def test_identically_degenerate_series():
    with pytest.raises(IdenticallyDegenerate):
        effective_weight(Series(Edge(0), Edge(-3)), -3)
    with pytest.raises(PoleAt):
        effective_weight_at(Series(Edge(0), Edge(-3)), 2, -3)


def test_lemma3_examples():
    threshold, nonconstant = check_lemma3(path(2, Edge(-3)), -3)
    assert nonconstant
    for k in (1, 10, 100):
        assert 1 + effective_weight_at(path(2, Edge(-3)), threshold + k, -3) > 0
    with pytest.raises(NotTwoTerminalGraph):
        check_lemma3(Parallel(Edge(-3), Edge(-3)), -3)
    threshold, nonconstant = check_lemma3(petersen_minus_edge(), -3)
    assert nonconstant and threshold < 10**6


@settings(max_examples=40, deadline=None)
@given(sp_terms(F(-3)))
def test_lemma3_on_generated_terms(t):
    v = F(-3)
    if is_dipole(t) or not is_two_terminal_graph(t):
        return
    try:
        threshold, nonconstant = check_lemma3(t, v)
    except IdenticallyDegenerate:
        return
    assert nonconstant
    for k in (1, 10, 100):
        assert 1 + effective_weight_at(t, threshold + k, v) > 0


# -- enclosures over windows -------------------------------------------------------

@pytest.mark.parametrize("term, v, window", [
    (path(4, Edge(-3)), F(-3), Bracket(F(-11, 10), F(-9, 10))),
    (petersen_minus_edge(), F(-3), Bracket(F(49, 20), F(51, 20))),
    (petersen_minus_edge().subdivided(path(3, Edge(-5))), F(-5), Bracket(F(5, 2), F(21, 8))),
    (Parallel(complete_minus_edge(5), Edge(F(-9, 10))), F(-9, 10), Bracket(F(12, 5), F(13, 5))),
])
def test_enclosure_contains_point_values(term, v, window):
    enc = effective_weight_over(term, window, v)
    for k in range(9):
        q = window.lo + window.width * k / 8
        assert enc.lo <= effective_weight_at(term, q, v) <= enc.hi


def test_type_persists():
    p4 = path(4, Edge(-3))
    assert type_persists(p4, GadgetType.B_PLUS, Bracket(F(-11, 10), F(-9, 10)), -3)
    assert not type_persists(p4, GadgetType.B_MINUS, Bracket(F(-11, 10), F(-9, 10)), -3)
    # P_2 changes type across its pole at q = 3/2 ... (1 - q/3)^2 = 1 at q = 6
    assert not type_persists(path(2, Edge(-3)), GadgetType.B_PLUS, Bracket(F(5), F(7)), -3)


def test_interval_point_enclosure():
    assert effective_weight_over(Edge(-3), Interval(F(1), F(2)), -3).lo == -3
