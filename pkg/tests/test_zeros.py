import dataclasses
import random
from fractions import Fraction as F

import pytest

from tuttezeros.algebra import Bracket, RatFn, UniPoly
from tuttezeros.errors import (
    DegenerateRatio,
    NotInteriorPoint,
    NotStarredRegion,
    PoleAt,
    PreconditionViolated,
    UnsupportedRegion,
)
from tuttezeros.forge import complementary_pair, make_pair
from tuttezeros.graphs import Edge, path, realize
from tuttezeros.tutte import chromatic, z_del_con, z_subset
from tuttezeros.zeros import (
    ZeroCertificate,
    assemble_f,
    certificate_problems,
    f_value,
    find_st,
    find_zero,
    find_zero_dual,
    prefactor,
    verify_certificate,
    witness_term,
)

Q = RatFn.q()


# -- exponent search -----------------------------------------------------------------

def test_find_st_cube_root_example():
    a, b, c = Q, RatFn.constant(F(1, 2)), RatFn.constant(3)
    wit = find_st(a, b, c, Bracket(2, F(5, 2)), s_parity=1, t_parity=0)
    assert (wit.s, wit.t) == (3, 2)
    h = lambda q: q**3 / 4 - 3  # noqa: E731
    assert h(F(2)) == -1 and h(F(5, 2)) == F(29, 32)


def test_find_st_degenerate_ratio():
    with pytest.raises(DegenerateRatio):
        find_st(RatFn.constant(4), RatFn.constant(F(1, 2)), Q, Bracket(2, 3))


def test_find_st_skips_identically_zero_h():
    # a b^2 = 4/q = c, so h vanishes identically at (1, 2) and carries no sign change
    a, b, c = Q, 2 / Q, 4 / Q
    wit = find_st(a, b, c, Bracket(F(5, 2), 3))
    assert (wit.s, wit.t) != (1, 2)
    h = [a(x) ** wit.s * b(x) ** wit.t - c(x) for x in (wit.bracket.lo, wit.bracket.hi)]
    assert h[0] * h[1] < 0


def test_find_st_precondition():
    with pytest.raises(PreconditionViolated):
        find_st(Q, RatFn.constant(F(1, 2)), RatFn.constant(3), Bracket(F(1, 2), 2))


@pytest.mark.parametrize("sp, tp", [(0, None), (1, None), (None, 0), (None, 1), (1, 1), (0, 0)])
def test_find_st_parities(sp, tp):
    a, b, c = Q, RatFn.constant(F(2, 3)), RatFn.constant(2)
    wit = find_st(a, b, c, Bracket(3, F(7, 2)), sp, tp)
    assert sp is None or wit.s % 2 == sp
    assert tp is None or wit.t % 2 == tp


# -- the factor f ----------------------------------------------------------------------

def test_assemble_f_example():
    pair = make_pair(Edge(F(-3)), path(4, Edge(F(-3))), F(-1), F(-3))
    f = assemble_f(pair, 1, 1, F(-3))
    assert f(-1) == F(-538, 175)
    expect = Q - 1 + (-2) * (1 + Q / ((1 + Q / -3) ** 4 - 1))
    assert f == expect
    # (1 - q/3)^4 = 1 at q = 6, a pole of v_P4
    with pytest.raises(PoleAt):
        f(6)
    with pytest.raises(ValueError):
        assemble_f(pair, 0, 1, F(-3))


def test_factorization_identity():
    pair = complementary_pair(F(-1), F(-3))
    rng = random.Random(11)
    a, b, v = pair.a, pair.b, F(-3)
    for s, t in ((1, 1), (2, 3), (3, 1)):
        g, _ = realize(witness_term(a, b, s, t), v)
        assert g.edge_count <= 24
        for _ in range(10):
            q = F(rng.choice([-7, -5, -3, -1, 1, 3, 5, 7, 9]), rng.choice([2, 3, 4, 5]))
            product = q * prefactor(a, q, v) ** s * prefactor(b, q, v) ** t * f_value(a, b, s, t, v, q)
            assert product == z_subset(g, q)


# -- certificates ----------------------------------------------------------------------

@pytest.fixture(scope="module")
def region_i_cert():
    return find_zero(F(-1), F(-3), F(1, 10))


def test_region_i_certificate(region_i_cert):
    c = region_i_cert
    assert F(-11, 10) < c.lo < c.hi < F(-9, 10)
    assert c.a_term == Edge(F(-3)) and c.b_term == path(3, Edge(F(-3)))
    assert c.sign_lo * c.sign_hi == -1
    assert verify_certificate(c) and verify_certificate(c, exhaustive=True)
    g, _ = realize(c.witness, c.v0)
    if g.edge_count <= 24:
        assert z_del_con(g, c.lo) * z_del_con(g, c.hi) < 0


def test_tampered_certificates_fail(region_i_cert):
    c = region_i_cert
    swapped = dataclasses.replace(c, bracket=(c.hi, c.lo))
    assert not verify_certificate(swapped)
    bumped = dataclasses.replace(c, s=c.s + 1)
    assert not verify_certificate(bumped)
    assert "f does not change sign on the bracket" in certificate_problems(bumped)
    reweighted = dataclasses.replace(c, a_term=Edge(F(-2)))
    assert not verify_certificate(reweighted)


def test_json_round_trip(region_i_cert):
    c = region_i_cert
    again = ZeroCertificate.from_json(c.to_json())
    assert again == c
    assert again.to_json() == c.to_json()


@pytest.mark.parametrize("q0, v0, eps", [
    (F(-1), F(-3), F(1, 10)),
    (F(1, 2), F(-3), F(1, 20)),
    (F(3, 2), F(-3), F(1, 10)),
    (F(5, 2), F(-3), F(1, 10)),
    (F(3), F(-5, 2), F(1, 10)),
    (F(5, 2), F(-3, 2), F(1, 10)),
    (F(1, 2), F(-39, 20), F(1, 10)),
    (F(3, 2), F(-3, 2), F(1, 100)),
])
def test_eps_contract(q0, v0, eps):
    c = find_zero(q0, v0, eps)
    assert c.hi - c.lo + abs((c.lo + c.hi) / 2 - q0) <= c.achieved_distance <= eps
    assert verify_certificate(c)


def test_parity_contract():
    # below q = 1 the even exponent sits on the A- side
    c = find_zero(F(1, 2), F(-3), F(1, 20))
    assert c.s % 2 == 0
    c = find_zero(F(3, 2), F(-3), F(1, 10))
    assert c.t % 2 == 1


def test_mirror_case_region_vi():
    c = find_zero(F(5, 2), F(-3, 2), F(1, 10))
    assert c.b_term == Edge(F(-3, 2))
    pair = complementary_pair(F(5, 2), F(-3, 2))
    assert pair.case == "A+B-"
    assert complementary_pair(F(-1), F(-3)).case == "A-B+"
    assert verify_certificate(c, exhaustive=True)


def test_chromatic_zero_near_thirteen_tenths():
    # v = -1 separates IX from IX*, so the pair comes from the generic closure search
    c = find_zero(F(13, 10), F(-1), F(1, 10))
    assert c.region == "Boundary" and c.working_target == (F(13, 10), F(-1))
    assert verify_certificate(c)
    g, _ = realize(c.witness, c.v0)
    assert chromatic(g, c.lo) * chromatic(g, c.hi) < 0


def test_q_equal_one_is_retargeted():
    c = find_zero(F(1), F(-19, 10), F(1, 10))
    assert c.working_target[0] != 1 and verify_certificate(c)


def test_rejections():
    with pytest.raises(UnsupportedRegion):
        find_zero(F(5), F(-6), F(1, 10))
    with pytest.raises(UnsupportedRegion):
        find_zero(F(3), F(1), F(1, 10))
    with pytest.raises(ValueError):
        find_zero(F(-1), F(-3), F(0))


# -- dual certificates ---------------------------------------------------------------

@pytest.mark.parametrize("q0, v0, primal", [
    (F(-1), F(1, 4), (F(-1), F(-4))),
    (F(7, 2), F(-3, 2), (F(7, 2), F(-7, 3))),
])
def test_dual_certificates(q0, v0, primal):
    c = find_zero_dual(q0, v0, F(1, 10))
    assert c.dual and c.v0 == primal[1] and c.working_target == primal
    assert verify_certificate(c)
    # the dual zero (q1, q1 v0 / q0) lies within eps in both coordinates
    for q1 in (c.lo, c.hi):
        assert abs(q1 - q0) <= F(1, 10) and abs(q1 / c.v0 - v0) <= F(1, 10)
    assert find_zero(q0, v0, F(1, 10)) == c


def test_dual_needs_starred_region():
    with pytest.raises(NotStarredRegion):
        find_zero_dual(F(3, 2), F(-3, 5) - F(1, 2), F(1, 10))
    with pytest.raises(NotStarredRegion):
        find_zero_dual(F(-1), F(-3), F(1, 10))


def test_dual_certificate_tamper():
    c = find_zero_dual(F(-1), F(1, 4), F(1, 10))
    broken = dataclasses.replace(c, dual_b_term=c.dual_a_term)
    assert "dual terms are not the structural duals of the gadgets" in certificate_problems(broken)


def test_boundary_points():
    # (2, -3) sits where regions III, IV, V meet, so a nearby interior point exists
    c = find_zero(F(2), F(-3), F(1, 10))
    assert c.working_target[0] != 2
    with pytest.raises(NotInteriorPoint):
        find_zero(F(11, 10), F(-2), F(1, 100))


def test_f_is_polynomial_free_of_poles_on_window():
    c = find_zero(F(-1), F(-3), F(1, 10))
    f = assemble_f(complementary_pair(F(-1), F(-3)), c.s, c.t, F(-3))
    assert isinstance(f.den, UniPoly)
    assert f(c.lo) * f(c.hi) < 0
