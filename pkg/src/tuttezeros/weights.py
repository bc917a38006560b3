"""Effective weights of gadget terms and the four gadget types.

For a two-terminal graph F the effective weight v_F is the weight of a single
edge that can stand in for F.  It composes through terms:

    parallel:  1 + v   = prod (1 + v_i)
    series:    1 + q/v = prod (1 + q/v_i)
    leaf F:    1 + v_F = (q z_same + z_diff) / z_diff,  i.e.  v_F = q z_same / z_diff

The same composition code runs over exact numbers at a fixed q (for searches)
and over rational functions of q (for reasoning on whole intervals).
"""

from __future__ import annotations

import enum
from math import comb
from fractions import Fraction
from typing import Union

from .algebra import (
    Bracket,
    Interval,
    RatFn,
    UniPoly,
    as_rational,
    isolate_real_roots,
    real_root_bound,
)
from .errors import IdenticallyDegenerate, NotTwoTerminalGraph, PoleAt
from .graphs import Edge, GadgetTerm, Opaque, Parallel, is_dipole, is_two_terminal_graph
from .tutte import _closed_form, _leaf_values, kn_minus_edge_split, leaf_tables

EffectiveWeight = RatFn


class GadgetType(enum.Enum):
    A_PLUS = "A+"
    A_MINUS = "A-"
    B_PLUS = "B+"
    B_MINUS = "B-"
    BOUNDARY = "Boundary"

    def __str__(self) -> str:
        return self.value


def type_of_weight(w: Fraction) -> GadgetType:
    """Type of a gadget from the exact value of its effective weight."""
    y = 1 + w
    if y > 1:
        return GadgetType.A_PLUS
    if y < -1:
        return GadgetType.A_MINUS
    if 0 < y < 1:
        return GadgetType.B_PLUS
    if -1 < y < 0:
        return GadgetType.B_MINUS
    return GadgetType.BOUNDARY


def _compose(t: GadgetTerm, v0: Fraction, q, leaf, memo: dict):
    key = id(t)
    if key in memo:
        return memo[key][1]
    if isinstance(t, Edge):
        out = t.weight
    elif isinstance(t, Opaque):
        out = leaf(t)
    elif isinstance(t, Parallel):
        prod = 1
        for part in t.parts:
            prod = (1 + _compose(part, v0, q, leaf, memo)) * prod
        out = prod - 1
    else:
        prod = 1
        for part in t.parts:
            w = _compose(part, v0, q, leaf, memo)
            if _is_zero(w):
                raise _zero_error(q, "a series constituent has effective weight 0")
            prod = (1 + q / w) * prod
        denom = prod - 1
        if _is_zero(denom):
            raise _zero_error(q, "series composition has a vanishing denominator")
        out = q / denom
    memo[key] = (t, out)
    return out


def _is_zero(x) -> bool:
    if isinstance(x, RatFn):
        return x.is_zero()
    if isinstance(x, Interval):
        return x.contains_zero()
    return x == 0


def _zero_error(q, msg):
    if isinstance(q, RatFn):
        return IdenticallyDegenerate(msg)
    return PoleAt(q, msg)


def effective_weight(t: GadgetTerm, v0) -> RatFn:
    """v_t as an exact rational function of q, opaque leaves weighted ``v0``."""
    v0 = as_rational(v0)

    q = RatFn.q()
    memo: dict = {}

    def leaf(s: Opaque) -> RatFn:
        if s.unit is None and _closed_form(s):
            zs, zd = kn_minus_edge_split(s.params[0], UniPoly.q(), v0)
            if zd.is_zero():
                raise IdenticallyDegenerate(f"separated weight of {s} vanishes identically")
            return RatFn(zs * UniPoly.q(), zd)
        if s.unit is None:
            w = RatFn.constant(v0)
        else:
            w = _compose(s.unit, v0, q, leaf, memo)
        same, diff = leaf_tables(s)
        # clear the denominator of w: sum_j A_j n^j d^(m-j)
        n, d = w.num, w.den
        m = len(same) - 1
        npow = [UniPoly.constant(1)]
        dpow = [UniPoly.constant(1)]
        for _ in range(m):
            npow.append(npow[-1] * n)
            dpow.append(dpow[-1] * d)
        zs = sum((a * npow[j] * dpow[m - j] for j, a in enumerate(same)), UniPoly.constant(0))
        zd = sum((a * npow[j] * dpow[m - j] for j, a in enumerate(diff)), UniPoly.constant(0))
        if zd.is_zero():
            raise IdenticallyDegenerate(f"separated weight of {s} vanishes identically")
        return RatFn(zs * UniPoly.q(), zd)

    return _compose(t, v0, q, leaf, memo)


def effective_weight_at(t: GadgetTerm, q, v0) -> Fraction:
    """v_t at a fixed rational q; raises PoleAt where the composition is undefined."""
    q, v0 = as_rational(q), as_rational(v0)

    memo: dict = {}

    def leaf(s: Opaque) -> Fraction:
        w = v0 if s.unit is None else _compose(s.unit, v0, q, leaf, memo)
        zs, zd = _leaf_values(s, q, w)
        if zd == 0:
            raise PoleAt(q, f"separated weight of {s}")
        return q * zs / zd

    return _compose(t, v0, q, leaf, memo)


def effective_weight_over(t: GadgetTerm, window, v0) -> Interval:
    """An enclosure of v_t(q) for all q in ``window`` (a Bracket or Interval).

    Raises PoleAt when some denominator cannot be kept away from zero on the
    window; a narrower window usually cures that.
    """
    v0 = as_rational(v0)
    q = window if isinstance(window, Interval) else Interval(window.lo, window.hi)
    memo: dict = {}

    def leaf(s: Opaque) -> Interval:
        if s.unit is None and _closed_form(s):
            zs, zd = kn_minus_edge_split(s.params[0], UniPoly.q(), v0)
            zero = Interval.point(0)
            return q * _centered((zs,), q, zero) / _centered((zd,), q, zero)
        w = Interval.point(v0) if s.unit is None else Interval.lift(_compose(s.unit, v0, q, leaf, memo))
        same, diff = leaf_tables(s)
        return q * _centered(same, q, w) / _centered(diff, q, w)

    return Interval.lift(_compose(t, v0, q, leaf, memo))


def _taylor_coefficients(table, qc: Fraction, wc: Fraction) -> list[list[Fraction]]:
    """c[i][j] with sum_j A_j(q) w^j = sum c[i][j] (q - qc)^i (w - wc)^j, exactly."""
    shifted = [a.compose(UniPoly([qc, 1])).coeffs for a in table]
    m = len(table) - 1
    deg_q = max((len(cs) for cs in shifted), default=0)
    out = [[Fraction(0)] * (m + 1) for _ in range(deg_q)]
    for j, cs in enumerate(shifted):
        # (dw + wc)^j = sum_k C(j, k) wc^(j-k) dw^k
        for k in range(j + 1):
            scale = comb(j, k) * wc ** (j - k)
            if scale == 0:
                continue
            for i, c in enumerate(cs):
                if c:
                    out[i][k] += c * scale
    return out


def _centered(table, q: Interval, w: Interval) -> Interval:
    """Taylor-form enclosure of sum_j A_j(q) w^j over the box q x w.

    Plain interval Horner loses everything to cancellation between the large
    coefficients; re-expanding exactly around the box centre keeps the error
    of order the box radius.
    """
    qc, wc = (q.lo + q.hi) / 2, (w.lo + w.hi) / 2
    coeffs = _taylor_coefficients(table, qc, wc)
    dq, dw = q - qc, w - wc
    acc = Interval.point(0)
    for row in reversed(coeffs):
        inner = Interval.point(0)
        for c in reversed(row):
            inner = inner * dw + c
        acc = acc * dq + inner
    return acc


_TYPE_RANGES = {
    "A+": (Fraction(1), None),
    "A-": (None, Fraction(-1)),
    "B+": (Fraction(0), Fraction(1)),
    "B-": (Fraction(-1), Fraction(0)),
}


def type_persists(t: GadgetTerm, kind: "GadgetType", window, v0, depth: int = 12) -> bool:
    """Certify that t has type ``kind`` at every q of the window.

    The window is bisected adaptively (at most ``depth`` levels) until every
    piece has an enclosure of 1 + v_t inside the open range of the type.
    """
    lo, hi = _TYPE_RANGES[kind.value]
    pending = [(Interval(window.lo, window.hi), 0)]
    while pending:
        piece, level = pending.pop()
        try:
            ok = (1 + effective_weight_over(t, piece, v0)).inside(lo, hi)
        except PoleAt:
            ok = False
        if ok:
            continue
        if level >= depth:
            return False
        mid = (piece.lo + piece.hi) / 2
        pending.append((Interval(piece.lo, mid), level + 1))
        pending.append((Interval(mid, piece.hi), level + 1))
    return True


def classify_type(w: Union[RatFn, Fraction], q=None) -> GadgetType:
    """Exact type of an effective weight, given as a value or as a function evaluated at q."""
    if isinstance(w, RatFn):
        if q is None:
            raise ValueError("q is required to classify a rational function")
        w = w(as_rational(q))
    return type_of_weight(as_rational(w))


def term_type(t: GadgetTerm, q, v) -> GadgetType:
    return type_of_weight(effective_weight_at(t, q, v))


def double_parallel(t: GadgetTerm) -> Parallel:
    """Two copies of t in parallel: 1 + v becomes (1 + v_t)^2."""
    return Parallel(t, t)


def check_lemma3(t: GadgetTerm, v0) -> tuple[Fraction, bool]:
    """For a two-terminal graph term return (threshold, nonconstant).

    ``nonconstant`` says whether v_t depends on q; ``threshold`` is a rational
    above every real root and pole of 1 + v_t, beyond which 1 + v_t keeps one sign.
    """
    if is_dipole(t) or not is_two_terminal_graph(t):
        raise NotTwoTerminalGraph(f"{t} is not a two-terminal graph")
    g = 1 + effective_weight(t, v0)
    nonconstant = not g.is_constant()
    crit = g.num * g.den
    bound = real_root_bound(crit) if crit.degree >= 1 else Fraction(0)
    roots = isolate_real_roots(crit, Bracket(-bound, bound)) if crit.degree >= 1 else []
    threshold = max([Fraction(0)] + [b.hi for b in roots])
    # step past the last bracket so the threshold is not itself a root
    while crit(threshold) == 0:
        threshold += 1
    return threshold, nonconstant
