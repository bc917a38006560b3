"""Certified real zeros of Z_G(., v0) near a target point.

For a complementary pair (A, B) the witness graph G is s copies of A and t
copies of B in parallel. Then

    Z_G(q) = q * P_A(q)^s * P_B(q)^t * f(q),   f = q - 1 + (1 + v_A)^s (1 + v_B)^t,

where P_F = z_diff(F) / q^2 is the per-gadget prefactor. The exponents are
chosen so that f changes sign on a short bracket; since Z_G(., v0) is a
polynomial, a strict sign change of Z_G at the two rational bracket ends
proves a real zero inside.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .algebra import Bracket, RatFn, as_rational, format_rational, no_roots_in, sign
from .errors import (
    DegenerateRatio,
    NonPlanarPair,
    NotInteriorPoint,
    NotStarredRegion,
    PoleAt,
    PoleWindowEmpty,
    PreconditionViolated,
    SearchExhausted,
    UnsupportedRegion,
)
from .forge import DEFAULT_BUDGET, ComplementaryPair, SearchBudget, complementary_pair, generic_pair
from .graphs import (
    Edge,
    GadgetTerm,
    Opaque,
    Parallel,
    Series,
    dual_term,
    edge_count,
    parse_term,
    realize,
    substitute_edges,
    vertex_count,
)
from .regions import STAR_TO_PRIMAL, Region, classify_region, unsupported_reason
from .tutte import DEFAULT_SUBSET_BUDGET, term_split, z_subset, z_term, z_term_closed
from .weights import GadgetType, effective_weight, effective_weight_at, type_persists

MAX_EXPONENT_TOTAL = 10000

Fn = Union[RatFn, Callable[[Fraction], Fraction]]


# ---------------------------------------------------------------------------
# exponent search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentWitness:
    s: int
    t: int
    bracket: Bracket


def _ln(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


def _parity_ok(n: int, parity: Optional[int]) -> bool:
    return parity is None or n % 2 == parity


def _check_ordering(a: Fn, b: Fn, c: Fn, window: Bracket) -> None:
    for x in (window.lo, window.midpoint, window.hi):
        av, bv, cv = a(x), b(x), c(x)
        if not (0 < bv < 1 < av and cv > 0):
            raise PreconditionViolated(f"need 0 < b < 1 < a and c > 0, at q = {x}: a = {av}, b = {bv}, c = {cv}")
    checks = []
    for fn, shift in ((a, 1), (b, 0), (b, 1), (c, 0)):
        if isinstance(fn, RatFn):
            checks.append((fn - shift).num)
            checks.append(fn.den)
    for p in checks:
        if not p.is_constant() and not no_roots_in(p, window):
            raise PreconditionViolated("the ordering 0 < b < 1 < a, c > 0 fails inside the window")


def find_st(a: Fn, b: Fn, c: Fn, window: Bracket, s_parity: Optional[int] = None,
            t_parity: Optional[int] = None, max_total: int = MAX_EXPONENT_TOTAL,
            check: bool = True) -> ExponentWitness:
    """Exponents s, t of the given parities with a^s b^t - c changing sign on the window.

    a, b, c are rational functions (or exact callables). Logarithms only propose
    t for each s; acceptance is an exact sign comparison at the window ends.
    With ``check`` the ordering 0 < b < 1 < a, c > 0 is certified on the whole
    window (root isolation for rational functions).
    """
    if isinstance(a, RatFn) and isinstance(b, RatFn) and a.is_constant() and b.is_constant():
        raise DegenerateRatio("a and b are both constant; the ratio of their logarithms is fixed")
    if check:
        _check_ordering(a, b, c, window)
    lo, hi = window.lo, window.hi
    ends = [(a(x), b(x), c(x)) for x in (lo, hi)]
    logs = [(_ln(av), _ln(bv), _ln(cv)) for av, bv, cv in ends]

    def h_sign(k: int, s: int, t: int) -> int:
        av, bv, cv = ends[k]
        return sign(av ** s * bv ** t - cv)

    s = 1 if s_parity in (None, 1) else 2
    step = 1 if s_parity is None else 2
    while s < max_total:
        # t at which s ln a + t ln b - ln c vanishes, at each end
        roots = [(s * la - lc) / (-lb) for la, lb, lc in logs]
        t_lo, t_hi = min(roots), max(roots)
        cands = set()
        for t in range(max(1, math.floor(t_lo) - 1), math.ceil(t_hi) + 2):
            if _parity_ok(t, t_parity) and s + t <= max_total:
                cands.add(t)
        for t in sorted(cands, key=lambda t: (abs(t - (t_lo + t_hi) / 2), t)):
            sl, sh = h_sign(0, s, t), h_sign(1, s, t)
            if sl * sh == -1:
                return ExponentWitness(s, t, window)
        s += step
    raise SearchExhausted(f"no exponents with s + t <= {max_total} give a sign change on {window}")


# ---------------------------------------------------------------------------
# the factor f and the witness
# ---------------------------------------------------------------------------

def assemble_f(pair: ComplementaryPair, s: int, t: int, v0) -> RatFn:
    """q - 1 + (1 + v_A)^s (1 + v_B)^t as an exact rational function of q."""
    if s < 1 or t < 1:
        raise ValueError("s and t must be positive")
    va, vb = effective_weight(pair.a, v0), effective_weight(pair.b, v0)
    return RatFn.q() - 1 + (1 + va) ** s * (1 + vb) ** t


def f_value(a: GadgetTerm, b: GadgetTerm, s: int, t: int, v0, q) -> Fraction:
    q = as_rational(q)
    ya, yb = 1 + effective_weight_at(a, q, v0), 1 + effective_weight_at(b, q, v0)
    return q - 1 + ya ** s * yb ** t


def prefactor(term: GadgetTerm, q, v0) -> Fraction:
    """P_F(q) = z_diff(F) / q^2, the factor each copy of F contributes to Z of the witness."""
    q = as_rational(q)
    return term_split(term, q, v0)[1] / (q * q)


def witness_term(a: GadgetTerm, b: GadgetTerm, s: int, t: int) -> Parallel:
    return Parallel(*([a] * s + [b] * t))


def witness_dual_term(a: GadgetTerm, b: GadgetTerm, s: int, t: int) -> GadgetTerm:
    return Series(*([dual_term(a)] * s + [dual_term(b)] * t))


def _z_signs(a, b, s, t, v0, q) -> tuple[int, dict]:
    parts = {
        "q": sign(q),
        "A": sign(prefactor(a, q, v0)),
        "B": sign(prefactor(b, q, v0)),
        "f": sign(f_value(a, b, s, t, v0, q)),
    }
    z = parts["q"] * parts["A"] ** s * parts["B"] ** t * parts["f"]
    return z, parts


def _safe_z_sign(a, b, s, t, v0, q) -> int:
    try:
        return _z_signs(a, b, s, t, v0, q)[0]
    except PoleAt:
        return 0


_SPLITS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(2, 5), Fraction(3, 5))


def _split_point(lo: Fraction, hi: Fraction, ok: Callable[[Fraction], bool]) -> Fraction | None:
    for r in _SPLITS:
        m = lo + (hi - lo) * r
        if ok(m):
            return m
    return None


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroCertificate:
    a_term: GadgetTerm
    b_term: GadgetTerm
    s: int
    t: int
    v0: Fraction
    bracket: tuple
    sign_lo: int
    sign_hi: int
    prefactor_witness: tuple
    dual: bool
    target: tuple
    achieved_distance: Fraction
    working_target: tuple = ()
    region: str = ""
    dual_a_term: GadgetTerm | None = None
    dual_b_term: GadgetTerm | None = None

    @property
    def lo(self) -> Fraction:
        return self.bracket[0]

    @property
    def hi(self) -> Fraction:
        return self.bracket[1]

    @property
    def witness(self) -> Parallel:
        return witness_term(self.a_term, self.b_term, self.s, self.t)

    @property
    def witness_edge_count(self) -> int:
        return self.s * edge_count(self.a_term) + self.t * edge_count(self.b_term)

    def to_dict(self) -> dict:
        fr = format_rational
        return {
            "a_term": str(self.a_term),
            "b_term": str(self.b_term),
            "s": self.s,
            "t": self.t,
            "v0": fr(self.v0),
            "bracket": [fr(self.lo), fr(self.hi)],
            "sign_lo": self.sign_lo,
            "sign_hi": self.sign_hi,
            "prefactor_witness": [
                {"factor": name, "sign_lo": lo, "sign_hi": hi} for name, lo, hi in self.prefactor_witness
            ],
            "dual": self.dual,
            "target": {"q0": fr(self.target[0]), "v0": fr(self.target[1]), "eps": fr(self.target[2])},
            "achieved_distance": fr(self.achieved_distance),
            "working_target": {"q": fr(self.working_target[0]), "v": fr(self.working_target[1])},
            "region": self.region,
            "dual_a_term": None if self.dual_a_term is None else str(self.dual_a_term),
            "dual_b_term": None if self.dual_b_term is None else str(self.dual_b_term),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "ZeroCertificate":
        R = Fraction
        lo, hi = d["bracket"]
        tgt, wt = d["target"], d["working_target"]

        def opt_term(x):
            return None if x is None else parse_term(x)

        return cls(
            a_term=parse_term(d["a_term"]),
            b_term=parse_term(d["b_term"]),
            s=int(d["s"]),
            t=int(d["t"]),
            v0=R(d["v0"]),
            bracket=(R(lo), R(hi)),
            sign_lo=int(d["sign_lo"]),
            sign_hi=int(d["sign_hi"]),
            prefactor_witness=tuple((p["factor"], int(p["sign_lo"]), int(p["sign_hi"]))
                                    for p in d["prefactor_witness"]),
            dual=bool(d["dual"]),
            target=(R(tgt["q0"]), R(tgt["v0"]), R(tgt["eps"])),
            achieved_distance=R(d["achieved_distance"]),
            working_target=(R(wt["q"]), R(wt["v"])),
            region=str(d.get("region", "")),
            dual_a_term=opt_term(d.get("dual_a_term")),
            dual_b_term=opt_term(d.get("dual_b_term")),
        )

    @classmethod
    def from_json(cls, text: str) -> "ZeroCertificate":
        return cls.from_dict(json.loads(text))


def _distance(lo: Fraction, hi: Fraction, q0: Fraction, dual: bool, v_target: Fraction,
              q_work: Fraction) -> Fraction:
    width, mid = hi - lo, (lo + hi) / 2
    d = width + abs(mid - q0)
    if dual:
        # the dual zero sits at (q1, q1 * v_target / q_work) for some q1 in the bracket
        d = max(d, abs(v_target / q_work) * (width + abs(mid - q_work)))
    return d


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

_RETARGET_STEPS = 16


def _retarget(q0: Fraction, v0: Fraction, eps: Fraction) -> tuple[Fraction, Region] | None:
    """Nearest point (q, v0) with |q - q0| <= eps/2 lying in a supported open region."""
    for k in range(1, _RETARGET_STEPS + 1):
        d = eps * k / (2 * _RETARGET_STEPS)
        for q in (q0 - d, q0 + d):
            r = classify_region(q, v0)
            if r.is_supported:
                return q, r
    return None


def _type_window(pair: ComplementaryPair, qw: Fraction, v0: Fraction, radius: Fraction) -> Bracket:
    """A window around qw, clear of q = 0 and q = 1, on which both gadget types persist."""
    for _ in range(40):
        lo, hi = qw - radius, qw + radius
        for x in (Fraction(0), Fraction(1)):
            if lo <= x <= hi:
                if qw < x:
                    hi = (qw + x) / 2
                else:
                    lo = (qw + x) / 2
        window = Bracket(lo, hi)
        if type_persists(pair.a, pair.a_type, window, v0) and type_persists(pair.b, pair.b_type, window, v0):
            return window
        radius /= 2
    raise PoleWindowEmpty(f"no window around q = {qw} keeps the gadget types")


def _exponent_functions(pair: ComplementaryPair, v0: Fraction, below_one: bool):
    def ya(q):
        return 1 + effective_weight_at(pair.a, q, v0)

    def yb(q):
        return 1 + effective_weight_at(pair.b, q, v0)

    def c(q):
        return abs(q - 1)

    parity = 0 if below_one else 1
    if pair.a_type == GadgetType.A_MINUS:
        # f = q - 1 + (-1)^s a^s b^t with a = -(1 + v_A) > 1, b = 1 + v_B in (0, 1)
        return (lambda q: -ya(q)), yb, c, parity, None
    # mirror case: a = 1 + v_A > 1, b = -(1 + v_B) in (0, 1), parity on t
    return ya, (lambda q: -yb(q)), c, None, parity


def _certify(pair: ComplementaryPair, q0: Fraction, eps_w: Fraction, qw: Fraction, v0: Fraction,
             max_total: int) -> tuple[Fraction, Fraction, int, int]:
    """Exponents and a bracket within eps_w of qw (width + offset) where Z_G changes sign."""
    if qw in (0, 1):
        raise NotInteriorPoint(qw, v0, "q in {0, 1}", "the zero construction needs q != 0, 1")
    window = _type_window(pair, qw, v0, eps_w / 3)
    a, b, c, sp, tp = _exponent_functions(pair, v0, window.hi < 1)
    wit = find_st(a, b, c, window, sp, tp, max_total=max_total, check=False)
    s, t = wit.s, wit.t
    A, B = pair.a, pair.b

    def f(q):
        return f_value(A, B, s, t, v0, q)

    def nonzero(q):
        try:
            return f(q) != 0
        except PoleAt:
            return False

    lo, hi = wit.bracket.lo, wit.bracket.hi
    flo = sign(f(lo))
    # bisect on f until Z_G itself changes sign, then a little further
    target_width = window.width / 64
    for _ in range(200):
        zlo, zhi = _safe_z_sign(A, B, s, t, v0, lo), _safe_z_sign(A, B, s, t, v0, hi)
        if zlo * zhi == -1 and hi - lo <= target_width:
            return lo, hi, s, t
        m = _split_point(lo, hi, nonzero)
        if m is None:
            break
        fm = sign(f(m))
        zm = _safe_z_sign(A, B, s, t, v0, m)
        if zlo * zhi == -1 and zm != 0:
            # keep a Z sign change
            if zm == -zlo:
                hi = m
            else:
                lo = m
        elif fm == -flo:
            hi = m
        else:
            lo, flo = m, fm
    zlo, zhi = _safe_z_sign(A, B, s, t, v0, lo), _safe_z_sign(A, B, s, t, v0, hi)
    if zlo * zhi == -1:
        return lo, hi, s, t
    raise PoleWindowEmpty(f"prefactors cancel the sign change of f near q = {qw}")


def _build_certificate(pair, lo, hi, s, t, v0, dual, target, qw, region, v_target) -> ZeroCertificate:
    zlo, plo = _z_signs(pair.a, pair.b, s, t, v0, lo)
    zhi, phi = _z_signs(pair.a, pair.b, s, t, v0, hi)
    witness = tuple((k, plo[k], phi[k]) for k in ("q", "A", "B", "f"))
    q0 = target[0]
    return ZeroCertificate(
        a_term=pair.a, b_term=pair.b, s=s, t=t, v0=v0, bracket=(lo, hi),
        sign_lo=zlo, sign_hi=zhi, prefactor_witness=witness, dual=dual, target=target,
        achieved_distance=_distance(lo, hi, q0, dual, v_target, qw),
        working_target=(qw, v0), region=str(region),
        dual_a_term=dual_term(pair.a) if dual else None,
        dual_b_term=dual_term(pair.b) if dual else None,
    )


def _reject(q0, v0, region):
    if region in (Region.UNSUPPORTED, Region.NON_NEGATIVE_V):
        raise UnsupportedRegion(q0, v0, region, unsupported_reason(q0, v0) or "")
    raise NotInteriorPoint(q0, v0, region)


def find_zero(q0, v0, eps, budget: SearchBudget = DEFAULT_BUDGET, planar_only: bool = False,
              max_total: int = MAX_EXPONENT_TOTAL) -> ZeroCertificate:
    """Certificate of a real zero q1 of some Z_G(., v0) with |q1 - q0| < eps.

    Points of starred regions are handled through the dual construction.
    Boundary points, and q0 = 1, move to the nearest interior point along the
    q-axis (within eps/2); where none exists the pair is searched for at the
    point itself.
    """
    q0, v0, eps = as_rational(q0), as_rational(v0), as_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    region = classify_region(q0, v0)
    if not region.is_supported and region != Region.BOUNDARY:
        _reject(q0, v0, region)
    qw, work_region, pair = q0, region, None
    # q = 1 is excluded by the construction even inside a region
    if region == Region.BOUNDARY or q0 == 1:
        hit = _retarget(q0, v0, eps)
        if hit is not None:
            qw, work_region = hit
        else:
            try:
                pair = generic_pair(q0, v0, budget)
            except SearchExhausted as exc:
                raise NotInteriorPoint(q0, v0, region, f"no nearby interior point and {exc}") from exc
    if work_region.is_starred:
        return _find_zero_dual(q0, v0, eps, qw, work_region, budget, max_total)
    if pair is None:
        pair = complementary_pair(qw, v0, budget)
    if planar_only and not pair.planar:
        raise UnsupportedRegion(q0, v0, region, "no planar pair is available here")
    eps_w = eps - abs(qw - q0)
    lo, hi, s, t = _certify(pair, q0, eps_w, qw, v0, max_total)
    return _build_certificate(pair, lo, hi, s, t, v0, False, (q0, v0, eps), qw, work_region, v0)


def _find_zero_dual(q0, v0, eps, qw, region, budget, max_total) -> ZeroCertificate:
    qw_, w0 = qw, qw / v0
    primal = classify_region(qw_, w0)
    if primal != STAR_TO_PRIMAL[region]:
        raise NotInteriorPoint(qw_, w0, primal, f"dual of a {region} point is not in {STAR_TO_PRIMAL[region]}")
    pair = complementary_pair(qw_, w0, budget)
    if not pair.planar:
        raise NonPlanarPair(f"pair at ({qw_}, {w0}) is not planar")
    d = abs(qw - q0)
    delta = (eps - d) / (2 + abs(v0 / qw))
    lo, hi, s, t = _certify(pair, qw, delta, qw, w0, max_total)
    return _build_certificate(pair, lo, hi, s, t, w0, True, (q0, v0, eps), qw, region, v0)


def find_zero_dual(q0, v0, eps, budget: SearchBudget = DEFAULT_BUDGET,
                   max_total: int = MAX_EXPONENT_TOTAL) -> ZeroCertificate:
    """Certificate for a starred-region point via the planar dual of a primal witness."""
    q0, v0, eps = as_rational(q0), as_rational(v0), as_rational(eps)
    region = classify_region(q0, v0)
    if not region.is_starred:
        raise NotStarredRegion(f"({q0}, {v0}) lies in {region}, not a starred region")
    return _find_zero_dual(q0, v0, eps, q0, region, budget, max_total)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def _edge_weights(t: GadgetTerm, out: set) -> set:
    if isinstance(t, Edge):
        out.add(t.weight)
    elif isinstance(t, Opaque):
        if t.unit is not None:
            _edge_weights(t.unit, out)
    else:
        for p in t.parts:
            _edge_weights(p, out)
    return out


def certificate_problems(c: ZeroCertificate, exhaustive: bool = False) -> list[str]:
    """Everything wrong with a certificate, recomputed from its recipe; empty when valid."""
    problems: list[str] = []
    lo, hi = c.bracket
    if not lo < hi:
        return [f"bracket [{lo}, {hi}] is empty or reversed"]
    if c.s < 1 or c.t < 1:
        return ["exponents must be positive"]
    weights = _edge_weights(c.a_term, set()) | _edge_weights(c.b_term, set())
    if weights - {c.v0}:
        problems.append(f"edge weights {sorted(weights - {c.v0})} differ from v0 = {c.v0}")
    try:
        zlo, plo = _z_signs(c.a_term, c.b_term, c.s, c.t, c.v0, lo)
        zhi, phi = _z_signs(c.a_term, c.b_term, c.s, c.t, c.v0, hi)
    except PoleAt as exc:
        return problems + [f"evaluation hit a pole: {exc}"]
    if plo["f"] * phi["f"] != -1:
        problems.append("f does not change sign on the bracket")
    for k in ("q", "A", "B"):
        if plo[k] == 0 or phi[k] == 0:
            problems.append(f"prefactor {k} vanishes at a bracket end")
    recorded = {name: (sl, sh) for name, sl, sh in c.prefactor_witness}
    for k in ("q", "A", "B", "f"):
        if recorded.get(k) != (plo[k], phi[k]):
            problems.append(f"recorded signs of {k} do not match")
    if (zlo, zhi) != (c.sign_lo, c.sign_hi):
        problems.append("recorded signs of Z do not match the product formula")
    if c.sign_lo * c.sign_hi != -1:
        problems.append("Z does not change sign on the bracket")
    witness = c.witness
    for q, z in ((lo, zlo), (hi, zhi)):
        direct = z_term(witness, q, c.v0)
        if sign(direct) != z:
            problems.append(f"transfer evaluation of Z disagrees in sign at q = {q}")
    q0, v_target, eps = c.target
    qw = c.working_target[0] if c.working_target else q0
    dist = _distance(lo, hi, q0, c.dual, v_target, qw)
    if dist != c.achieved_distance:
        problems.append("achieved distance does not match the bracket")
    if dist > eps:
        problems.append(f"achieved distance {dist} exceeds eps = {eps}")
    if c.dual:
        problems.extend(_dual_problems(c, witness, lo, hi))
    if exhaustive and c.witness_edge_count <= DEFAULT_SUBSET_BUDGET:
        g, _ = realize(witness, c.v0)
        for q, z in ((lo, zlo), (hi, zhi)):
            if sign(z_subset(g, q)) != z:
                problems.append(f"subset expansion disagrees in sign at q = {q}")
    return problems


def _dual_problems(c: ZeroCertificate, witness, lo, hi) -> list[str]:
    problems = []
    if c.dual_a_term != dual_term(c.a_term) or c.dual_b_term != dual_term(c.b_term):
        problems.append("dual terms are not the structural duals of the gadgets")
        return problems
    n, m = vertex_count(witness), edge_count(witness)
    q0, v_target, _ = c.target
    qw, w0 = c.working_target
    if w0 != c.v0 or qw / v_target != w0:
        problems.append("dual target does not map to the primal working point")
    for q in (lo, hi):
        w = q / c.v0
        da, db = _reweight(c.dual_a_term, w), _reweight(c.dual_b_term, w)
        dual_z = z_term_closed(Series(*([da] * c.s + [db] * c.t)), q, w)
        if dual_z != q ** (1 - n) * w ** m * z_term(witness, q, c.v0):
            problems.append(f"duality identity fails at q = {q}")
    return problems


def _reweight(t: GadgetTerm, w: Fraction) -> GadgetTerm:
    return substitute_edges(t, Edge(w))


def verify_certificate(c: ZeroCertificate, exhaustive: bool = False) -> bool:
    return not certificate_problems(c, exhaustive)
