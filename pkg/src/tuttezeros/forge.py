"""Construction of complementary gadget pairs at an interior point (q, v).

Each region has its own recipe (paths, series-dipole chains, the subdivided
Petersen gadget, complete-graph seeds); constructions that are only known to
exist are replaced by bounded, deterministic searches whose output is checked
exactly, so anything returned is correct regardless of how it was found.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .algebra import as_rational
from .errors import (
    BudgetExceeded,
    ImmediateExhaustion,
    NotInteriorPoint,
    PoleAt,
    SearchExhausted,
    TutteZerosError,
    UnsupportedRegion,
    WrongCase,
)
from .graphs import (
    Edge,
    GadgetTerm,
    Opaque,
    Parallel,
    Series,
    complete_minus_edge,
    is_dipole,
    is_planar,
    path,
    petersen_minus_edge,
    term_size,
)
from .regions import Region, classify_region
from .weights import GadgetType, double_parallel, effective_weight_at, type_of_weight


class GadgetBoundViolated(TutteZerosError, AssertionError):
    """A construction produced a weight its proof rules out; indicates a bug."""


@dataclass(frozen=True)
class SearchBudget:
    max_path_length: int = 64
    max_sp_term_size: int = 12
    max_kn: int = 7
    max_parallel_mult: int = 8
    max_frontier: int = 400
    max_term_leaves: int = 4096

    def __post_init__(self):
        for name in ("max_path_length", "max_sp_term_size", "max_kn", "max_parallel_mult", "max_frontier",
                     "max_term_leaves"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


DEFAULT_BUDGET = SearchBudget()

_COMPLEMENTARY = {
    (GadgetType.A_PLUS, GadgetType.B_MINUS),
    (GadgetType.A_MINUS, GadgetType.B_PLUS),
}


@dataclass(frozen=True)
class ComplementaryPair:
    a: GadgetTerm
    b: GadgetTerm
    a_type: GadgetType
    b_type: GadgetType
    planar: bool

    def __post_init__(self):
        if (self.a_type, self.b_type) not in _COMPLEMENTARY:
            raise ValueError(f"types ({self.a_type}, {self.b_type}) are not complementary")
        if is_dipole(self.a) and is_dipole(self.b):
            raise ValueError("at most one gadget of a pair may be a dipole")

    @property
    def case(self) -> str:
        """"A-B+" or "A+B-"."""
        return f"{self.a_type}{self.b_type}"


def make_pair(a: GadgetTerm, b: GadgetTerm, q, v) -> ComplementaryPair:
    """Build a pair after checking both types exactly at (q, v)."""
    ta, tb = type_of_weight(effective_weight_at(a, q, v)), type_of_weight(effective_weight_at(b, q, v))
    if (ta, tb) not in _COMPLEMENTARY:
        raise GadgetBoundViolated(f"({a}, {b}) have types ({ta}, {tb}) at ({q}, {v})")
    return ComplementaryPair(a, b, ta, tb, is_planar(a) and is_planar(b))


# ---------------------------------------------------------------------------
# paths
# ---------------------------------------------------------------------------

def _path_cases(q: Fraction, w: Fraction) -> set[GadgetType]:
    cases = set()
    if w < 0 and q < 0:
        cases.add(GadgetType.B_PLUS)
    if w < -2 and 0 < q < 1:
        cases.add(GadgetType.B_PLUS)
    if w < -2 and 1 < q < 2:
        cases.add(GadgetType.B_MINUS)
    if w < 0 and q > -2 * w:
        cases.add(GadgetType.A_PLUS)
    if w < 0 and 2 < q < -2 * w:
        cases.add(GadgetType.A_MINUS)
    return cases


def path_gadget(q, v, target: GadgetType, budget: SearchBudget = DEFAULT_BUDGET,
                unit: GadgetTerm | None = None) -> GadgetTerm:
    """Shortest path of s >= 2 copies of ``unit`` (default Edge(v)) having type ``target``.

    1 + q/v_{P_s} = (1 + q/w)^s with w the weight of the unit.
    """
    q, v = as_rational(q), as_rational(v)
    unit = Edge(v) if unit is None else unit
    w = effective_weight_at(unit, q, v)
    if target not in _path_cases(q, w):
        raise WrongCase(f"no path construction of type {target} at q = {q}, unit weight {w}")
    base = 1 + q / w
    for s in range(2, budget.max_path_length + 1):
        denom = base ** s - 1
        if denom != 0 and type_of_weight(q / denom) == target:
            return path(s, unit)
    raise SearchExhausted(f"no path of length <= {budget.max_path_length} has type {target}")


def path_weight(q, w, s: int) -> Fraction:
    q, w = as_rational(q), as_rational(w)
    return q / ((1 + q / w) ** s - 1)


# ---------------------------------------------------------------------------
# series-dipole chains and the Petersen gadget
# ---------------------------------------------------------------------------

def series_dipole_bplus(q, v, budget: SearchBudget = DEFAULT_BUDGET,
                        unit: GadgetTerm | None = None) -> GadgetTerm:
    """Series(F, ..., F, unit) with F two parallel units, of type B+.

    Needs q > 2 and -q < w < -2 for the unit weight w; then v_F = w (w + 2) > 0 and
    1 + q/v_G = (1 + q/v_F)^s (1 + q/w) walks into (-1, 0) as s grows.
    """
    q, v = as_rational(q), as_rational(v)
    unit = Edge(v) if unit is None else unit
    w = effective_weight_at(unit, q, v)
    if not (q > 2 and -q < w < -2):
        raise WrongCase(f"series-dipole gadget needs q > 2 and -q < w < -2, got q = {q}, w = {w}")
    f = Parallel(unit, unit)
    vf = w * (w + 2)
    tail = 1 + q / w
    for s in range(1, budget.max_path_length + 1):
        denom = (1 + q / vf) ** s * tail - 1
        if denom != 0 and -1 < q / denom < 0:
            return Series(*([f] * s + [unit]))
    raise SearchExhausted(f"no series-dipole chain of length <= {budget.max_path_length} has type B+")


def petersen_entry(q, v, budget: SearchBudget = DEFAULT_BUDGET) -> tuple[Opaque, Fraction]:
    """Petersen minus an edge, each edge replaced by a path of weight-v edges, with weight in (-q, 0).

    The path of length s has effective weight tending to -q; the bare leaf (s = 1)
    is used when it already qualifies. Returns the gadget and its exact weight.
    """
    q, v = as_rational(q), as_rational(v)
    leaf = petersen_minus_edge()
    for s in range(1, budget.max_path_length + 1):
        gadget = leaf if s == 1 else leaf.subdivided(path(s, Edge(v)))
        try:
            vf = effective_weight_at(gadget, q, v)
        except PoleAt:
            continue
        if -q < vf < 0:
            return gadget, vf
    raise SearchExhausted(f"no subdivided Petersen gadget with weight in (-q, 0) up to paths of "
                          f"length {budget.max_path_length}")


def bplus_from_weight_in_minus_q_zero(q, v, f: GadgetTerm, budget: SearchBudget = DEFAULT_BUDGET
                                      ) -> tuple[GadgetTerm, str]:
    """Turn a gadget with weight in (-q, 0), 2 < q < 4, into one of type B+.

    Returns the gadget and the name of the case used: "direct", "series-dipole",
    "double", "J3" or "Js".
    """
    q, v = as_rational(q), as_rational(v)
    vf = effective_weight_at(f, q, v)
    if -1 < vf < 0:
        out, branch = f, "direct"
    elif -q < vf < -2:
        out, branch = series_dipole_bplus(q, v, budget, unit=f), "series-dipole"
    elif -2 < vf < -1:
        out, branch = double_parallel(f), "double"
    elif vf == -1:
        # v_{J3} = -1 / (q^2 - 3q + 3), inside (-1, 0) for q > 2
        out, branch = Series(f, f, f), "J3"
    elif vf == -2:
        # 1 + q/v_{J_s} = (1 - q/2)^s; odd s puts v_{J_s} in (-q, -2)
        for s in range(3, budget.max_path_length + 1, 2):
            vj = path_weight(q, vf, s)
            if -q < vj < -2:
                out, branch = series_dipole_bplus(q, v, budget, unit=path(s, f)), "Js"
                break
        else:
            raise SearchExhausted("no odd J_s with weight in (-q, -2)")
    else:
        raise GadgetBoundViolated(f"gadget weight {vf} outside (-q, 0) at q = {q}")
    if type_of_weight(effective_weight_at(out, q, v)) != GadgetType.B_PLUS:
        raise GadgetBoundViolated(f"{branch} case did not produce type B+ at ({q}, {v})")
    return out, branch


def petersen_bplus(q, v, budget: SearchBudget = DEFAULT_BUDGET) -> GadgetTerm:
    q, v = as_rational(q), as_rational(v)
    if not (2 < q < 4 and q.denominator != 1 and v < -q):
        raise WrongCase(f"Petersen gadget needs non-integer 2 < q < 4 and v < -q, got ({q}, {v})")
    f, _ = petersen_entry(q, v, budget)
    return bplus_from_weight_in_minus_q_zero(q, v, f, budget)[0]


# ---------------------------------------------------------------------------
# closure searches
# ---------------------------------------------------------------------------

def _flat(kind, parts: Iterable[GadgetTerm]) -> GadgetTerm:
    out = []
    for x in parts:
        out.extend(x.parts if isinstance(x, kind) else (x,))
    return kind(*out)


def _par_value(ys: Iterable[Fraction]) -> Fraction:
    prod = Fraction(1)
    for y in ys:
        prod *= 1 + y
    return prod - 1


def _ser_value(q: Fraction, ys: Iterable[Fraction]) -> Fraction | None:
    prod = Fraction(1)
    for y in ys:
        if y == 0:
            return None
        prod *= 1 + q / y
    return None if prod == 1 else q / (prod - 1)


@dataclass
class _Node:
    term: GadgetTerm
    weight: Fraction
    dipole: bool
    leaves: int


def closure_terms(q, v, seeds: Iterable[GadgetTerm] = (), budget: SearchBudget = DEFAULT_BUDGET
                  ) -> Iterator[tuple[GadgetTerm, Fraction]]:
    """Terms built from Edge(v) and the seeds by series and parallel composition.

    A term's cost is its number of distinct composition nodes: combining two
    terms costs one more than both together, and k copies of one term in series
    or in parallel (2 <= k <= max_parallel_mult) cost one more than the term.
    Seeds and Edge(v) cost 1. Yields (term, exact weight at q) by increasing
    cost, in a fixed construction order; a term whose (weight, dipole-ness) was
    already produced is skipped. At most ``max_frontier`` terms are kept per
    cost and terms are capped at ``max_term_leaves`` leaves.
    """
    q, v = as_rational(q), as_rational(v)
    levels: dict[int, list[_Node]] = {}
    seen: set[tuple[Fraction, bool]] = set()

    def admit(level: list[_Node], term, weight, dipole, leaves) -> _Node | None:
        # ``term`` may be a thunk, so skipped candidates are never built
        if weight is None or leaves > budget.max_term_leaves or len(level) >= budget.max_frontier:
            return None
        key = (weight, dipole)
        if key in seen:
            return None
        seen.add(key)
        node = _Node(term() if callable(term) else term, weight, dipole, leaves)
        level.append(node)
        return node

    first: list[_Node] = []
    for t in [Edge(v), *seeds]:
        try:
            w = effective_weight_at(t, q, v)
        except PoleAt:
            continue
        if admit(first, t, w, is_dipole(t), term_size(t)):
            yield t, w
    levels[1] = first

    mult = range(2, budget.max_parallel_mult + 1)
    for cost in range(2, budget.max_sp_term_size + 1):
        level: list[_Node] = []
        levels[cost] = level
        # k copies of a cheaper term
        for node in levels[cost - 1]:
            for k in mult:
                leaves = k * node.leaves
                if leaves > budget.max_term_leaves:
                    break
                for kind in (Parallel, Series):
                    if kind is Parallel:
                        w = _par_value([node.weight] * k)
                    else:
                        w = _ser_value(q, [node.weight] * k)
                    made = admit(level, lambda: _flat(kind, [node.term] * k), w,
                                 kind is Parallel and node.dipole, leaves)
                    if made:
                        yield made.term, w
        # two different terms
        for i in range(1, cost // 2 + 1):
            j = cost - 1 - i
            if j < i or len(level) >= budget.max_frontier:
                break
            left, right = levels.get(i, []), levels.get(j, [])
            for ia, a in enumerate(left):
                if len(level) >= budget.max_frontier:
                    break
                for ib, b in enumerate(right):
                    if i == j and ib <= ia:
                        continue
                    leaves = a.leaves + b.leaves
                    if leaves > budget.max_term_leaves:
                        continue
                    w = _par_value((a.weight, b.weight))
                    made = admit(level, lambda: _flat(Parallel, (a.term, b.term)), w, a.dipole and b.dipole, leaves)
                    if made:
                        yield made.term, w
                    w = _ser_value(q, (a.weight, b.weight))
                    made = admit(level, lambda: _flat(Series, (a.term, b.term)), w, False, leaves)
                    if made:
                        yield made.term, w
        if not level:
            return


def sp_search(q, v, targets: set, seeds: Iterable[GadgetTerm] = (), budget: SearchBudget = DEFAULT_BUDGET,
              allow_dipole: bool = False) -> GadgetTerm:
    """First closure term (in deterministic order) whose type lies in ``targets``."""
    targets = set(targets)
    if not targets:
        raise ImmediateExhaustion("no target types given")
    for t, w in closure_terms(q, v, seeds, budget):
        if type_of_weight(w) in targets and (allow_dipole or not is_dipole(t)):
            return t
    raise SearchExhausted(f"no term of type {sorted(map(str, targets))} up to size {budget.max_sp_term_size}")


def _kn_seeds(budget: SearchBudget) -> list[Opaque]:
    seeds = []
    for n in range(4, budget.max_kn + 1):
        try:
            seeds.append(complete_minus_edge(n, budget.max_kn))
        except BudgetExceeded:
            break
    return seeds


def kn_gadget_search(q, v, budget: SearchBudget = DEFAULT_BUDGET) -> GadgetTerm:
    """Search over terms seeded with K_n minus an edge for type A- or B- (best effort)."""
    q, v = as_rational(q), as_rational(v)
    if not (q > 2 and -1 < v < 0):
        raise WrongCase(f"complete-graph search needs q > 2 and -1 < v < 0, got ({q}, {v})")
    targets = {GadgetType.A_MINUS, GadgetType.B_MINUS}
    seeds = _kn_seeds(budget)
    weights = []
    for seed in seeds:
        try:
            w = effective_weight_at(seed, q, v)
        except PoleAt:
            continue
        if type_of_weight(w) in targets:
            return seed
        weights.append(w)
    # For q > 2 the set {w : 1 + w > 0} is closed under both compositions:
    # parallel multiplies positive factors, and in series every factor
    # 1 + q/w_i has modulus > 1, and modulus > q - 1 when negative, so the
    # product never lands in [1 - q, 1) where 1 + w_G <= 0 would require.
    if all(1 + w > 0 for w in weights):
        raise SearchExhausted(f"no K_n seed with n <= {budget.max_kn} has 1 + v_F <= 0 at ({q}, {v}),"
                              " and compositions cannot produce one")
    return sp_search(q, v, targets, seeds, budget)


def generic_pair(q, v, budget: SearchBudget = DEFAULT_BUDGET) -> ComplementaryPair:
    """Complementary pair from the series-parallel closure of Edge(v), for points off every region."""
    q, v = as_rational(q), as_rational(v)
    best: dict[tuple[GadgetType, bool], GadgetTerm] = {}
    for t, w in closure_terms(q, v, _kn_seeds(budget), budget):
        key = (type_of_weight(w), is_dipole(t))
        if key[0] == GadgetType.BOUNDARY or key in best:
            continue
        best[key] = t
        for ta, tb in sorted(_COMPLEMENTARY, key=lambda p: p[0].value):
            for da, db in ((False, False), (False, True), (True, False)):
                a, b = best.get((ta, da)), best.get((tb, db))
                if a is not None and b is not None:
                    return make_pair(a, b, q, v)
    raise SearchExhausted(f"no complementary pair up to size {budget.max_sp_term_size} at ({q}, {v})")


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def _region_vii(q: Fraction, v: Fraction, budget: SearchBudget) -> ComplementaryPair:
    f = kn_gadget_search(q, v, budget)
    wf = effective_weight_at(f, q, v)
    kind = type_of_weight(wf)
    if kind == GadgetType.A_MINUS:
        return make_pair(f, Edge(v), q, v)
    # type B-, so wf lies in (-2, -1); build on top of f at the point (q, wf)
    sub = classify_region(q, wf)
    if sub == Region.VI:
        a = double_parallel(path_gadget(q, v, GadgetType.A_MINUS, budget, unit=f))
        return make_pair(a, f, q, v)
    if sub == Region.VSTAR:
        a = path_gadget(q, v, GadgetType.A_PLUS, budget, unit=f)
        return make_pair(a, f, q, v)
    raise SearchExhausted(f"complete-graph gadget weight {wf} lies on a boundary at q = {q}")


def complementary_pair(q, v, budget: SearchBudget = DEFAULT_BUDGET) -> ComplementaryPair:
    q, v = as_rational(q), as_rational(v)
    region = classify_region(q, v)
    e = Edge(v)
    if region in (Region.I, Region.II):
        return make_pair(e, path_gadget(q, v, GadgetType.B_PLUS, budget), q, v)
    if region == Region.III:
        return make_pair(double_parallel(e), path_gadget(q, v, GadgetType.B_MINUS, budget), q, v)
    if region == Region.IV:
        return make_pair(e, petersen_bplus(q, v, budget), q, v)
    if region == Region.V:
        return make_pair(e, series_dipole_bplus(q, v, budget), q, v)
    if region == Region.VI:
        return make_pair(double_parallel(path_gadget(q, v, GadgetType.A_MINUS, budget)), e, q, v)
    if region == Region.VII:
        return _region_vii(q, v, budget)
    if region == Region.VIII:
        a = sp_search(q, v, {GadgetType.A_PLUS}, [Parallel(e, e)], budget)
        return make_pair(a, e, q, v)
    if region == Region.IX:
        return make_pair(sp_search(q, v, {GadgetType.A_PLUS}, (), budget), e, q, v)
    if region == Region.UNSUPPORTED:
        raise UnsupportedRegion(q, v, region)
    raise NotInteriorPoint(q, v, region)
