"""Exact evaluation of the random-cluster (multivariate) Tutte polynomial

    Z_G(q, v) = sum over A subset of E of  q^k(A) * prod_{e in A} v_e.

Three independent routes are provided: brute-force subset expansion (the
oracle), memoized deletion-contraction (the general production path) and a
two-terminal transfer evaluation over gadget terms, which handles the large
series-parallel witness graphs built by the zero finder.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Mapping, Sequence, Union

from .algebra import UniPoly, as_rational
from .errors import BudgetExceeded, DegenerateEffectiveWeight, PoleAt, UndefinedAtUnitLine
from .graphs import (
    Edge,
    GadgetTerm,
    Multigraph,
    Network,
    Opaque,
    Series,
    TwoTerminalGraph,
)

DEFAULT_SUBSET_BUDGET = 24

WeightAssignment = Union[None, Fraction, int, Sequence, Mapping]


def _resolve_weights(g: Multigraph, w: WeightAssignment) -> list[Fraction]:
    if w is None:
        return g.weights()
    if isinstance(w, (int, Fraction, str)):
        return [as_rational(w)] * g.edge_count
    if hasattr(w, "keys"):
        missing = [i for i in range(g.edge_count) if i not in w]
        if missing:
            raise ValueError(f"weight assignment misses edges {missing}")
        return [as_rational(w[i]) for i in range(g.edge_count)]
    ws = [as_rational(x) for x in w]
    if len(ws) != g.edge_count:
        raise ValueError("weight assignment must cover every edge")
    return ws


# ---------------------------------------------------------------------------
# subset expansion
# ---------------------------------------------------------------------------

def _expand(n: int, pairs: Sequence[tuple[int, int]], weights: Sequence | None, x=None, y=None):
    """Enumerate all edge subsets with a rollback union-find.

    Returns (same, diff) tables indexed by the component count k. With
    ``weights=None`` the tables count subsets by (k, |A|) instead and hold ints.
    Without terminals everything lands in ``diff``.
    """
    m = len(pairs)
    parent = list(range(n))
    size = [1] * n
    if weights is None:
        same = [[0] * (m + 1) for _ in range(n + 1)]
        diff = [[0] * (m + 1) for _ in range(n + 1)]
    else:
        same = [Fraction(0)] * (n + 1)
        diff = [Fraction(0)] * (n + 1)

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    def record(k, acc):
        table = diff if x is None or find(x) != find(y) else same
        if weights is None:
            table[k][acc] += 1
        else:
            table[k] += acc

    def rec(i, k, acc):
        if i == m:
            record(k, acc)
            return
        rec(i + 1, k, acc)
        if weights is None:
            nxt = acc + 1
        else:
            w = weights[i]
            if w == 0:
                return
            nxt = acc * w
        u, v = pairs[i]
        ru, rv = find(u), find(v)
        if ru == rv:
            rec(i + 1, k, nxt)
            return
        if size[ru] < size[rv]:
            ru, rv = rv, ru
        parent[rv] = ru
        size[ru] += size[rv]
        rec(i + 1, k - 1, nxt)
        parent[rv] = rv
        size[ru] -= size[rv]

    rec(0, n, 0 if weights is None else Fraction(1))
    return same, diff


@lru_cache(maxsize=64)
def _count_tables(n: int, pairs: tuple, x, y):
    same, diff = _expand(n, pairs, None, x, y)
    return tuple(map(tuple, same)), tuple(map(tuple, diff))


def _check_budget(g: Multigraph, budget: int) -> None:
    if g.edge_count > budget:
        raise BudgetExceeded(f"{g.edge_count} edges exceed the subset budget of {budget}")


def _q_coefficients(g: Multigraph, w: WeightAssignment, x=None, y=None):
    weights = _resolve_weights(g, w)
    pairs = tuple((u, v) for u, v, _ in g.edges)
    if weights and all(wt == weights[0] for wt in weights):
        # uniform weight: reuse a structural count table
        same_c, diff_c = _count_tables(g.vertex_count, pairs, x, y)
        wt = weights[0]
        powers = [wt ** j for j in range(len(pairs) + 1)]
        def collapse(table):
            return [sum((c * powers[j] for j, c in enumerate(row) if c), Fraction(0)) for row in table]
        return collapse(same_c), collapse(diff_c)
    return _expand(g.vertex_count, pairs, weights, x, y)


def z_poly_q(g: Multigraph, w: WeightAssignment = None, budget: int = DEFAULT_SUBSET_BUDGET) -> UniPoly:
    """Z_G as a polynomial in q for fixed edge weights, by subset expansion."""
    _check_budget(g, budget)
    same, diff = _q_coefficients(g, w)
    return UniPoly([a + b for a, b in zip(same, diff)])


def z_subset(g: Multigraph, q, w: WeightAssignment = None, budget: int = DEFAULT_SUBSET_BUDGET) -> Fraction:
    """Z_G(q, w) by summing over all 2^|E| edge subsets."""
    return z_poly_q(g, w, budget)(as_rational(q))


@dataclass(frozen=True)
class SplitZ:
    """Z_F split by whether the terminals are joined by the chosen edge set."""

    z_same: UniPoly
    z_diff: UniPoly

    @property
    def total(self) -> UniPoly:
        return self.z_same + self.z_diff

    def identified(self) -> UniPoly:
        """Z of F with x and y identified: z_same + z_diff / q."""
        return self.z_same + self.z_diff.exact_div(UniPoly.q())

    def with_minus_one_edge(self) -> UniPoly:
        """Z_{F+xy}(q, v, -1) = z_diff * (q - 1) / q."""
        return self.z_diff.exact_div(UniPoly.q()) * UniPoly([-1, 1])


def z_split(f: Network, v=None, budget: int = DEFAULT_SUBSET_BUDGET) -> SplitZ:
    """Same/diff split of Z_F in q with every edge weighted ``v`` (or its own weight if None).

    Subset expansion within the budget; above it, the split is recovered by
    interpolating deletion-contraction values of Z_F and Z_{F_xy}.
    """
    g = f.graph
    w = None if v is None else as_rational(v)
    if g.edge_count <= budget:
        same, diff = _q_coefficients(g, w, f.x, f.y)
        return SplitZ(UniPoly(same), UniPoly(diff))
    gw = g if w is None else g.with_weights(w)
    closed = gw.identify(f.x, f.y)
    n = g.vertex_count
    pts = [Fraction(i) for i in range(2, n + 3)]
    total = UniPoly.interpolate([(p, z_del_con(gw, p)) for p in pts])
    ident = UniPoly.interpolate([(p, z_del_con(closed, p)) for p in pts])
    # total - ident = z_diff (1 - 1/q)  =>  z_diff = (total - ident) q / (q - 1)
    z_diff = ((total - ident) * UniPoly.q()).exact_div(UniPoly([-1, 1]))
    return SplitZ(total - z_diff, z_diff)


# ---------------------------------------------------------------------------
# deletion-contraction
# ---------------------------------------------------------------------------

def _canonical_key(vertices: list[int], adj: dict[int, dict[int, Fraction]]):
    """Relabel by two rounds of degree/weight colour refinement (ties by label).

    Not a full canonical form: equal keys mean identical weighted graphs, and
    isomorphic graphs usually, though not always, collide.
    """
    colour = {x: (len(adj[x]), tuple(sorted(adj[x].values()))) for x in vertices}
    for _ in range(2):
        colour = {x: (colour[x], tuple(sorted((colour[y], w) for y, w in adj[x].items())))
                  for x in vertices}
        ranks = {c: i for i, c in enumerate(sorted(set(colour.values())))}
        colour = {x: ranks[colour[x]] for x in vertices}
    order = sorted(vertices, key=lambda x: (colour[x], x))
    label = {x: i for i, x in enumerate(order)}
    edges = []
    for x in vertices:
        for y, w in adj[x].items():
            a, b = label[x], label[y]
            if a < b:
                edges.append((a, b, w))
    edges.sort()
    return len(vertices), tuple(edges)


def _dc(adj: dict[int, dict[int, Fraction]], q: Fraction, memo: dict) -> Fraction:
    """Z of a loopless simple weighted graph given as an adjacency dict (consumed)."""
    factor = Fraction(1)
    # peel isolated vertices and leaves; replace series pairs at degree-2 vertices
    stack = [x for x in adj if len(adj[x]) <= 2]
    while stack:
        x = stack.pop()
        if x not in adj or len(adj[x]) > 2:
            continue
        if not adj[x]:
            factor *= q
            del adj[x]
            continue
        if len(adj[x]) == 1:
            (y, w), = adj[x].items()
            factor *= q + w
            del adj[x]
            del adj[y][x]
            if len(adj[y]) <= 2:
                stack.append(y)
            continue
        (y, w1), (z, w2) = adj[x].items()
        s = q + w1 + w2
        if s == 0:
            continue
        factor *= s
        w = w1 * w2 / s
        del adj[x]
        del adj[y][x]
        del adj[z][x]
        if z in adj[y]:
            w = (1 + adj[y][z]) * (1 + w) - 1
        if w == 0:
            adj[y].pop(z, None)
            adj[z].pop(y, None)
        else:
            adj[y][z] = w
            adj[z][y] = w
        for end in (y, z):
            if len(adj[end]) <= 2:
                stack.append(end)
    if not adj:
        return factor

    # split into components
    seen: set[int] = set()
    comps = []
    for s in adj:
        if s in seen:
            continue
        comp, queue = [s], [s]
        seen.add(s)
        for a in queue:
            for b in adj[a]:
                if b not in seen:
                    seen.add(b)
                    comp.append(b)
                    queue.append(b)
        comps.append(comp)
    if len(comps) > 1:
        for comp in comps:
            factor *= _dc({x: adj[x] for x in comp}, q, memo)
        return factor

    key = _canonical_key(list(adj), adj)
    hit = memo.get(key)
    if hit is not None:
        return factor * hit

    # branch on an edge at a minimum-degree vertex
    u = min(adj, key=lambda x: (len(adj[x]), x))
    v = min(adj[u])
    w = adj[u][v]

    deleted = {x: dict(nb) for x, nb in adj.items()}
    del deleted[u][v]
    del deleted[v][u]

    contracted = {x: dict(nb) for x, nb in adj.items() if x != v}
    del contracted[u][v]
    for y, wy in adj[v].items():
        if y == u:
            continue
        del contracted[y][v]
        if y in contracted[u]:
            merged = (1 + contracted[u][y]) * (1 + wy) - 1
        else:
            merged = wy
        if merged == 0:
            contracted[u].pop(y, None)
            contracted[y].pop(u, None)
        else:
            contracted[u][y] = merged
            contracted[y][u] = merged
    value = _dc(deleted, q, memo) + w * _dc(contracted, q, memo)
    memo[key] = value
    return factor * value


def z_del_con(g: Multigraph, q, w: WeightAssignment = None, memo: dict | None = None) -> Fraction:
    """Z_G(q, w) by memoized deletion-contraction.

    Loops contribute (1 + w), parallel classes merge into one edge of weight
    prod(1 + w_i) - 1, leaves contribute (q + w). The memo is keyed per q and
    is private to the call unless one is passed in.
    """
    q = as_rational(q)
    weights = _resolve_weights(g, w)
    table = ({} if memo is None else memo).setdefault(q, {})
    factor = Fraction(1)
    adj: dict[int, dict[int, Fraction]] = {x: {} for x in range(g.vertex_count)}
    for (a, b, _), wt in zip(g.edges, weights):
        if a == b:
            factor *= 1 + wt
            continue
        if b in adj[a]:
            merged = (1 + adj[a][b]) * (1 + wt) - 1
        else:
            merged = wt
        adj[a][b] = merged
        adj[b][a] = merged
    for a in adj:
        for b in [b for b, wt in adj[a].items() if wt == 0]:
            del adj[a][b]
    return factor * _dc(adj, q, table)


# ---------------------------------------------------------------------------
# specializations
# ---------------------------------------------------------------------------

def z_complete(n: int, q, v) -> Fraction:
    """Z_{K_n}(q, v) from the component recurrence, O(n^2) rational operations."""
    q, v = as_rational(q), as_rational(v)
    y = 1 + v
    conn = [Fraction(0)] * (n + 1)  # conn[k]: connected spanning subgraph weight of K_k
    for m in range(1, n + 1):
        total = y ** comb(m, 2)
        for k in range(1, m):
            total -= comb(m - 1, k - 1) * conn[k] * y ** comb(m - k, 2)
        conn[m] = total
    z = [Fraction(1)] + [Fraction(0)] * n
    for m in range(1, n + 1):
        z[m] = sum((comb(m - 1, k - 1) * q * conn[k] * z[m - k] for k in range(1, m + 1)), Fraction(0))
    return z[n]


def chromatic(g: Multigraph, q) -> Fraction:
    """Chromatic polynomial P_G(q) = Z_G(q, -1)."""
    return z_del_con(g, q, -1)


def classical_tutte(g: Multigraph, x, y) -> Fraction:
    x, y = as_rational(x), as_rational(y)
    if x == 1 or y == 1:
        raise UndefinedAtUnitLine("T_G is recovered from Z_G only off the lines x = 1 and y = 1")
    k = g.component_count()
    z = z_del_con(g, (x - 1) * (y - 1), y - 1)
    return z / ((x - 1) ** k * (y - 1) ** g.vertex_count)


# ---------------------------------------------------------------------------
# two-terminal gluing and the effective-weight factorization
# ---------------------------------------------------------------------------

def glue(f: Network, h: Network) -> Multigraph:
    """F and H sharing exactly their terminals (x with x, y with y)."""
    n = f.graph.vertex_count
    mapping = {h.x: f.x, h.y: f.y}
    nxt = n
    for vtx in range(h.graph.vertex_count):
        if vtx not in mapping:
            mapping[vtx] = nxt
            nxt += 1
    edges = list(f.graph.edges) + [(mapping[a], mapping[b], w) for a, b, w in h.graph.edges]
    return Multigraph(nxt, edges)


def effective_weight_raw(f: Network, q, budget: int = DEFAULT_SUBSET_BUDGET) -> Fraction:
    """v_F at q from the defining ratio (q-1) Z_{F_xy} / Z_{F+xy}(.., -1), minus one."""
    q = as_rational(q)
    closed = f.graph.identify(f.x, f.y)
    minus = f.graph.add_edge(f.x, f.y, -1)
    den = z_subset(minus, q, budget=budget)
    if den == 0:
        raise DegenerateEffectiveWeight(f"Z_{{F+xy}}(q, v, -1) vanishes at q = {q}")
    return (q - 1) * z_subset(closed, q, budget=budget) / den - 1


def verify_lemma2(f: Network, h: Network, q, v, budget: int = DEFAULT_SUBSET_BUDGET) -> bool:
    """Check Z_G = Z_{F+xy}(q,v,-1) Z_{H+xy}(q,v,v_F) / (q(q-1)) exactly for the gluing G."""
    q, v = as_rational(q), as_rational(v)
    if q in (0, 1):
        raise PoleAt(q, "q(q - 1)")
    fw = Network(f.graph.with_weights(v), f.x, f.y)
    hw = Network(h.graph.with_weights(v), h.x, h.y)
    vf = effective_weight_raw(fw, q, budget)
    lhs = z_subset(glue(fw, hw), q, budget=budget)
    f_minus = z_subset(fw.graph.add_edge(f.x, f.y, -1), q, budget=budget)
    h_plus = z_subset(hw.graph.add_edge(h.x, h.y, vf), q, budget=budget)
    return lhs == f_minus * h_plus / (q * (q - 1))


# ---------------------------------------------------------------------------
# transfer evaluation over gadget terms
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _leaf_tables(leaf_key: str, leaf: TwoTerminalGraph) -> tuple[tuple[UniPoly, ...], tuple[UniPoly, ...]]:
    g = leaf.graph
    _check_budget(g, DEFAULT_SUBSET_BUDGET)
    pairs = tuple((u, v) for u, v, _ in g.edges)
    same_c, diff_c = _count_tables(g.vertex_count, pairs, leaf.x, leaf.y)
    m = len(pairs)

    def by_weight_power(table):
        return tuple(UniPoly([table[k][j] for k in range(len(table))]) for j in range(m + 1))

    return by_weight_power(same_c), by_weight_power(diff_c)


def leaf_tables(t: Opaque) -> tuple[tuple[UniPoly, ...], tuple[UniPoly, ...]]:
    """Bivariate same/diff tables of a bare leaf: entry j is the q-polynomial multiplying w^j."""
    return _leaf_tables(t.leaf_name, t.leaf)


def kn_minus_edge_split(n: int, q, w):
    """(same, diff) sums of K_n minus the edge xy, grouped by the partition into components.

    Only ring operations are used, so q and w may be numbers or polynomials.
    D_k sums connected spanning subgraphs of K_k and E_k those of K_k minus xy;
    both come from splitting off the component of one vertex.
    """
    if n < 3:
        raise ValueError("K_n minus an edge needs n >= 3")
    y = 1 + w
    ypow = [y ** 0]
    for _ in range(n * (n - 1) // 2):
        ypow.append(ypow[-1] * y)

    def full(k):
        return ypow[k * (k - 1) // 2]

    D = [None, ypow[0]]
    for k in range(2, n + 1):
        acc = full(k)
        for j in range(1, k):
            acc = acc - comb(k - 1, j - 1) * D[j] * full(k - j)
        D.append(acc)
    E = [None, None, ypow[0] * 0]
    for k in range(3, n + 1):
        acc = ypow[k * (k - 1) // 2 - 1]
        for j in range(2, k):
            acc = acc - comb(k - 2, j - 2) * E[j] * full(k - j)
        for j in range(1, k):
            acc = acc - comb(k - 2, j - 1) * D[j] * full(k - j)
        E.append(acc)
    # R_m: Z of K_m
    R = [ypow[0]]
    for m in range(1, n - 1):
        acc = ypow[0] * 0
        for k in range(1, m + 1):
            acc = acc + comb(m - 1, k - 1) * q * D[k] * R[m - k]
        R.append(acc)
    same = ypow[0] * 0
    for k in range(3, n + 1):
        same = same + comb(n - 2, k - 2) * q * E[k] * R[n - k]
    diff = ypow[0] * 0
    for a in range(1, n):
        for b in range(1, n - a + 1):
            diff = diff + comb(n - 2, a - 1) * comb(n - 1 - a, b - 1) * D[a] * D[b] * R[n - a - b]
    return same, diff * q * q


def _closed_form(t: Opaque) -> bool:
    return t.name == "KnMinusEdge"


def _leaf_values(t: Opaque, q: Fraction, w: Fraction) -> tuple[Fraction, Fraction]:
    if _closed_form(t):
        return kn_minus_edge_split(t.params[0], q, w)
    same, diff = leaf_tables(t)
    def ev(table):
        acc = Fraction(0)
        for a in reversed(table):
            acc = acc * w + a(q)
        return acc
    return ev(same), ev(diff)


def leaf_split(t: Opaque, v0) -> SplitZ:
    """Same/diff split in q of a bare leaf with every edge weighted ``v0``."""
    if t.unit is not None:
        raise ValueError("leaf_split applies to bare leaves only")
    w = as_rational(v0)
    if _closed_form(t):
        return SplitZ(*kn_minus_edge_split(t.params[0], UniPoly.q(), w))
    same, diff = leaf_tables(t)
    def collapse(table):
        acc = UniPoly.constant(0)
        for a in reversed(table):
            acc = acc * UniPoly.constant(w) + a
        return acc
    return SplitZ(collapse(same), collapse(diff))


def term_split(t: GadgetTerm, q, v0) -> tuple[Fraction, Fraction]:
    """(same, diff) values of Z for realize(t) at a rational q.

    Gluing rules, with S/D the terminal-joined and terminal-separated sums:
      series:   S = S1 S2 / q,            D = (S1 D2 + D1 S2 + D1 D2) / q
      parallel: S = (q S1 S2 + S1 D2 + D1 S2) / q^2,   D = D1 D2 / q^2
    """
    q, v0 = as_rational(q), as_rational(v0)
    if q == 0:
        raise PoleAt(q, "q")
    memo: dict = {}

    def ev(s):
        key = id(s)
        if key in memo:
            return memo[key][1]
        if isinstance(s, Edge):
            out = (q * s.weight, q * q)
        elif isinstance(s, Opaque) and s.unit is None:
            out = _leaf_values(s, q, v0)
        elif isinstance(s, Opaque):
            # every leaf edge replaced by the unit: each contributes a factor D_u / q^2
            # and acts as an edge of weight q S_u / D_u
            Su, Du = ev(s.unit)
            if Du == 0:
                raise PoleAt(q, f"separated weight of the unit in {s}")
            S, D = _leaf_values(s, q, q * Su / Du)
            scale = (Du / (q * q)) ** s.leaf.graph.edge_count
            out = (S * scale, D * scale)
        elif isinstance(s, Series):
            S, D = ev(s.parts[0])
            for part in s.parts[1:]:
                S2, D2 = ev(part)
                S, D = S * S2 / q, (S * D2 + D * S2 + D * D2) / q
            out = (S, D)
        else:
            S, D = ev(s.parts[0])
            for part in s.parts[1:]:
                S2, D2 = ev(part)
                S, D = (q * S * S2 + S * D2 + D * S2) / (q * q), D * D2 / (q * q)
            out = (S, D)
        memo[key] = (s, out)
        return out

    return ev(t)


def z_term(t: GadgetTerm, q, v0) -> Fraction:
    """Z of realize(t) at (q, v0) via the transfer rules."""
    S, D = term_split(t, q, v0)
    return S + D


def z_term_closed(t: GadgetTerm, q, v0) -> Fraction:
    """Z of realize(t) with the terminals identified."""
    S, D = term_split(t, q, v0)
    return S + D / as_rational(q)


def z_term_uniform(t: GadgetTerm, q, w, closed: bool = False) -> Fraction:
    """Z of realize(t) (or its closure) with every edge, opaque or not, weighted ``w``."""
    from .graphs import substitute_edges

    w = as_rational(w)
    reweighted = substitute_edges(t, Edge(w))
    return z_term_closed(reweighted, q, w) if closed else z_term(reweighted, q, w)
