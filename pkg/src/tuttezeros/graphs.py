"""Multigraphs, two-terminal gadget terms and their realization.

A gadget is described by a term rather than a raw graph:

    Edge(w)                 a single edge x-y of weight w
    Series(t1, ..., tk)     t1's y glued to t2's x, and so on
    Parallel(t1, ..., tk)   all x's identified, all y's identified
    Opaque(leaf)            a fixed two-terminal graph (Petersen minus an edge, K_n minus an edge)
    Opaque(leaf)[u]         the same leaf with every edge replaced by the term u

Opaque leaves are stored with placeholder weights; every evaluation takes the
uniform weight ``v0`` to put on their edges.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Union

from .algebra import as_rational, format_rational
from .errors import BudgetExceeded, NotSeriesParallel, NotTwoTerminalGraph

DEFAULT_MAX_KN = 7


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class Multigraph:
    """Vertices ``0..vertex_count-1`` and an ordered edge list; loops and parallels allowed."""

    vertex_count: int
    edges: tuple = ()

    def __post_init__(self):
        edges = tuple((int(u), int(v), as_rational(w)) for u, v, w in self.edges)
        for u, v, _ in edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range for {self.vertex_count} vertices")
        object.__setattr__(self, "edges", edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def weights(self) -> list[Fraction]:
        return [w for _, _, w in self.edges]

    def with_weights(self, weights) -> "Multigraph":
        """Copy with a uniform weight (scalar) or per-edge weights (sequence or mapping)."""
        if isinstance(weights, (int, Fraction, str)):
            w = as_rational(weights)
            return Multigraph(self.vertex_count, [(u, v, w) for u, v, _ in self.edges])
        if hasattr(weights, "keys"):
            ws = [weights[i] for i in range(len(self.edges))]
        else:
            ws = list(weights)
        if len(ws) != len(self.edges):
            raise ValueError("weight assignment must cover every edge")
        return Multigraph(self.vertex_count, [(u, v, w) for (u, v, _), w in zip(self.edges, ws)])

    def degree(self, x: int) -> int:
        return sum((u == x) + (v == x) for u, v, _ in self.edges)

    def has_loop(self) -> bool:
        return any(u == v for u, v, _ in self.edges)

    def adjacent(self, a: int, b: int) -> bool:
        return any({u, v} == {a, b} for u, v, _ in self.edges)

    def component_count(self) -> int:
        dsu = _DSU(self.vertex_count)
        k = self.vertex_count
        for u, v, _ in self.edges:
            k -= dsu.union(u, v)
        return k

    def is_connected(self) -> bool:
        return self.component_count() <= 1

    def add_edge(self, u: int, v: int, w) -> "Multigraph":
        return Multigraph(self.vertex_count, self.edges + ((u, v, as_rational(w)),))

    def identify(self, a: int, b: int) -> "Multigraph":
        """Merge vertex b into a; edges between them become loops."""
        if a == b:
            return self
        def relabel(x):
            x = a if x == b else x
            return x - 1 if x > b else x
        return Multigraph(self.vertex_count - 1, [(relabel(u), relabel(v), w) for u, v, w in self.edges])

    def disjoint_union(self, other: "Multigraph") -> "Multigraph":
        n = self.vertex_count
        return Multigraph(n + other.vertex_count,
                          self.edges + tuple((u + n, v + n, w) for u, v, w in other.edges))

    def girth(self) -> int | None:
        """Length of a shortest cycle (loops count 1, parallel pairs count 2)."""
        if self.has_loop():
            return 1
        seen = set()
        for u, v, _ in self.edges:
            key = (min(u, v), max(u, v))
            if key in seen:
                return 2
            seen.add(key)
        adj: dict[int, list[int]] = {i: [] for i in range(self.vertex_count)}
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        best = None
        for s in range(self.vertex_count):
            dist, parent, queue = {s: 0}, {s: -1}, [s]
            for x in queue:
                for y in adj[x]:
                    if y not in dist:
                        dist[y], parent[y] = dist[x] + 1, x
                        queue.append(y)
                    elif parent[x] != y:
                        cyc = dist[x] + dist[y] + 1
                        if best is None or cyc < best:
                            best = cyc
        return best

    def serialize(self) -> str:
        body = ",".join(f"({u},{v},{format_rational(w)})" for u, v, w in self.edges)
        return f"V{self.vertex_count}[{body}]"


@dataclass(frozen=True)
class Network:
    """A multigraph with two distinguished terminals (dipoles allowed)."""

    graph: Multigraph
    x: int
    y: int

    def __post_init__(self):
        if self.x == self.y:
            raise ValueError("terminals must be distinct")


@dataclass(frozen=True)
class TwoTerminalGraph(Network):
    """Connected, loopless, with non-adjacent terminals x != y."""

    def __post_init__(self):
        super().__post_init__()
        g = self.graph
        if not g.is_connected():
            raise NotTwoTerminalGraph("graph is not connected")
        if g.has_loop():
            raise NotTwoTerminalGraph("graph has a loop")
        if g.adjacent(self.x, self.y):
            raise NotTwoTerminalGraph("terminals are adjacent")


class Terminals(NamedTuple):
    x: int
    y: int


# ---------------------------------------------------------------------------
# gadget terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "weight", as_rational(self.weight))

    def __str__(self) -> str:
        w = self.weight
        return f"E({w.numerator})" if w.denominator == 1 else f"E({w.numerator}/{w.denominator})"


@dataclass(frozen=True)
class Series:
    parts: tuple

    def __init__(self, *parts):
        if len(parts) == 1 and not isinstance(parts[0], (Edge, Series, Parallel, Opaque)):
            parts = tuple(parts[0])
        if len(parts) < 2:
            raise ValueError("Series needs at least two parts")
        object.__setattr__(self, "parts", tuple(parts))

    def __str__(self) -> str:
        return "S(" + ",".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class Parallel:
    parts: tuple

    def __init__(self, *parts):
        if len(parts) == 1 and not isinstance(parts[0], (Edge, Series, Parallel, Opaque)):
            parts = tuple(parts[0])
        if len(parts) < 2:
            raise ValueError("Parallel needs at least two parts")
        object.__setattr__(self, "parts", tuple(parts))

    def __str__(self) -> str:
        return "P(" + ",".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class Opaque:
    name: str
    params: tuple
    leaf: TwoTerminalGraph = field(compare=False, hash=False, repr=False)
    planar: bool = field(compare=False, hash=False, default=False)
    unit: "GadgetTerm | None" = None

    def __str__(self) -> str:
        text = self.name
        if self.params:
            text += "(" + ",".join(map(str, self.params)) + ")"
        if self.unit is not None:
            text += f"[{self.unit}]"
        return text

    @property
    def leaf_name(self) -> str:
        """Serialization of the bare leaf, without any edge substitution."""
        if self.params:
            return f"{self.name}(" + ",".join(map(str, self.params)) + ")"
        return self.name

    def subdivided(self, unit: "GadgetTerm") -> "Opaque":
        """The leaf with every edge replaced by ``unit`` (two terminals of unit on the edge ends)."""
        if self.unit is not None:
            raise ValueError("leaf already carries a substitution")
        return Opaque(self.name, self.params, self.leaf, self.planar and is_planar(unit), unit)


GadgetTerm = Union[Edge, Series, Parallel, Opaque]


def petersen_minus_edge() -> Opaque:
    """Petersen graph with the edge (0, 1) deleted; terminals x=0, y=1.

    Labelling: outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5.
    """
    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5))
    for i in range(5):
        edges.append((5 + i, 5 + (i + 2) % 5))
    for i in range(5):
        edges.append((i, i + 5))
    edges = [(u, v, 1) for u, v in edges if {u, v} != {0, 1}]
    leaf = TwoTerminalGraph(Multigraph(10, edges), 0, 1)
    return Opaque("PetersenMinusEdge", (), leaf, planar=False)


def complete_minus_edge(n: int, max_n: int = DEFAULT_MAX_KN) -> Opaque:
    """K_n with the edge between the terminals 0 and 1 removed."""
    if n < 3:
        raise ValueError("complete_minus_edge needs n >= 3")
    if n > max_n:
        raise BudgetExceeded(f"K_{n} exceeds the configured maximum K_{max_n}")
    edges = [(i, j, 1) for i in range(n) for j in range(i + 1, n) if (i, j) != (0, 1)]
    leaf = TwoTerminalGraph(Multigraph(n, edges), 0, 1)
    return Opaque("KnMinusEdge", (n,), leaf, planar=n <= 4)


_OPAQUE_BUILDERS: dict[str, Callable[..., Opaque]] = {
    "PetersenMinusEdge": petersen_minus_edge,
    # a stored recipe is not subject to the search budget
    "KnMinusEdge": lambda n: complete_minus_edge(n, max_n=max(n, DEFAULT_MAX_KN)),
}


# ---------------------------------------------------------------------------
# structural queries
# ---------------------------------------------------------------------------

def is_dipole(t: GadgetTerm) -> bool:
    if isinstance(t, Edge):
        return True
    return isinstance(t, Parallel) and all(is_dipole(p) for p in t.parts)


def is_planar(t: GadgetTerm) -> bool:
    """Planarity of realize(t) + xy; series-parallel terms are always planar."""
    if isinstance(t, Edge):
        return True
    if isinstance(t, Opaque):
        return t.planar
    return all(is_planar(p) for p in t.parts)


def is_series_parallel(t: GadgetTerm) -> bool:
    if isinstance(t, Edge):
        return True
    if isinstance(t, Opaque):
        return False
    return all(is_series_parallel(p) for p in t.parts)


def term_size(t: GadgetTerm) -> int:
    """Number of leaves (edges and opaque leaves)."""
    if isinstance(t, (Edge, Opaque)):
        return 1
    return sum(term_size(p) for p in t.parts)


def edge_count(t: GadgetTerm) -> int:
    if isinstance(t, Edge):
        return 1
    if isinstance(t, Opaque):
        per_edge = 1 if t.unit is None else edge_count(t.unit)
        return t.leaf.graph.edge_count * per_edge
    return sum(edge_count(p) for p in t.parts)


def vertex_count(t: GadgetTerm) -> int:
    """Vertices of realize(t), terminals included."""
    def inner(s):
        # vertices excluding the two terminals
        if isinstance(s, Edge):
            return 0
        if isinstance(s, Opaque):
            per_edge = 0 if s.unit is None else inner(s.unit)
            return s.leaf.graph.vertex_count - 2 + s.leaf.graph.edge_count * per_edge
        if isinstance(s, Series):
            return sum(inner(p) for p in s.parts) + len(s.parts) - 1
        return sum(inner(p) for p in s.parts)
    return inner(t) + 2


def is_two_terminal_graph(t: GadgetTerm) -> bool:
    """Whether realize(t) has non-adjacent terminals (it is always connected and loopless)."""
    if isinstance(t, Edge):
        return False
    if isinstance(t, Opaque):
        return True
    if isinstance(t, Series):
        return True
    return all(is_two_terminal_graph(p) for p in t.parts)


def substitute_edges(t: GadgetTerm, unit: GadgetTerm) -> GadgetTerm:
    """Replace every Edge leaf of t by the term ``unit``."""
    if isinstance(t, Edge):
        return unit
    if isinstance(t, Opaque):
        return t
    return type(t)(*(substitute_edges(p, unit) for p in t.parts))


def dual_term(t: GadgetTerm) -> GadgetTerm:
    """Planar dual of a series-parallel term: Series and Parallel swap, edges stay."""
    if isinstance(t, Edge):
        return t
    if isinstance(t, Opaque):
        raise NotSeriesParallel(f"{t} is not series-parallel")
    if isinstance(t, Series):
        return Parallel(*(dual_term(p) for p in t.parts))
    return Series(*(dual_term(p) for p in t.parts))


# ---------------------------------------------------------------------------
# realization
# ---------------------------------------------------------------------------

def realize(t: GadgetTerm, v0=None) -> tuple[Multigraph, Terminals]:
    """Materialize a term; terminals are always vertices 0 (x) and 1 (y).

    Interior vertices are numbered depth-first in term order. Opaque leaves get
    the uniform weight ``v0`` when given, else keep their stored weights.
    """
    leaf_weight = None if v0 is None else as_rational(v0)
    edges: list = []
    counter = [2]

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    def build(s, x, y):
        if isinstance(s, Edge):
            edges.append((x, y, s.weight))
        elif isinstance(s, Series):
            joints = [x] + [fresh() for _ in range(len(s.parts) - 1)] + [y]
            for i, part in enumerate(s.parts):
                build(part, joints[i], joints[i + 1])
        elif isinstance(s, Parallel):
            for part in s.parts:
                build(part, x, y)
        elif isinstance(s, Opaque):
            leaf = s.leaf
            mapping = {leaf.x: x, leaf.y: y}
            for vtx in range(leaf.graph.vertex_count):
                if vtx not in mapping:
                    mapping[vtx] = fresh()
            for u, v, w in leaf.graph.edges:
                if s.unit is not None:
                    build(s.unit, mapping[u], mapping[v])
                else:
                    edges.append((mapping[u], mapping[v], w if leaf_weight is None else leaf_weight))
        else:
            raise TypeError(f"not a gadget term: {s!r}")

    build(t, 0, 1)
    return Multigraph(counter[0], edges), Terminals(0, 1)


def network(t: GadgetTerm, v0=None) -> Network:
    g, (x, y) = realize(t, v0)
    if is_two_terminal_graph(t):
        return TwoTerminalGraph(g, x, y)
    return Network(g, x, y)


def closure(t: GadgetTerm, v0=None) -> Multigraph:
    """realize(t) with its two terminals identified."""
    g, (x, y) = realize(t, v0)
    return g.identify(x, y)


# ---------------------------------------------------------------------------
# term text format
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z]+)|(-?\d+(?:/\d+)?)|(.))")


def parse_term(text: str) -> GadgetTerm:
    """Inverse of ``str(term)``: ``P(E(-3),S(E(-3),E(-3)))``, ``KnMinusEdge(6)``, ..."""
    tokens = []
    for m in _TOKEN.finditer(text):
        name, num, punct = m.groups()
        if name:
            tokens.append(("name", name))
        elif num:
            tokens.append(("num", num))
        elif punct and not punct.isspace():
            tokens.append(("punct", punct))
    pos = 0

    def expect(kind, value=None):
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError(f"unexpected end of term text {text!r}")
        tk = tokens[pos]
        if tk[0] != kind or (value is not None and tk[1] != value):
            raise ValueError(f"unexpected token {tk[1]!r} in {text!r}")
        pos += 1
        return tk[1]

    def peek(value):
        return pos < len(tokens) and tokens[pos][1] == value

    def term():
        name = expect("name")
        if name == "E":
            expect("punct", "(")
            w = Fraction(expect("num"))
            expect("punct", ")")
            return Edge(w)
        if name in ("S", "P"):
            expect("punct", "(")
            parts = [term()]
            while peek(","):
                expect("punct", ",")
                parts.append(term())
            expect("punct", ")")
            return (Series if name == "S" else Parallel)(*parts)
        if name in _OPAQUE_BUILDERS:
            params = []
            if peek("("):
                expect("punct", "(")
                params.append(int(expect("num")))
                while peek(","):
                    expect("punct", ",")
                    params.append(int(expect("num")))
                expect("punct", ")")
            leaf = _OPAQUE_BUILDERS[name](*params)
            if peek("["):
                expect("punct", "[")
                unit = term()
                expect("punct", "]")
                leaf = leaf.subdivided(unit)
            return leaf
        raise ValueError(f"unknown constructor {name!r}")

    result = term()
    if pos != len(tokens):
        raise ValueError(f"trailing text in term {text!r}")
    return result


def path(s: int, unit: GadgetTerm) -> GadgetTerm:
    return unit if s == 1 else Series(*([unit] * s))


def dipole(s: int, unit: GadgetTerm) -> GadgetTerm:
    return unit if s == 1 else Parallel(*([unit] * s))
