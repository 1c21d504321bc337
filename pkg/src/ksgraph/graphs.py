"""Orthogonality graphs and their basic combinatorics.

A graph here plays the role of an orthogonality diagram of projective
measurements: one vertex per projector, an edge whenever two projectors are
orthogonal (compatible).  Maximal cliques are the measurement contexts,
independent sets the deterministic noncontextual assignments.

Vertices are 0-based internally.  The ``.ograph`` text format and every JSON
artifact use 1-based vertex numbers; conversion happens only in the I/O
helpers of this module and of :mod:`ksgraph.serialize`.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Optional, Sequence

DEFAULT_ENUMERATION_CAP = 10**7


class InvalidVertexError(ValueError):
    """A vertex index lies outside ``0..n-1`` or a set has duplicates."""


class GraphFormatError(ValueError):
    """A ``.ograph`` file violates the format; message carries the line number."""


class ResourceLimitError(RuntimeError):
    """An enumeration or search exceeded its configured cap."""


class Graph:
    """Undirected simple graph with optional per-vertex text labels.

    The adjacency relation is stored symmetrically and is irreflexive by
    construction; self-loops and duplicate edges are rejected.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (),
                 labels: Optional[Sequence[str]] = None):
        if n < 1:
            raise ValueError(f"graph needs at least one vertex, got n={n}")
        self.n = n
        self._adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            self.add_edge(u, v)
        if labels is not None:
            if len(labels) != n:
                raise ValueError(f"expected {n} labels, got {len(labels)}")
            self.labels: Optional[list[str]] = list(labels)
        else:
            self.labels = None

    def add_edge(self, u: int, v: int) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        self._adj[u].add(v)
        self._adj[v].add(u)

    def _check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < self.n:
            raise InvalidVertexError(f"vertex {v!r} not in 0..{self.n - 1}")

    def adjacent(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return v in self._adj[u]

    def neighbors(self, v: int) -> frozenset[int]:
        self._check_vertex(v)
        return frozenset(self._adj[v])

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self._adj[v])

    def edges(self) -> list[tuple[int, int]]:
        """Edges as sorted (u, v) pairs with u < v, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in sorted(self._adj[u]) if u < v]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    def label(self, v: int) -> Optional[str]:
        self._check_vertex(v)
        return self.labels[v] if self.labels is not None else None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __hash__(self):
        return hash((self.n, tuple(frozenset(a) for a in self._adj)))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"


def _check_vertex_set(g: Graph, s: Sequence[int]) -> tuple[int, ...]:
    """Validate a vertex set for g and return it as a sorted tuple."""
    seen = set()
    for v in s:
        g._check_vertex(v)
        if v in seen:
            raise InvalidVertexError(f"duplicate vertex {v} in set")
        seen.add(v)
    return tuple(sorted(seen))


def is_independent(g: Graph, s: Sequence[int]) -> bool:
    """True iff no two vertices of s are adjacent in g."""
    members = _check_vertex_set(g, s)
    return all(not g.adjacent(u, v) for u, v in combinations(members, 2))


def is_clique(g: Graph, s: Sequence[int]) -> bool:
    """True iff every pair of vertices of s is adjacent in g."""
    members = _check_vertex_set(g, s)
    return all(g.adjacent(u, v) for u, v in combinations(members, 2))


def complement(g: Graph) -> Graph:
    """Graph with adjacency negated off the diagonal; labels carried over."""
    edges = [(u, v) for u, v in combinations(range(g.n), 2) if not g.adjacent(u, v)]
    return Graph(g.n, edges, labels=g.labels)


def join(g1: Graph, g2: Graph) -> Graph:
    """Disjoint union of g1 and g2 plus every edge between the two sides.

    Vertices of g2 are shifted by g1.n.  Labels of the second copy get a
    prime suffix when both inputs carry labels.
    """
    n = g1.n + g2.n
    edges = list(g1.edges())
    edges += [(u + g1.n, v + g1.n) for u, v in g2.edges()]
    edges += [(u, v + g1.n) for u in range(g1.n) for v in range(g2.n)]
    labels = None
    if g1.labels is not None and g2.labels is not None:
        labels = list(g1.labels) + [lab + "'" for lab in g2.labels]
    return Graph(n, edges, labels=labels)


def _independent_sets_recursive(g: Graph, cap: int) -> list[tuple[int, ...]]:
    """All independent sets (including the empty set), lexicographic order."""
    out: list[tuple[int, ...]] = [()]
    adj = g._adj

    def extend(current: list[int], start: int) -> None:
        for v in range(start, g.n):
            if any(v in adj[u] for u in current):
                continue
            current.append(v)
            if len(out) >= cap:
                raise ResourceLimitError(
                    f"independent-set enumeration exceeded cap of {cap} sets")
            out.append(tuple(current))
            extend(current, v + 1)
            current.pop()

    extend([], 0)
    return out


def _bron_kerbosch_cliques(g: Graph, cap: int) -> list[tuple[int, ...]]:
    """All maximal cliques of g via pivoting Bron-Kerbosch."""
    adj = g._adj
    out: list[tuple[int, ...]] = []

    def expand(r: set[int], p: set[int], x: set[int]) -> None:
        if not p and not x:
            if len(out) >= cap:
                raise ResourceLimitError(
                    f"maximal-clique enumeration exceeded cap of {cap} sets")
            out.append(tuple(sorted(r)))
            return
        # pivot = vertex of p|x with most neighbors in p (lowest index on ties)
        pivot, best = -1, -1
        for u in sorted(p | x):
            k = len(p & adj[u])
            if k > best:
                pivot, best = u, k
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    expand(set(), set(range(g.n)), set())
    return sorted(out)


def enumerate_independent_sets(g: Graph, maximal_only: bool = False,
                               cap: int = DEFAULT_ENUMERATION_CAP) -> list[tuple[int, ...]]:
    """Independent sets of g as sorted tuples, lexicographic output order.

    With ``maximal_only`` the result is exactly the inclusion-maximal
    independent sets; otherwise all of them, the empty set included (it is
    the all-zero noncontextual assignment and certain convex decompositions
    need it explicitly).  Raises ResourceLimitError past ``cap`` sets.
    """
    if maximal_only:
        return _bron_kerbosch_cliques(complement(g), cap)
    return _independent_sets_recursive(g, cap)


def enumerate_maximal_cliques(g: Graph, cap: int = DEFAULT_ENUMERATION_CAP) -> list[tuple[int, ...]]:
    """All inclusion-maximal cliques of g, lexicographic output order.

    Equals ``enumerate_independent_sets(complement(g), True)`` by duality.
    """
    return _bron_kerbosch_cliques(g, cap)


def incidence_vector(g: Graph, s: Sequence[int]):
    """Length-n 0/1 vector (exact Fractions) of a vertex set."""
    from fractions import Fraction

    members = _check_vertex_set(g, s)
    vec = [Fraction(0)] * g.n
    for v in members:
        vec[v] = Fraction(1)
    return vec


def parse_ograph(text: str) -> Graph:
    """Parse the ``.ograph`` text format.

    Header ``p ograph <n> <m>``, then ``e <u> <v>`` lines with 1-based
    vertices, optional ``l <v> <label>`` lines, ``c`` comment lines.
    Self-loops, duplicate edges and edge-count mismatches are rejected.
    """
    n = None
    m_declared = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    labels: dict[int, str] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "p":
            if n is not None:
                raise GraphFormatError(f"line {lineno}: duplicate header")
            if len(parts) != 4 or parts[1] != "ograph":
                raise GraphFormatError(f"line {lineno}: expected 'p ograph <n> <m>'")
            try:
                n, m_declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer header fields") from None
            if n < 1:
                raise GraphFormatError(f"line {lineno}: vertex count must be >= 1")
        elif kind == "e":
            if n is None:
                raise GraphFormatError(f"line {lineno}: edge before header")
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: expected 'e <u> <v>'")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer edge endpoint") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"line {lineno}: vertex out of range 1..{n}")
            if u == v:
                raise GraphFormatError(f"line {lineno}: self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"line {lineno}: duplicate edge {u} {v}")
            seen.add(key)
            edges.append((u - 1, v - 1))
        elif kind == "l":
            if n is None:
                raise GraphFormatError(f"line {lineno}: label before header")
            if len(parts) < 3:
                raise GraphFormatError(f"line {lineno}: expected 'l <v> <label>'")
            try:
                v = int(parts[1])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer label vertex") from None
            if not 1 <= v <= n:
                raise GraphFormatError(f"line {lineno}: vertex out of range 1..{n}")
            labels[v - 1] = " ".join(parts[2:])
        else:
            raise GraphFormatError(f"line {lineno}: unknown line type {kind!r}")

    if n is None:
        raise GraphFormatError("line 1: missing 'p ograph' header")
    if m_declared != len(edges):
        raise GraphFormatError(
            f"header declares {m_declared} edges but file lists {len(edges)}")
    label_list = None
    if labels:
        label_list = [labels.get(v, str(v + 1)) for v in range(n)]
    return Graph(n, edges, labels=label_list)


def format_ograph(g: Graph, comment: Optional[str] = None) -> str:
    """Serialize a graph to the ``.ograph`` text format (1-based)."""
    lines = []
    if comment:
        for c in comment.splitlines():
            lines.append(f"c {c}")
    lines.append(f"p ograph {g.n} {g.num_edges}")
    for u, v in g.edges():
        lines.append(f"e {u + 1} {v + 1}")
    if g.labels is not None:
        for v, lab in enumerate(g.labels):
            lines.append(f"l {v + 1} {lab}")
    return "\n".join(lines) + "\n"
