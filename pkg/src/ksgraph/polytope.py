"""Stable-set polytope machinery, fractional colorings and the
state-independence decision.

Everything here is exact: weights and test points are rationals, membership
and optimality come from the exact LP solver, and every verdict carries a
certificate that revalidates independently of the code path that produced it.

The decision itself: a graph realizable by rank-``r`` projectors in dimension
``d`` forces a contextuality obstruction on *every* state of that dimension
exactly when its fractional chromatic number exceeds ``d/r``.  When it does
not, the uniform point with entries ``r/d`` decomposes over independent sets,
and that decomposition is produced constructively from an optimal
equality-form fractional coloring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exactlp import EQ, GE, LinearProgram, solve_lp
from .graphs import (DEFAULT_ENUMERATION_CAP, Graph, enumerate_independent_sets,
                     enumerate_maximal_cliques, is_independent)


class PointDomainError(ValueError):
    """A polytope test point has the wrong length or entries outside [0,1]."""


class ColoringValidationError(ValueError):
    """A fractional coloring violates one of its structural invariants."""


def _check_point(g: Graph, point: Sequence) -> list[Fraction]:
    if len(point) != g.n:
        raise PointDomainError(f"point has {len(point)} entries, expected {g.n}")
    out = []
    for i, v in enumerate(point):
        f = Fraction(v)
        if not 0 <= f <= 1:
            raise PointDomainError(f"entry {i} is {f}, outside [0, 1]")
        out.append(f)
    return out


@dataclass
class FractionalColoring:
    """Weighted family of independent sets covering every vertex.

    ``coverage(v) >= 1`` for all v; equality-form colorings achieve
    ``coverage(v) == 1`` exactly.  The total weight of an optimal coloring is
    the fractional chromatic number.
    """

    graph: Graph
    weighted_sets: list[tuple[tuple[int, ...], Fraction]]

    @property
    def total_weight(self) -> Fraction:
        return sum((w for _, w in self.weighted_sets), Fraction(0))

    def coverage(self) -> list[Fraction]:
        cov = [Fraction(0)] * self.graph.n
        for members, w in self.weighted_sets:
            for v in members:
                cov[v] += w
        return cov

    def validate(self, require_equality: bool = False) -> None:
        for members, w in self.weighted_sets:
            if w < 0:
                raise ColoringValidationError(f"negative weight {w} on {members}")
            if not is_independent(self.graph, members):
                raise ColoringValidationError(f"set {members} is not independent")
        for v, c in enumerate(self.coverage()):
            if require_equality:
                if c != 1:
                    raise ColoringValidationError(f"coverage({v}) = {c}, expected exactly 1")
            elif c < 1:
                raise ColoringValidationError(f"coverage({v}) = {c} < 1")


@dataclass
class ConvexDecomposition:
    """Convex combination of independent-set incidence vectors hitting a target."""

    graph: Graph
    terms: list[tuple[tuple[int, ...], Fraction]]
    target: list[Fraction]


@dataclass
class SeparatingHyperplane:
    """Witness that a point is outside the noncontextual polytope.

    ``normal . z <= offset`` for the incidence vector z of every independent
    set, while ``normal . point > offset``.
    """

    graph: Graph
    normal: list[Fraction]
    offset: Fraction

    def separates(self, point: Sequence[Fraction]) -> bool:
        return sum(a * x for a, x in zip(self.normal, point)) > self.offset


@dataclass
class VerificationResult:
    ok: bool
    diagnostic: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class SicVerdict:
    """Outcome of the state-independence test for (graph, dim, rank)."""

    graph: Graph
    dim: int
    rank: int
    chi_f: Fraction
    is_sic: bool
    coloring: FractionalColoring
    decomposition: Optional[ConvexDecomposition] = None   # present iff not S-IC


def fractional_chromatic_number(g: Graph, cap: int = DEFAULT_ENUMERATION_CAP
                                ) -> tuple[Fraction, FractionalColoring]:
    """Exact fractional chromatic number with an optimal fractional coloring.

    Solves min(total weight) over weights on the *maximal* independent sets
    subject to coverage >= 1 on every vertex; restricting to maximal sets is
    harmless because enlarging a set never decreases any vertex's coverage.
    """
    sets = enumerate_independent_sets(g, maximal_only=True, cap=cap)
    k = len(sets)
    rows = []
    for v in range(g.n):
        rows.append([Fraction(1) if v in s else Fraction(0) for s in sets])
    lp = LinearProgram(objective=[Fraction(1)] * k, rows=rows,
                       senses=[GE] * g.n, rhs=[Fraction(1)] * g.n)
    sol = solve_lp(lp)
    assert sol.status == "optimal"  # the all-ones weighting is always feasible
    weighted = [(sets[j], w) for j, w in enumerate(sol.x) if w > 0]
    coloring = FractionalColoring(g, weighted)
    coloring.validate()
    return sol.objective_value, coloring


def tighten_fractional_coloring(fc: FractionalColoring) -> FractionalColoring:
    """Rewrite a valid coloring so that every vertex is covered exactly once.

    Wherever coverage(v) exceeds 1, weight is shifted from a set containing v
    onto the same set minus v (subsets of independent sets stay independent);
    weight landing on the empty set is dropped.  Total weight can only go
    down, and does so exactly when some shift empties a set.
    """
    fc.validate()
    weights: dict[tuple[int, ...], Fraction] = {}
    for members, w in fc.weighted_sets:
        if w > 0:
            weights[members] = weights.get(members, Fraction(0)) + w

    cov = [Fraction(0)] * fc.graph.n
    for members, w in weights.items():
        for v in members:
            cov[v] += w

    for v in range(fc.graph.n):
        while cov[v] > 1:
            excess = cov[v] - 1
            donor = next(s for s in sorted(weights) if v in s)
            shift = min(excess, weights[donor])
            weights[donor] -= shift
            if weights[donor] == 0:
                del weights[donor]
            reduced = tuple(u for u in donor if u != v)
            if reduced:
                weights[reduced] = weights.get(reduced, Fraction(0)) + shift
            # only v loses coverage: every other member stays covered via
            # `reduced`, and weight moved onto the empty set is dropped
            cov[v] -= shift

    out = FractionalColoring(fc.graph, sorted(weights.items()))
    out.validate(require_equality=True)
    assert out.total_weight <= fc.total_weight
    return out


def _incidence(g: Graph, s: Sequence[int]) -> list[Fraction]:
    vec = [Fraction(0)] * g.n
    for v in s:
        vec[v] = Fraction(1)
    return vec


def stab_membership(g: Graph, point: Sequence, cap: int = DEFAULT_ENUMERATION_CAP
                    ) -> tuple[bool, ConvexDecomposition | SeparatingHyperplane]:
    """Exact membership of a point in the noncontextual (stable-set) polytope.

    Membership means some convex combination of independent-set incidence
    vectors equals the point; the combination is returned.  Otherwise the
    Farkas certificate of the infeasible LP is turned into a separating
    hyperplane, which is re-checked against every enumerated incidence
    vector before being returned.
    """
    x = _check_point(g, point)
    sets = enumerate_independent_sets(g, maximal_only=False, cap=cap)
    rows = [[Fraction(1) if v in s else Fraction(0) for s in sets] for v in range(g.n)]
    rows.append([Fraction(1)] * len(sets))  # convexity row
    lp = LinearProgram(objective=[Fraction(0)] * len(sets), rows=rows,
                       senses=[EQ] * (g.n + 1), rhs=list(x) + [Fraction(1)])
    sol = solve_lp(lp)
    if sol.status == "optimal":
        terms = [(sets[j], w) for j, w in enumerate(sol.x) if w > 0]
        dec = ConvexDecomposition(g, terms, list(x))
        assert verify_decomposition(dec)
        return True, dec
    assert sol.status == "infeasible"
    y = sol.farkas
    normal = y[:g.n]
    offset = -y[g.n]
    hyper = SeparatingHyperplane(g, normal, offset)
    # certificate must hold for every incidence vector and cut off the point
    for s in sets:
        assert sum(normal[v] for v in s) <= offset
    assert hyper.separates(x)
    return False, hyper


def qstab_membership(g: Graph, point: Sequence, cap: int = DEFAULT_ENUMERATION_CAP
                     ) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Clique-constrained membership: every maximal clique sums to at most 1.

    Returns the first violating clique (in enumeration order) on failure.
    """
    x = _check_point(g, point)
    for clique in enumerate_maximal_cliques(g, cap=cap):
        if sum(x[v] for v in clique) > 1:
            return False, clique
    return True, None


def verify_decomposition(dec: ConvexDecomposition) -> VerificationResult:
    """Re-check a convex decomposition from scratch.

    Conditions, in order: nonnegative weights, weights summing to exactly 1,
    every set independent, weighted incidence sum equal to the target on
    every coordinate.  The first violated condition is reported.
    """
    g = dec.graph
    for members, w in dec.terms:
        if w < 0:
            return VerificationResult(False, f"negative weight {w} on set {members}")
    total = sum((w for _, w in dec.terms), Fraction(0))
    if total != 1:
        return VerificationResult(False, f"weights sum to {total}, expected 1")
    for members, _ in dec.terms:
        if not is_independent(g, members):
            return VerificationResult(False, f"set {members} is not independent")
    if len(dec.target) != g.n:
        return VerificationResult(
            False, f"target has {len(dec.target)} entries, expected {g.n}")
    achieved = [Fraction(0)] * g.n
    for members, w in dec.terms:
        for v in members:
            achieved[v] += w
    for v in range(g.n):
        if achieved[v] != Fraction(dec.target[v]):
            return VerificationResult(
                False, f"coordinate {v}: decomposition gives {achieved[v]}, "
                       f"target is {dec.target[v]}")
    return VerificationResult(True)


def sic_test(g: Graph, dim: int, rank: int = 1,
             cap: int = DEFAULT_ENUMERATION_CAP) -> SicVerdict:
    """Decide state-independent contextuality for rank-``rank`` projectors in
    dimension ``dim``.

    The verdict is the exact comparison chi_f(g) > dim/rank.  The optimal
    fractional coloring is always attached.  When the graph is *not*
    state-independent contextual, the uniform point rank/dim is decomposed
    constructively: tighten the coloring to equality form, scale its weights
    by rank/dim, and give the remaining mass to the empty set.
    """
    if dim < 1 or rank < 1:
        raise ValueError(f"need dim >= 1 and rank >= 1, got ({dim}, {rank})")
    if rank > dim:
        raise ValueError(f"rank {rank} exceeds dimension {dim}")
    chi_f, coloring = fractional_chromatic_number(g, cap=cap)
    ratio = Fraction(dim, rank)
    if chi_f > ratio:
        return SicVerdict(g, dim, rank, chi_f, True, coloring)

    tight = tighten_fractional_coloring(coloring)
    scale = Fraction(rank, dim)
    terms = [(members, w * scale) for members, w in tight.weighted_sets]
    leftover = 1 - tight.total_weight * scale
    if leftover:
        terms.append(((), leftover))
    dec = ConvexDecomposition(g, terms, [scale] * g.n)
    check = verify_decomposition(dec)
    assert check.ok, check.diagnostic
    return SicVerdict(g, dim, rank, chi_f, False, coloring, dec)
