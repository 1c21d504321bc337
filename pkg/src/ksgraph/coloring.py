"""Exact clique number and chromatic number.

Both are computed by deterministic branch and bound: either an exact answer
comes back (with a witness for the chromatic number) or a ResourceLimitError
is raised once the node budget runs out -- never a heuristic value.
"""

from __future__ import annotations

from .graphs import Graph, ResourceLimitError, enumerate_maximal_cliques

DEFAULT_NODE_BUDGET = 10**7


def _max_clique(g: Graph, budget: int) -> tuple[int, ...]:
    """Lexicographically-first maximum clique via branch and bound."""
    adj = [g.neighbors(v) for v in range(g.n)]
    best: list[tuple[int, ...]] = [()]
    nodes = [0]

    # order candidates by degree (desc), index (asc) for stronger pruning
    order = sorted(range(g.n), key=lambda v: (-len(adj[v]), v))
    rank = {v: i for i, v in enumerate(order)}

    def expand(current: list[int], candidates: list[int]) -> None:
        nodes[0] += 1
        if nodes[0] > budget:
            raise ResourceLimitError(f"clique search exceeded node budget of {budget}")
        if len(current) > len(best[0]):
            best[0] = tuple(sorted(current))
        if len(current) + len(candidates) <= len(best[0]):
            return
        for i, v in enumerate(candidates):
            if len(current) + len(candidates) - i <= len(best[0]):
                return
            current.append(v)
            expand(current, [u for u in candidates[i + 1:] if u in adj[v]])
            current.pop()

    expand([], order)
    # rerun restricted to the best size to make the witness lexicographic-first
    size = len(best[0])
    witness: list[tuple[int, ...]] = []

    def expand_lex(current: list[int], candidates: list[int]) -> bool:
        if len(current) == size:
            witness.append(tuple(current))
            return True
        if len(current) + len(candidates) < size:
            return False
        for i, v in enumerate(candidates):
            current.append(v)
            if expand_lex(current, [u for u in candidates[i + 1:] if u in adj[v]]):
                return True
            current.pop()
        return False

    expand_lex([], list(range(g.n)))
    return witness[0] if witness else ()


def clique_number(g: Graph, budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Exact size of a maximum clique."""
    return len(_max_clique(g, budget))


def max_clique(g: Graph, budget: int = DEFAULT_NODE_BUDGET) -> tuple[int, ...]:
    """One maximum clique (lexicographically first among the largest)."""
    return _max_clique(g, budget)


def chromatic_number(g: Graph, budget: int = DEFAULT_NODE_BUDGET) -> tuple[int, list[int]]:
    """Exact chromatic number and one witnessing proper coloring.

    DSATUR branch and bound: a maximum clique is pre-colored to break color
    symmetry and supply the lower bound, a DSATUR greedy pass supplies the
    upper bound.  Vertex selection ties break by highest saturation, then
    highest degree, then lowest index.  Colors in the witness are 0-based.
    """
    n = g.n
    adj = [g.neighbors(v) for v in range(n)]
    clique = _max_clique(g, budget)
    lb = len(clique)

    def greedy() -> list[int]:
        colors = [-1] * n
        neigh_colors: list[set[int]] = [set() for _ in range(n)]
        for _ in range(n):
            v = max((u for u in range(n) if colors[u] < 0),
                    key=lambda u: (len(neigh_colors[u]), len(adj[u]), -u))
            c = 0
            while c in neigh_colors[v]:
                c += 1
            colors[v] = c
            for u in adj[v]:
                if colors[u] < 0:
                    neigh_colors[u].add(c)
        return colors

    ub_colors = greedy()
    ub = max(ub_colors) + 1
    if lb == ub:
        return ub, ub_colors

    best = [ub, ub_colors]
    colors = [-1] * n
    neigh_colors = [set() for _ in range(n)]
    nodes = [0]

    for c, v in enumerate(clique):
        colors[v] = c
        for u in adj[v]:
            if colors[u] < 0:
                neigh_colors[u].add(c)

    uncolored = n - len(clique)

    def branch(used: int, remaining: int) -> None:
        nodes[0] += 1
        if nodes[0] > budget:
            raise ResourceLimitError(f"coloring search exceeded node budget of {budget}")
        if used >= best[0]:
            return
        if remaining == 0:
            best[0] = used
            best[1] = colors[:]
            return
        v = max((u for u in range(n) if colors[u] < 0),
                key=lambda u: (len(neigh_colors[u]), len(adj[u]), -u))
        limit = min(used + 1, best[0] - 1)  # at most one brand-new color
        for c in range(limit):
            if c in neigh_colors[v]:
                continue
            colors[v] = c
            touched = []
            for u in adj[v]:
                if colors[u] < 0 and c not in neigh_colors[u]:
                    neigh_colors[u].add(c)
                    touched.append(u)
            branch(max(used, c + 1), remaining - 1)
            for u in touched:
                neigh_colors[u].remove(c)
            colors[v] = -1

    branch(lb, uncolored)
    k, witness = best
    assert all(witness[u] != witness[v] for u in range(n) for v in adj[u])
    return k, witness
