"""Built-in orthogonality graphs with their known invariants and ray models.

Available names: ``C5`` (the KCBS pentagon), the complete family ``K<n>``,
the odd-cycle family ``odd_cycle_<n>``, ``G_YO`` (the 13-ray construction of
Yu and Oh, Phys. Rev. Lett. 108, 030402 (2012)) and ``J_GYO_GYO`` (the join
of two copies of ``G_YO``).

Metadata values carry a provenance tag: ``reported`` for numbers taken from
the literature, ``derived`` for numbers this package recomputes.  The test
suite enforces that every metadata value matches what the toolkit computes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .graphs import Graph, join


class UnknownGraphError(KeyError):
    """Requested catalog name does not exist; message lists what does."""


@dataclass
class CatalogEntry:
    name: str
    graph: Graph
    # invariant name -> {"value": ..., "provenance": "reported" | "derived"}
    metadata: dict = field(default_factory=dict)


# The 13 rays of the Yu-Oh construction, as exact integer vectors in C^3.
# Orthogonality of these rays defines the G_YO adjacency below; vertex order
# matches the 1-based labeling used by the bundled decomposition certificate
# (1..3 the basis rays, 4..9 the y rays, 10..13 the h rays).
YU_OH_RAYS: tuple[tuple[int, int, int], ...] = (
    (1, 0, 0),    # z1
    (0, 1, 0),    # z2
    (0, 0, 1),    # z3
    (0, 1, -1),   # y1-
    (1, 0, -1),   # y2-
    (1, -1, 0),   # y3-
    (0, 1, 1),    # y1+
    (1, 0, 1),    # y2+
    (1, 1, 0),    # y3+
    (-1, 1, 1),   # h1
    (1, -1, 1),   # h2
    (1, 1, -1),   # h3
    (1, 1, 1),    # h0
)

_YU_OH_LABELS = ("z1", "z2", "z3", "y1-", "y2-", "y3-",
                 "y1+", "y2+", "y3+", "h1", "h2", "h3", "h0")

# Frozen edge list generated from exact inner products of YU_OH_RAYS
# (regenerated and cross-checked by the test suite).
YU_OH_EDGES: tuple[tuple[int, int], ...] = (
    (0, 1), (0, 2), (0, 3), (0, 6),
    (1, 2), (1, 4), (1, 7),
    (2, 5), (2, 8),
    (3, 6), (3, 9), (3, 12),
    (4, 7), (4, 10), (4, 12),
    (5, 8), (5, 11), (5, 12),
    (6, 10), (6, 11),
    (7, 9), (7, 11),
    (8, 9), (8, 10),
)


def _reported(value):
    return {"value": value, "provenance": "reported"}


def _derived(value):
    return {"value": value, "provenance": "derived"}


def _cycle(n: int) -> Graph:
    edges = [(i, (i + 1) % n) for i in range(n)]
    return Graph(n, edges)


def _complete(n: int) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return Graph(n, edges)


def _gyo() -> Graph:
    return Graph(13, YU_OH_EDGES, labels=_YU_OH_LABELS)


def _entry_c5() -> CatalogEntry:
    return CatalogEntry("C5", _cycle(5), {
        "omega": _derived(2),
        "chi": _derived(3),
        "chi_f": _derived(Fraction(5, 2)),
        "xi": _reported(3),
    })


def _entry_kn(n: int) -> CatalogEntry:
    return CatalogEntry(f"K{n}", _complete(n), {
        "omega": _derived(n),
        "chi": _derived(n),
        "chi_f": _derived(Fraction(n)),
        "xi": _derived(n),
    })


def _entry_odd_cycle(n: int) -> CatalogEntry:
    if n < 5 or n % 2 == 0:
        raise UnknownGraphError(f"odd_cycle_{n}: need odd n >= 5")
    return CatalogEntry(f"odd_cycle_{n}", _cycle(n), {
        "omega": _derived(2),
        "chi": _derived(3),
        "chi_f": _derived(Fraction(2 * n, n - 1)),
        "xi": _reported(3),
    })


def _entry_gyo() -> CatalogEntry:
    return CatalogEntry("G_YO", _gyo(), {
        "omega": _derived(3),
        "chi": _reported(4),
        "chi_f": _reported(Fraction(35, 11)),
        "xi": _reported(3),
    })


def _entry_join_gyo() -> CatalogEntry:
    g = _gyo()
    return CatalogEntry("J_GYO_GYO", join(g, g), {
        "omega": _reported(6),
        "chi": _reported(8),
        "chi_f": _reported(Fraction(70, 11)),
        "xi": _reported(6),
    })


_FIXED = {
    "C5": _entry_c5,
    "G_YO": _entry_gyo,
    "J_GYO_GYO": _entry_join_gyo,
}

_KN_RE = re.compile(r"^K_?(\d+)$")
_ODD_RE = re.compile(r"^odd_cycle_(\d+)$")


def catalog_names() -> list[str]:
    """Concrete names plus the two parameterized family patterns."""
    return sorted(_FIXED) + ["K<n> (e.g. K3)", "odd_cycle_<n> (odd n >= 5)"]


def catalog_get(name: str) -> CatalogEntry:
    """Look up a catalog entry; unknown names raise with the available list."""
    if name in _FIXED:
        return _FIXED[name]()
    m = _KN_RE.match(name)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise UnknownGraphError(f"{name}: complete graph needs n >= 1")
        return _entry_kn(n)
    m = _ODD_RE.match(name)
    if m:
        return _entry_odd_cycle(int(m.group(1)))
    raise UnknownGraphError(
        f"unknown catalog graph {name!r}; available: {', '.join(catalog_names())}")


def catalog_rays(name: str) -> Optional[np.ndarray]:
    """Unit rays realizing the named graph with rank-1 projectors, or None.

    ``G_YO``: the 13 Yu-Oh rays in dimension 3.  ``C5`` / ``odd_cycle_n``:
    the circular realization in dimension 3 whose apex angle makes
    consecutive rays orthogonal.  ``K<n>``: the standard basis of C^n.
    ``J_GYO_GYO``: two Yu-Oh fans in orthogonal 3-dimensional blocks of C^6.
    """
    if name == "G_YO":
        rays = np.array(YU_OH_RAYS, dtype=float)
        return rays / np.linalg.norm(rays, axis=1, keepdims=True)
    if name == "J_GYO_GYO":
        gyo = catalog_rays("G_YO")
        rays = np.zeros((26, 6))
        rays[:13, :3] = gyo
        rays[13:, 3:] = gyo
        return rays
    m = _KN_RE.match(name)
    if m:
        return np.eye(int(m.group(1)))
    n = None
    if name == "C5":
        n = 5
    else:
        m = _ODD_RE.match(name)
        if m:
            n = int(m.group(1))
    if n is not None:
        # cos^2(theta) = cos(pi/n) / (1 + cos(pi/n)) makes neighbors orthogonal
        cos2 = np.cos(np.pi / n) / (1 + np.cos(np.pi / n))
        ct = np.sqrt(cos2)
        st = np.sqrt(1 - cos2)
        phi = np.pi * (n - 1) / n * np.arange(n)
        return np.stack([st * np.cos(phi), st * np.sin(phi), ct * np.ones(n)], axis=1)
    return None
