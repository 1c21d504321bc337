"""JSON serialization of certificates, matrices and reports.

Conventions, fixed across the package (schema_version 1):

* rationals are strings ``"p/q"``, always carrying the denominator;
* vertex numbers in files are 1-based (internal arrays are 0-based);
* complex matrices are nested lists of ``[re, im]`` pairs;
* dumps are canonical: sorted keys, two-space indent, trailing newline, so
  identical inputs produce byte-identical artifacts.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np

from .graphs import Graph
from .polytope import (ConvexDecomposition, FractionalColoring,
                       SeparatingHyperplane, SicVerdict)

SCHEMA_VERSION = 1


def frac_to_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def frac_from_str(s: str) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"expected rational string 'p/q', got {s!r}")
    return Fraction(s.strip())


def frac_to_float_str(x: Fraction) -> str:
    """Human-facing rendering: exact fraction plus decimal approximation."""
    return f"{frac_to_str(x)} (~{float(x):.6f})"


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _verts_out(members: Sequence[int]) -> list[int]:
    return [v + 1 for v in members]


def _verts_in(members: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(int(v) - 1 for v in members))


def graph_to_json(g: Graph, name: Optional[str] = None) -> dict:
    out: dict[str, Any] = {
        "n": g.n,
        "edges": [[u + 1, v + 1] for u, v in g.edges()],
    }
    if name:
        out["name"] = name
    if g.labels is not None:
        out["labels"] = list(g.labels)
    return out


def graph_from_json(obj: dict) -> Graph:
    edges = [(u - 1, v - 1) for u, v in obj["edges"]]
    return Graph(int(obj["n"]), edges, labels=obj.get("labels"))


def coloring_to_json(fc: FractionalColoring) -> dict:
    return {
        "type": "fractional_coloring",
        "schema_version": SCHEMA_VERSION,
        "graph": graph_to_json(fc.graph),
        "sets": [{"vertices": _verts_out(s), "weight": frac_to_str(w)}
                 for s, w in fc.weighted_sets],
        "total_weight": frac_to_str(fc.total_weight),
    }


def coloring_from_json(obj: dict, graph: Optional[Graph] = None) -> FractionalColoring:
    g = graph if graph is not None else graph_from_json(obj["graph"])
    sets = [(_verts_in(t["vertices"]), frac_from_str(t["weight"]))
            for t in obj["sets"]]
    return FractionalColoring(g, sets)


def decomposition_to_json(dec: ConvexDecomposition) -> dict:
    return {
        "type": "convex_decomposition",
        "schema_version": SCHEMA_VERSION,
        "graph": graph_to_json(dec.graph),
        "target": [frac_to_str(x) for x in dec.target],
        "terms": [{"vertices": _verts_out(s), "weight": frac_to_str(w)}
                  for s, w in dec.terms],
    }


def decomposition_from_json(obj: dict, graph: Optional[Graph] = None) -> ConvexDecomposition:
    g = graph if graph is not None else graph_from_json(obj["graph"])
    terms = [(_verts_in(t["vertices"]), frac_from_str(t["weight"]))
             for t in obj["terms"]]
    target = [frac_from_str(x) for x in obj["target"]]
    return ConvexDecomposition(g, terms, target)


def hyperplane_to_json(h: SeparatingHyperplane) -> dict:
    return {
        "type": "separating_hyperplane",
        "schema_version": SCHEMA_VERSION,
        "graph": graph_to_json(h.graph),
        "normal": [frac_to_str(a) for a in h.normal],
        "offset": frac_to_str(h.offset),
    }


def sic_verdict_to_json(v: SicVerdict, graph_name: Optional[str] = None) -> dict:
    out = {
        "type": "sic_verdict",
        "schema_version": SCHEMA_VERSION,
        "graph": graph_to_json(v.graph, name=graph_name),
        "dim": v.dim,
        "rank": v.rank,
        "chi_f": frac_to_str(v.chi_f),
        "threshold": frac_to_str(Fraction(v.dim, v.rank)),
        "is_sic": v.is_sic,
        "fractional_coloring": coloring_to_json(v.coloring),
        "uniform_point_decomposition": (
            decomposition_to_json(v.decomposition) if v.decomposition else None),
    }
    return out


def matrix_to_json(mat: np.ndarray) -> list:
    m = np.asarray(mat, dtype=complex)
    return [[[float(c.real), float(c.imag)] for c in row] for row in m]


def matrix_from_json(obj: Sequence) -> np.ndarray:
    return np.array([[complex(c[0], c[1]) for c in row] for row in obj])


def projector_set_to_json(ps) -> dict:
    return {
        "type": "projector_set",
        "schema_version": SCHEMA_VERSION,
        "dim": ps.dim,
        "rank": ps.rank,
        "projectors": [matrix_to_json(p) for p in ps.projectors],
    }


def projector_set_from_json(obj: dict, graph: Graph):
    from .quantum import ProjectorSet

    projectors = [matrix_from_json(p) for p in obj["projectors"]]
    return ProjectorSet(graph, int(obj["dim"]), int(obj["rank"]), projectors)


def density_matrix_to_json(rho) -> dict:
    return {
        "type": "density_matrix",
        "schema_version": SCHEMA_VERSION,
        "dim": rho.dim,
        "matrix": matrix_to_json(rho.matrix),
    }


def density_matrix_from_json(obj: dict):
    from .quantum import DensityMatrix

    return DensityMatrix(int(obj["dim"]), matrix_from_json(obj["matrix"]))


# jsonschema documents for the emitted artifacts (validated in the tests)
_RATIONAL = {"type": "string", "pattern": r"^-?\d+/\d+$"}
_VERTEX_LIST = {"type": "array", "items": {"type": "integer", "minimum": 1}}
_WEIGHTED_SET = {
    "type": "object",
    "required": ["vertices", "weight"],
    "properties": {"vertices": _VERTEX_LIST, "weight": _RATIONAL},
}
_GRAPH = {
    "type": "object",
    "required": ["n", "edges"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "edges": {"type": "array",
                  "items": {"type": "array", "items": {"type": "integer", "minimum": 1},
                            "minItems": 2, "maxItems": 2}},
        "labels": {"type": "array", "items": {"type": "string"}},
        "name": {"type": "string"},
    },
}

SCHEMAS = {
    "fractional_coloring": {
        "type": "object",
        "required": ["type", "schema_version", "graph", "sets", "total_weight"],
        "properties": {
            "type": {"const": "fractional_coloring"},
            "schema_version": {"const": SCHEMA_VERSION},
            "graph": _GRAPH,
            "sets": {"type": "array", "items": _WEIGHTED_SET},
            "total_weight": _RATIONAL,
        },
    },
    "convex_decomposition": {
        "type": "object",
        "required": ["type", "schema_version", "graph", "target", "terms"],
        "properties": {
            "type": {"const": "convex_decomposition"},
            "schema_version": {"const": SCHEMA_VERSION},
            "graph": _GRAPH,
            "target": {"type": "array", "items": _RATIONAL},
            "terms": {"type": "array", "items": _WEIGHTED_SET},
        },
    },
    "sic_verdict": {
        "type": "object",
        "required": ["type", "schema_version", "graph", "dim", "rank",
                     "chi_f", "threshold", "is_sic", "fractional_coloring",
                     "uniform_point_decomposition"],
        "properties": {
            "type": {"const": "sic_verdict"},
            "schema_version": {"const": SCHEMA_VERSION},
            "graph": _GRAPH,
            "dim": {"type": "integer", "minimum": 1},
            "rank": {"type": "integer", "minimum": 1},
            "chi_f": _RATIONAL,
            "threshold": _RATIONAL,
            "is_sic": {"type": "boolean"},
        },
    },
}
