"""ksgraph: exact certificates for state-independent contextuality of
orthogonality graphs, and a relative-entropy measure of contextuality.

The library side is organized by subject:

* :mod:`ksgraph.graphs`    graphs, cliques, independent sets, file format
* :mod:`ksgraph.catalog`   built-in graphs (C5, K<n>, odd cycles, G_YO, ...)
* :mod:`ksgraph.exactlp`   exact rational simplex
* :mod:`ksgraph.coloring`  exact clique and chromatic numbers
* :mod:`ksgraph.polytope`  stable-set polytope, fractional colorings, the
  state-independence decision with certificates
* :mod:`ksgraph.quantum`   projector realizations and the contextuality
  measure of quantum states
* :mod:`ksgraph.serialize` JSON forms of all artifacts

The ``ksgraph`` command line exposes the same functionality for batch use.
"""

from .catalog import CatalogEntry, UnknownGraphError, catalog_get, catalog_names, catalog_rays
from .coloring import chromatic_number, clique_number, max_clique
from .exactlp import (EQ, GE, LE, LinearProgram, LpShapeError, LpSolution,
                      check_feasible, solve_lp)
from .graphs import (DEFAULT_ENUMERATION_CAP, Graph, GraphFormatError,
                     InvalidVertexError, ResourceLimitError, complement,
                     enumerate_independent_sets, enumerate_maximal_cliques,
                     format_ograph, incidence_vector, is_clique, is_independent,
                     join, parse_ograph)
from .polytope import (ColoringValidationError, ConvexDecomposition,
                       FractionalColoring, PointDomainError, SeparatingHyperplane,
                       SicVerdict, VerificationResult, fractional_chromatic_number,
                       qstab_membership, sic_test, stab_membership,
                       tighten_fractional_coloring, verify_decomposition)
from .quantum import (ConvergenceError, DensityMatrix, MeasureOptions,
                      MeasureResult, ProjectorSet, RealizationError,
                      SearchOptions, ValidationReport, conjugate_realization,
                      conjugate_state, contextuality_measure_fixed,
                      contextuality_measure_search, expectation_vector,
                      haar_random_unitary, majorizes, maximally_mixed,
                      projectors_from_rays, pure_state, spectrum,
                      two_level_rotation, validate_realization)

__version__ = "0.1.0"
