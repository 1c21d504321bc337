"""Projector realizations, quantum expectation vectors and the
relative-entropy measure of contextuality for a fixed realization.

The measure of a state against a fixed projector realization is the minimum,
over mixtures of deterministic noncontextual assignments (independent sets),
of the context-averaged relative entropy between the quantum outcome
distributions and the mixture's marginals.  Contexts are the maximal cliques;
each context gets one residual outcome so its distribution is complete.  The
minimization is a convex program over the independent-set simplex, solved by
Frank-Wolfe with away steps: the linear subproblem is a scan of the
enumerated independent sets against the current gradient, and the run stops
once the Frank-Wolfe duality gap certifies optimality to within ``tol``.

The maximization over all realizations of a graph is NOT computed exactly
anywhere in this module: ``contextuality_measure_search`` only hill-climbs
over global unitary rotations of a seed realization and reports a lower
bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .graphs import (DEFAULT_ENUMERATION_CAP, Graph, enumerate_independent_sets,
                     enumerate_maximal_cliques)

TAU_PROJ = 1e-9    # hermiticity / idempotence / trace residual bound
TAU_ORTH = 1e-8    # edge products must stay below, non-edge products above
TAU_PSD = 1e-9     # worst admissible negative eigenvalue of a state

LN2 = math.log(2.0)


class RealizationError(ValueError):
    """A projector set fails validation against its graph."""


class ConvergenceError(RuntimeError):
    """Frank-Wolfe ran out of iterations; carries the best value and gap."""

    def __init__(self, message: str, value: float, gap: float):
        super().__init__(message)
        self.value = value
        self.gap = gap


@dataclass
class ProjectorSet:
    """One projector per vertex of ``graph``, all of dimension ``dim`` and
    common rank ``rank``."""

    graph: Graph
    dim: int
    rank: int
    projectors: list[np.ndarray]


@dataclass
class DensityMatrix:
    dim: int
    matrix: np.ndarray


@dataclass
class ValidationReport:
    ok: bool
    checks: dict[str, dict] = field(default_factory=dict)

    def summary(self) -> str:
        lines = []
        for name, c in self.checks.items():
            status = "pass" if c["ok"] else "FAIL"
            lines.append(f"{name}: {status} (worst residual {c['worst']:.3e})")
        return "\n".join(lines)


def maximally_mixed(dim: int) -> DensityMatrix:
    return DensityMatrix(dim, np.eye(dim) / dim)


def pure_state(vec: Sequence[complex]) -> DensityMatrix:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityMatrix(len(v), np.outer(v, v.conj()))


def projectors_from_rays(graph: Graph, rays: np.ndarray) -> ProjectorSet:
    """Rank-1 realization |v><v| from one ray per vertex (rows of ``rays``)."""
    rays = np.asarray(rays, dtype=complex)
    if rays.shape[0] != graph.n:
        raise RealizationError(f"{rays.shape[0]} rays for a {graph.n}-vertex graph")
    projectors = []
    for row in rays:
        v = row / np.linalg.norm(row)
        projectors.append(np.outer(v, v.conj()))
    return ProjectorSet(graph, rays.shape[1], 1, projectors)


def conjugate_realization(ps: ProjectorSet, unitary: np.ndarray) -> ProjectorSet:
    """Apply a global unitary: projector P becomes U P U^dag."""
    u = np.asarray(unitary, dtype=complex)
    return ProjectorSet(ps.graph, ps.dim, ps.rank,
                        [u @ p @ u.conj().T for p in ps.projectors])


def conjugate_state(rho: DensityMatrix, unitary: np.ndarray) -> DensityMatrix:
    u = np.asarray(unitary, dtype=complex)
    return DensityMatrix(rho.dim, u @ rho.matrix @ u.conj().T)


def haar_random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    q, r = np.linalg.qr(z / np.sqrt(2))
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases.conj()


def two_level_rotation(dim: int, i: int, j: int, theta: float, phi: float) -> np.ndarray:
    """Unitary acting on the (i, j) plane only; products of these span U(d)."""
    u = np.eye(dim, dtype=complex)
    c, s = math.cos(theta), math.sin(theta)
    u[i, i] = c
    u[j, j] = c
    u[i, j] = -s * np.exp(1j * phi)
    u[j, i] = s * np.exp(-1j * phi)
    return u


def validate_realization(ps: ProjectorSet, tau_proj: float = TAU_PROJ,
                         tau_orth: float = TAU_ORTH) -> ValidationReport:
    """Check that the projectors strictly realize the graph.

    Per projector: hermitian, idempotent and of trace ``rank`` within
    ``tau_proj``.  Per edge the product norm must not exceed ``tau_orth``;
    per non-edge it must, so two vertices can never share a projector.
    Frobenius norms throughout.
    """
    g = ps.graph
    checks: dict[str, dict] = {}

    def record(name, worst, ok, **extra):
        checks[name] = {"ok": bool(ok), "worst": float(worst), **extra}

    if len(ps.projectors) != g.n:
        record("shape", float("inf"), False,
               detail=f"{len(ps.projectors)} projectors for {g.n} vertices")
        return ValidationReport(False, checks)
    bad_shape = [k for k, p in enumerate(ps.projectors) if p.shape != (ps.dim, ps.dim)]
    if bad_shape:
        record("shape", float("inf"), False, detail=f"wrong shape at vertices {bad_shape}")
        return ValidationReport(False, checks)
    record("shape", 0.0, True)

    herm = max(np.linalg.norm(p - p.conj().T) for p in ps.projectors)
    record("hermitian", herm, herm <= tau_proj)
    idem = max(np.linalg.norm(p @ p - p) for p in ps.projectors)
    record("idempotent", idem, idem <= tau_proj)
    tr = max(abs(np.trace(p).real - ps.rank) + abs(np.trace(p).imag)
             for p in ps.projectors)
    record("trace_rank", tr, tr <= tau_proj)

    bad_edges = []
    worst_edge = 0.0
    for u, v in g.edges():
        r = np.linalg.norm(ps.projectors[u] @ ps.projectors[v])
        worst_edge = max(worst_edge, r)
        if r > tau_orth:
            bad_edges.append((u, v))
    record("edges_orthogonal", worst_edge, not bad_edges, violations=bad_edges)

    bad_nonedges = []
    worst_nonedge = float("inf")
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if g.adjacent(u, v):
                continue
            r = np.linalg.norm(ps.projectors[u] @ ps.projectors[v])
            worst_nonedge = min(worst_nonedge, r)
            if r <= tau_orth:
                bad_nonedges.append((u, v))
    if worst_nonedge == float("inf"):
        worst_nonedge = 0.0
    record("nonedges_nonorthogonal", worst_nonedge, not bad_nonedges,
           violations=bad_nonedges)

    return ValidationReport(all(c["ok"] for c in checks.values()), checks)


def validate_state(rho: DensityMatrix, tau: float = TAU_PROJ) -> None:
    m = rho.matrix
    if m.shape != (rho.dim, rho.dim):
        raise ValueError(f"state matrix shape {m.shape}, expected ({rho.dim}, {rho.dim})")
    if np.linalg.norm(m - m.conj().T) > tau:
        raise ValueError("state is not hermitian within tolerance")
    if abs(np.trace(m).real - 1) > 1e-9:
        raise ValueError(f"state trace {np.trace(m).real}, expected 1")
    if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < -TAU_PSD:
        raise ValueError("state has a negative eigenvalue beyond tolerance")


def expectation_vector(ps: ProjectorSet, rho: DensityMatrix) -> np.ndarray:
    """tr(P_k rho) per vertex, clamped into [0, 1]."""
    if rho.dim != ps.dim:
        raise ValueError(f"state dimension {rho.dim} != realization dimension {ps.dim}")
    report = validate_realization(ps)
    if not report.ok:
        raise RealizationError("realization failed validation:\n" + report.summary())
    validate_state(rho)
    x = np.array([np.trace(p @ rho.matrix).real for p in ps.projectors])
    return np.clip(x, 0.0, 1.0)


def spectrum(rho: DensityMatrix) -> np.ndarray:
    """Eigenvalues of a state, sorted in descending order."""
    validate_state(rho)
    eig = np.linalg.eigvalsh((rho.matrix + rho.matrix.conj().T) / 2)
    return np.clip(eig[::-1], 0.0, None)


def majorizes(s1: Sequence[float], s2: Sequence[float], tol: float = 1e-9) -> bool:
    """True iff s1 is majorized by s2 (every descending prefix sum of s2
    dominates the corresponding prefix sum of s1, totals equal)."""
    a = np.sort(np.asarray(s1, dtype=float))[::-1]
    b = np.sort(np.asarray(s2, dtype=float))[::-1]
    if a.shape != b.shape:
        raise ValueError(f"spectra have lengths {len(a)} and {len(b)}")
    if abs(a.sum() - b.sum()) > tol:
        return False
    return bool(np.all(np.cumsum(b) >= np.cumsum(a) - tol))


@dataclass
class MeasureOptions:
    tol: float = 1e-9
    max_iters: int = 200_000
    p_floor: float = 1e-300
    track_gap_history: bool = False
    weight_report_threshold: float = 1e-10
    cap: int = DEFAULT_ENUMERATION_CAP


@dataclass
class MeasureResult:
    """Outcome of the noncontextual-mixture minimization.

    ``value`` is in nats (``value_bits`` the base-2 rendering) and equals the
    mean of ``per_context_divergences``.  ``weights`` is the sparse simplex
    point over independent sets that attains it.  ``is_lower_bound`` marks
    values produced by the realization search, which never certifies a
    global maximum.
    """

    value: float
    value_bits: float
    weights: list[tuple[tuple[int, ...], float]]
    per_context_divergences: list[float]
    iterations: int
    final_gap: float
    converged: bool
    floor_hits: int
    seed: Optional[int] = None
    is_lower_bound: bool = False
    gap_history: Optional[list[float]] = None


class _Scenario:
    """Precomputed combinatorial data of one measurement scenario."""

    def __init__(self, graph: Graph, cap: int = DEFAULT_ENUMERATION_CAP):
        self.graph = graph
        self.contexts = enumerate_maximal_cliques(graph, cap=cap)
        self.atoms = enumerate_independent_sets(graph, maximal_only=False, cap=cap)
        self.n_ctx = len(self.contexts)
        n_atoms = len(self.atoms)

        offsets = []
        off = 0
        for c in self.contexts:
            offsets.append(off)
            off += len(c) + 1
        self.n_slots = off
        self.offsets = offsets

        idx = np.empty((self.n_ctx, n_atoms), dtype=np.int64)
        for ci, clique in enumerate(self.contexts):
            pos = {v: k for k, v in enumerate(clique)}
            residual = offsets[ci] + len(clique)
            for ai, atom in enumerate(self.atoms):
                hit = [pos[v] for v in atom if v in pos]
                # an independent set meets a clique in at most one vertex
                idx[ci, ai] = offsets[ci] + hit[0] if hit else residual
        self.idx = idx
        self.flat_idx = idx.ravel()

    def quantum_slots(self, ps: ProjectorSet, rho: DensityMatrix) -> np.ndarray:
        """Concatenated per-context outcome distributions of (ps, rho)."""
        q = np.zeros(self.n_slots)
        probs = np.array([np.trace(p @ rho.matrix).real for p in ps.projectors])
        probs = np.clip(probs, 0.0, 1.0)
        for ci, clique in enumerate(self.contexts):
            off = self.offsets[ci]
            s = 0.0
            for k, v in enumerate(clique):
                q[off + k] = probs[v]
                s += probs[v]
            q[off + len(clique)] = max(0.0, 1.0 - s)
        return q

    def marginals(self, weights: np.ndarray) -> np.ndarray:
        return np.bincount(self.flat_idx, weights=np.tile(weights, self.n_ctx),
                           minlength=self.n_slots)

    def divergences(self, q: np.ndarray, slots: np.ndarray) -> list[float]:
        """Per-context relative entropies D(q_c || p_c) in nats."""
        out = []
        for ci, clique in enumerate(self.contexts):
            lo = self.offsets[ci]
            hi = lo + len(clique) + 1
            d = 0.0
            for s in range(lo, hi):
                if q[s] > 0.0:
                    d += q[s] * math.log(q[s] / max(slots[s], 1e-300))
            out.append(d)
        return out


def _frank_wolfe(scenario: _Scenario, q: np.ndarray, opts: MeasureOptions
                 ) -> tuple[np.ndarray, int, float, bool, int, list[float]]:
    """Away-step Frank-Wolfe over the atom simplex; returns the final point,
    iteration count, certified gap, convergence flag, floor-hit count and the
    (monotone, best-so-far) gap trace."""
    idx = scenario.idx
    n_ctx = scenario.n_ctx
    n_atoms = idx.shape[1]
    p = np.full(n_atoms, 1.0 / n_atoms)
    floor_hits = 0
    gap_trace: list[float] = []
    best_gap = math.inf
    iteration = 0

    def gradient(point: np.ndarray) -> np.ndarray:
        nonlocal floor_hits
        slots = scenario.marginals(point)
        tiny = slots < opts.p_floor
        if np.any(tiny & (q > 0.0)):
            floor_hits += 1
        ratio = q / np.maximum(slots, opts.p_floor)
        return -ratio[idx].sum(axis=0) / n_ctx

    def dir_derivative(pm: np.ndarray, dm: np.ndarray, gamma: float) -> float:
        denom = np.maximum(pm + gamma * dm, 1e-300)
        return float(-(q * dm / denom).sum() / n_ctx)

    while iteration < opts.max_iters:
        iteration += 1
        grad = gradient(p)
        inner = float(grad @ p)
        s_idx = int(np.argmin(grad))
        fw_gap = inner - float(grad[s_idx])
        best_gap = min(best_gap, fw_gap)
        if opts.track_gap_history:
            gap_trace.append(best_gap)
        if fw_gap <= opts.tol:
            return p, iteration, fw_gap, True, floor_hits, gap_trace

        active = p > 0.0
        away_candidates = np.where(active, grad, -math.inf)
        a_idx = int(np.argmax(away_candidates))
        away_gap = float(grad[a_idx]) - inner

        if fw_gap >= away_gap:
            direction = -p.copy()
            direction[s_idx] += 1.0
            gamma_max = 1.0
        else:
            direction = p.copy()
            direction[a_idx] -= 1.0
            pa = p[a_idx]
            gamma_max = pa / (1.0 - pa) if pa < 1.0 else 1.0

        pm = scenario.marginals(p)
        dm = scenario.marginals(direction)
        # derivative is increasing in gamma (convexity); bisect its root
        if dir_derivative(pm, dm, gamma_max) <= 0.0:
            gamma = gamma_max
        else:
            lo, hi = 0.0, gamma_max
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if dir_derivative(pm, dm, mid) <= 0.0:
                    lo = mid
                else:
                    hi = mid
            gamma = lo
        if gamma <= 0.0:
            # away direction with no room; fall back to a pure FW step
            direction = -p.copy()
            direction[s_idx] += 1.0
            dm = scenario.marginals(direction)
            lo, hi = 0.0, 1.0
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if dir_derivative(pm, dm, mid) <= 0.0:
                    lo = mid
                else:
                    hi = mid
            gamma = lo
        p = np.maximum(p + gamma * direction, 0.0)
        p /= p.sum()

    return p, iteration, best_gap, False, floor_hits, gap_trace


def contextuality_measure_fixed(ps: ProjectorSet, rho: DensityMatrix,
                                opts: Optional[MeasureOptions] = None) -> MeasureResult:
    """Context-averaged relative entropy from the quantum outcome statistics
    of (ps, rho) to the nearest mixture of noncontextual assignments.

    Raises ConvergenceError (carrying the best value and gap) if the duality
    gap fails to reach ``opts.tol`` within ``opts.max_iters`` iterations.
    """
    opts = opts or MeasureOptions()
    if rho.dim != ps.dim:
        raise ValueError(f"state dimension {rho.dim} != realization dimension {ps.dim}")
    report = validate_realization(ps)
    if not report.ok:
        raise RealizationError("realization failed validation:\n" + report.summary())
    validate_state(rho)
    scenario = _Scenario(ps.graph, cap=opts.cap)
    return _measure_on_scenario(scenario, ps, rho, opts)


def _measure_on_scenario(scenario: _Scenario, ps: ProjectorSet, rho: DensityMatrix,
                         opts: MeasureOptions) -> MeasureResult:
    q = scenario.quantum_slots(ps, rho)
    p, iters, gap, converged, floor_hits, trace = _frank_wolfe(scenario, q, opts)
    slots = scenario.marginals(p)
    divergences = scenario.divergences(q, slots)
    value = sum(divergences) / scenario.n_ctx
    if not converged:
        raise ConvergenceError(
            f"Frank-Wolfe gap {gap:.3e} > tol {opts.tol:.3e} "
            f"after {iters} iterations (best value {value:.6e})",
            value=value, gap=gap)
    weights = [(scenario.atoms[i], float(p[i]))
               for i in np.nonzero(p > opts.weight_report_threshold)[0]]
    return MeasureResult(
        value=value,
        value_bits=value / LN2,
        weights=weights,
        per_context_divergences=divergences,
        iterations=iters,
        final_gap=gap,
        converged=converged,
        floor_hits=floor_hits,
        gap_history=trace if opts.track_gap_history else None,
    )


@dataclass
class SearchOptions:
    restarts: int = 2
    steps: int = 30
    seed: int = 0
    step_scale: float = 0.4
    threads: int = 1
    measure: MeasureOptions = field(default_factory=MeasureOptions)


def contextuality_measure_search(g: Graph, rho: DensityMatrix, dim: int, rank: int,
                                 seed_realization: Optional[ProjectorSet] = None,
                                 opts: Optional[SearchOptions] = None
                                 ) -> tuple[MeasureResult, ProjectorSet]:
    """Best-effort lower bound on the realization-maximized measure.

    Hill-climbs over global unitaries (random two-level rotations) applied to
    the seed realization, with restarts from Haar-random unitaries.  Restart
    0 starts at the seed itself, so the reported value never falls below the
    seed's fixed-projector value.  Restart batches may run on threads; the
    merge is deterministic either way: best value wins, ties go to the
    lowest restart index.
    """
    opts = opts or SearchOptions()
    if seed_realization is None:
        raise RealizationError("realization search needs a seed realization")
    if seed_realization.dim != dim or seed_realization.rank != rank:
        raise ValueError(
            f"seed realization is ({seed_realization.dim}, {seed_realization.rank}), "
            f"requested ({dim}, {rank})")
    report = validate_realization(seed_realization)
    if not report.ok:
        raise RealizationError("seed realization failed validation:\n" + report.summary())
    validate_state(rho)

    scenario = _Scenario(g, cap=opts.measure.cap)

    def run_restart(restart: int) -> tuple[float, int, np.ndarray]:
        rng = np.random.default_rng(np.random.SeedSequence(opts.seed, spawn_key=(restart,)))
        u = np.eye(dim, dtype=complex) if restart == 0 else haar_random_unitary(dim, rng)
        current = _measure_on_scenario(
            scenario, conjugate_realization(seed_realization, u), rho, opts.measure)
        cur_val = current.value
        sigma = opts.step_scale
        for _ in range(opts.steps):
            i, j = rng.choice(dim, size=2, replace=False)
            theta = sigma * rng.standard_normal()
            phi = rng.uniform(0.0, 2.0 * math.pi)
            candidate_u = two_level_rotation(dim, int(i), int(j), theta, phi) @ u
            result = _measure_on_scenario(
                scenario, conjugate_realization(seed_realization, candidate_u),
                rho, opts.measure)
            if result.value > cur_val:
                u, cur_val = candidate_u, result.value
            else:
                sigma *= 0.8
        return cur_val, restart, u

    indices = list(range(max(1, opts.restarts)))
    if opts.threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=opts.threads) as pool:
            outcomes = list(pool.map(run_restart, indices))
    else:
        outcomes = [run_restart(r) for r in indices]

    best = max(outcomes, key=lambda t: (t[0], -t[1]))
    best_ps = conjugate_realization(seed_realization, best[2])
    final = _measure_on_scenario(scenario, best_ps, rho, opts.measure)
    final.seed = opts.seed
    final.is_lower_bound = True
    return final, best_ps
