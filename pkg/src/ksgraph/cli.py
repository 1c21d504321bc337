"""Command-line front end.

Subcommands: ``invariants``, ``sic``, ``stab``, ``qstab``, ``verify``,
``measure`` and ``catalog``.  Option values resolve as CLI flag, then
``KSGRAPH_<NAME>`` environment variable, then built-in default; the effective
settings are echoed in every output so runs are reproducible.  Exact
rationals always print as ``p/q`` with a decimal approximation alongside.

Exit codes: ``sic`` exits 0 when the scenario is state-independent
contextual and 1 when it is not; ``verify`` exits 0 for a valid certificate
and 1 for an invalid one; ``stab``/``qstab`` exit 0 for membership and 1 for
non-membership.  Any error exits 2.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional

import numpy as np

from . import serialize
from .catalog import catalog_get, catalog_names, catalog_rays
from .coloring import DEFAULT_NODE_BUDGET, chromatic_number, clique_number
from .graphs import DEFAULT_ENUMERATION_CAP, Graph, parse_ograph
from .polytope import (fractional_chromatic_number, qstab_membership, sic_test,
                       stab_membership, tighten_fractional_coloring,
                       verify_decomposition)
from .quantum import (MeasureOptions, SearchOptions, contextuality_measure_fixed,
                      contextuality_measure_search, maximally_mixed,
                      projectors_from_rays, validate_realization)
from .serialize import frac_to_float_str, frac_to_str


class CliError(Exception):
    pass


_ENV_PREFIX = "KSGRAPH_"

_SETTING_DEFAULTS = {
    "enum_cap": DEFAULT_ENUMERATION_CAP,
    "node_budget": DEFAULT_NODE_BUDGET,
    "tol": 1e-9,
    "max_iters": 200_000,
    "seed": 0,
    "threads": 1,
    "restarts": 2,
    "steps": 30,
}

_SETTING_TYPES = {
    "enum_cap": int, "node_budget": int, "tol": float, "max_iters": int,
    "seed": int, "threads": int, "restarts": int, "steps": int,
}


def resolve_settings(args: argparse.Namespace) -> dict:
    """flag > KSGRAPH_* environment variable > default."""
    out = {}
    for name, default in _SETTING_DEFAULTS.items():
        flag = getattr(args, name, None)
        if flag is not None:
            out[name] = flag
            continue
        env = os.environ.get(_ENV_PREFIX + name.upper())
        if env is not None:
            try:
                out[name] = _SETTING_TYPES[name](env)
            except ValueError:
                raise CliError(f"environment variable {_ENV_PREFIX}{name.upper()}"
                               f" = {env!r} is not a valid {name}") from None
            continue
        out[name] = default
    return out


def settings_line(settings: dict) -> str:
    return "settings: " + " ".join(f"{k}={v}" for k, v in sorted(settings.items()))


def add_common_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--enum-cap", dest="enum_cap", type=int, default=None,
                   help="cap on enumerated sets (default 10^7)")
    p.add_argument("--node-budget", dest="node_budget", type=int, default=None,
                   help="branch-and-bound node budget (default 10^7)")
    p.add_argument("--threads", dest="threads", type=int, default=None,
                   help="worker threads for search restarts (default 1)")


def add_graph_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--catalog", metavar="NAME", help="built-in graph name")
    src.add_argument("--file", metavar="PATH", help="path to an .ograph file")


def load_graph(args: argparse.Namespace) -> tuple[Graph, str]:
    if args.catalog:
        entry = catalog_get(args.catalog)
        return entry.graph, entry.name
    with open(args.file, encoding="utf-8") as fh:
        return parse_ograph(fh.read()), os.path.basename(args.file)


def parse_point(n: int, point: Optional[str], uniform: Optional[str]) -> list[Fraction]:
    if (point is None) == (uniform is None):
        raise CliError("give exactly one of --point or --uniform")
    if uniform is not None:
        return [Fraction(uniform)] * n
    entries = [Fraction(tok.strip()) for tok in point.split(",")]
    if len(entries) != n:
        raise CliError(f"--point has {len(entries)} entries, graph has {n} vertices")
    return entries


def write_json(path: Optional[str], obj: dict) -> None:
    text = serialize.canonical_dumps(obj)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_invariants(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    g, name = load_graph(args)
    print(settings_line(settings))
    print(f"graph: {name}  n={g.n} m={g.num_edges}")

    t0 = time.perf_counter()
    omega = clique_number(g, budget=settings["node_budget"])
    t1 = time.perf_counter()
    chi, _ = chromatic_number(g, budget=settings["node_budget"])
    t2 = time.perf_counter()
    chi_f, _ = fractional_chromatic_number(g, cap=settings["enum_cap"])
    t3 = time.perf_counter()

    print(f"omega = {omega}  ({t1 - t0:.3f}s)")
    print(f"chi   = {chi}  ({t2 - t1:.3f}s)")
    print(f"chi_f = {frac_to_float_str(chi_f)}  ({t3 - t2:.3f}s)")
    return 0


def cmd_sic(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    g, name = load_graph(args)
    verdict = sic_test(g, args.dim, args.rank, cap=settings["enum_cap"])
    obj = serialize.sic_verdict_to_json(verdict, graph_name=name)
    obj["settings"] = {k: settings[k] for k in ("enum_cap",)}
    if args.cert:
        write_json(args.cert, obj)
    print(settings_line(settings))
    print(f"graph: {name}  n={g.n} m={g.num_edges}  dim={args.dim} rank={args.rank}")
    print(f"chi_f = {frac_to_float_str(verdict.chi_f)}  "
          f"threshold d/r = {frac_to_float_str(Fraction(args.dim, args.rank))}")
    if verdict.is_sic:
        print("verdict: state-independent contextual "
              f"(chi_f > d/r); coloring certificate with "
              f"{len(verdict.coloring.weighted_sets)} sets attached")
        return 0
    print("verdict: NOT state-independent contextual (chi_f <= d/r); "
          f"uniform point {frac_to_str(Fraction(args.rank, args.dim))} decomposes over "
          f"{len(verdict.decomposition.terms)} independent sets")
    return 1


def cmd_stab(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    g, name = load_graph(args)
    point = parse_point(g.n, args.point, args.uniform)
    member, cert = stab_membership(g, point, cap=settings["enum_cap"])
    print(settings_line(settings))
    if member:
        obj = serialize.decomposition_to_json(cert)
        print(f"{name}: point is IN the noncontextual polytope "
              f"({len(cert.terms)}-term decomposition)")
    else:
        obj = serialize.hyperplane_to_json(cert)
        print(f"{name}: point is OUTSIDE the noncontextual polytope "
              "(separating hyperplane attached)")
    if args.cert:
        write_json(args.cert, obj)
    return 0 if member else 1


def cmd_qstab(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    g, name = load_graph(args)
    point = parse_point(g.n, args.point, args.uniform)
    ok, clique = qstab_membership(g, point, cap=settings["enum_cap"])
    print(settings_line(settings))
    if ok:
        print(f"{name}: point satisfies every clique constraint")
        return 0
    total = sum(point[v] for v in clique)
    print(f"{name}: clique {[v + 1 for v in clique]} sums to "
          f"{frac_to_float_str(total)} > 1")
    return 1


def cmd_verify(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    with open(args.certificate, encoding="utf-8") as fh:
        obj = json.load(fh)
    g = None
    if args.catalog or args.file:
        g, _ = load_graph(args)
    print(settings_line(settings))

    kind = obj.get("type")
    if kind == "convex_decomposition":
        dec = serialize.decomposition_from_json(obj, graph=g)
        result = verify_decomposition(dec)
        if result.ok:
            print(f"certificate OK: {len(dec.terms)}-term convex decomposition")
            return 0
        print(f"certificate INVALID: {result.diagnostic}")
        return 1
    if kind == "fractional_coloring":
        fc = serialize.coloring_from_json(obj, graph=g)
        try:
            fc.validate()
        except Exception as exc:
            print(f"certificate INVALID: {exc}")
            return 1
        claimed = serialize.frac_from_str(obj["total_weight"])
        if claimed != fc.total_weight:
            print(f"certificate INVALID: total weight {fc.total_weight}, "
                  f"file claims {claimed}")
            return 1
        print(f"certificate OK: fractional coloring of weight {frac_to_str(fc.total_weight)}")
        return 0
    if kind == "sic_verdict":
        fc = serialize.coloring_from_json(obj["fractional_coloring"], graph=g)
        try:
            fc.validate()
        except Exception as exc:
            print(f"certificate INVALID: coloring: {exc}")
            return 1
        chi_f = serialize.frac_from_str(obj["chi_f"])
        if fc.total_weight != chi_f:
            print(f"certificate INVALID: coloring weight {fc.total_weight} != "
                  f"claimed chi_f {chi_f}")
            return 1
        threshold = Fraction(int(obj["dim"]), int(obj["rank"]))
        if bool(obj["is_sic"]) != (chi_f > threshold):
            print("certificate INVALID: is_sic flag contradicts chi_f vs d/r")
            return 1
        dec_obj = obj.get("uniform_point_decomposition")
        if not obj["is_sic"]:
            if dec_obj is None:
                print("certificate INVALID: non-S-IC verdict without a decomposition")
                return 1
            dec = serialize.decomposition_from_json(dec_obj, graph=g)
            result = verify_decomposition(dec)
            if not result.ok:
                print(f"certificate INVALID: decomposition: {result.diagnostic}")
                return 1
            if any(x != Fraction(int(obj["rank"]), int(obj["dim"])) for x in dec.target):
                print("certificate INVALID: decomposition target is not the "
                      "uniform rank/dim point")
                return 1
        print("certificate OK: sic_verdict internally consistent")
        return 0
    raise CliError(f"unknown certificate type {kind!r}")


def _load_state(args: argparse.Namespace, dim: int):
    if args.maximally_mixed:
        return maximally_mixed(dim)
    if not args.state:
        raise CliError("give --state FILE or --maximally-mixed")
    with open(args.state, encoding="utf-8") as fh:
        return serialize.density_matrix_from_json(json.load(fh))


def cmd_measure(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    g, name = load_graph(args)

    if args.builtin_rays:
        rays = catalog_rays(args.catalog) if args.catalog else None
        if rays is None:
            raise CliError("no built-in realization for this graph source")
        ps = projectors_from_rays(g, rays)
    elif args.projectors:
        with open(args.projectors, encoding="utf-8") as fh:
            ps = serialize.projector_set_from_json(json.load(fh), g)
    else:
        raise CliError("give --projectors FILE or --builtin-rays")

    report = validate_realization(ps)
    if not report.ok:
        print(report.summary(), file=sys.stderr)
        raise CliError("realization failed validation")

    rho = _load_state(args, ps.dim)
    mopts = MeasureOptions(tol=settings["tol"], max_iters=settings["max_iters"],
                           cap=settings["enum_cap"])
    if args.search:
        sopts = SearchOptions(restarts=settings["restarts"], steps=settings["steps"],
                              seed=settings["seed"], threads=settings["threads"],
                              measure=mopts)
        result, _ = contextuality_measure_search(g, rho, ps.dim, ps.rank,
                                                 seed_realization=ps, opts=sopts)
    else:
        result = contextuality_measure_fixed(ps, rho, mopts)

    obj = {
        "type": "measure_report",
        "schema_version": serialize.SCHEMA_VERSION,
        "graph": serialize.graph_to_json(g, name=name),
        "settings": {k: settings[k] for k in sorted(settings)},
        "value_nats": result.value,
        "value_bits": result.value_bits,
        "per_context_divergences_nats": result.per_context_divergences,
        "weights": [{"vertices": [v + 1 for v in s], "weight": w}
                    for s, w in result.weights],
        "iterations": result.iterations,
        "final_gap": result.final_gap,
        "converged": result.converged,
        "floor_hits": result.floor_hits,
        "seed": result.seed,
        "is_lower_bound": result.is_lower_bound,
    }
    write_json(args.out, obj)
    if args.out:
        print(settings_line(settings))
        print(f"value = {result.value:.9e} nats = {result.value_bits:.9e} bits"
              + (" (lower bound from search)" if result.is_lower_bound else ""))
    return 0


def cmd_catalog(args: argparse.Namespace) -> int:
    if args.action != "list":
        raise CliError(f"unknown catalog action {args.action!r}; try 'list'")
    for name in catalog_names():
        print(name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ksgraph",
        description="state-independent contextuality certificates and the "
                    "relative-entropy contextuality measure")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="n, m, omega, chi, chi_f of a graph")
    add_graph_source(p)
    add_common_options(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("sic", help="decide state-independent contextuality")
    add_graph_source(p)
    add_common_options(p)
    p.add_argument("--dim", type=int, required=True, help="Hilbert-space dimension")
    p.add_argument("--rank", type=int, default=1, help="projector rank (default 1)")
    p.add_argument("--cert", metavar="OUT.json", help="write the verdict certificate")
    p.set_defaults(func=cmd_sic)

    p = sub.add_parser("stab", help="noncontextual-polytope membership")
    add_graph_source(p)
    add_common_options(p)
    p.add_argument("--point", help="comma-separated rationals, one per vertex")
    p.add_argument("--uniform", help="single rational used on every vertex")
    p.add_argument("--cert", metavar="OUT.json", help="write the certificate")
    p.set_defaults(func=cmd_stab)

    p = sub.add_parser("qstab", help="clique-constraint membership")
    add_graph_source(p)
    add_common_options(p)
    p.add_argument("--point", help="comma-separated rationals, one per vertex")
    p.add_argument("--uniform", help="single rational used on every vertex")
    p.set_defaults(func=cmd_qstab)

    p = sub.add_parser("verify", help="re-check a certificate file")
    p.add_argument("certificate", help="certificate JSON path")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--catalog", metavar="NAME",
                     help="check against this catalog graph instead of the embedded one")
    src.add_argument("--file", metavar="PATH", help="check against this .ograph file")
    add_common_options(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("measure", help="contextuality measure of a state")
    add_graph_source(p)
    add_common_options(p)
    p.add_argument("--projectors", metavar="FILE", help="projector-set JSON")
    p.add_argument("--builtin-rays", action="store_true",
                   help="use the catalog realization of the chosen graph")
    p.add_argument("--state", metavar="FILE", help="density-matrix JSON")
    p.add_argument("--maximally-mixed", action="store_true",
                   help="use the maximally mixed state")
    p.add_argument("--search", action="store_true",
                   help="hill-climb over global unitaries (lower bound)")
    p.add_argument("--tol", type=float, default=None, help="duality-gap tolerance")
    p.add_argument("--max-iters", dest="max_iters", type=int, default=None)
    p.add_argument("--seed", type=int, default=None, help="search RNG seed")
    p.add_argument("--restarts", type=int, default=None, help="search restarts")
    p.add_argument("--steps", type=int, default=None, help="hill-climb steps per restart")
    p.add_argument("--out", metavar="OUT.json", help="write the report here "
                   "instead of stdout")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("catalog", help="catalog operations")
    p.add_argument("action", help="'list' prints the available names")
    p.set_defaults(func=cmd_catalog)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        raise
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
