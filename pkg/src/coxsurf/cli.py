"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import List, Optional

from .catalog import (
    ENV_VAR,
    SURFACE_NAMES,
    CatalogError,
    UnknownSurfaceError,
    canonical_name,
    format_surface,
    load_surface,
    validate_surface,
)
from .groebner import DEFAULT_BUDGET

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _surface(name: str):
    try:
        return load_surface(canonical_name(name))
    except UnknownSurfaceError:
        raise UsageError(f"unknown surface {name!r}; choose from {', '.join(SURFACE_NAMES)}") from None


def _emit(obj, fmt: str, text: str):
    if fmt == "json":
        print(json.dumps(obj, indent=2, sort_keys=False))
    else:
        print(text)


def _presentation_json(surface, gset=None, matrix=None, relations=None, dimension=None,
                       certificate=None) -> dict:
    gens = []
    if gset is not None:
        gens = [{"label": g.label, "kind": g.kind, "degree": list(g.degree)} for g in gset]
    return {"surface": surface, "generators": gens, "matrix": matrix or [],
            "relations": relations or [], "dimension": dimension, "certificate": certificate}


# ---------------------------------------------------------------------------
# subcommands

def cmd_catalog(args) -> int:
    if not args.name:
        rows = []
        for n in SURFACE_NAMES:
            s = load_surface(n, validate=False)
            rows.append({"surface": n, "fibers": list(s.fiber_tags), "mw": list(s.mw),
                         "curves": len(s.curves)})
        text = "\n".join(f"{r['surface']:8} {' '.join(r['fibers']):20} MW {r['mw'][0]}x{r['mw'][1]}"
                         f"  {r['curves']} negative curves" for r in rows)
        _emit(rows, args.format, text)
        return EXIT_OK
    try:
        n = canonical_name(args.name)
    except UnknownSurfaceError:
        raise UsageError(f"unknown surface {args.name!r}; choose from {', '.join(SURFACE_NAMES)}") from None
    s = load_surface(n, validate=False)
    rep = validate_surface(s)
    if args.format == "json":
        _emit({"surface": n, "valid": rep.ok, "checks": rep.checks, "failures": rep.failures,
               "descriptor": format_surface(s)}, "json", "")
    else:
        print(format_surface(s), end="")
        print(f"# validation: {'ok' if rep.ok else 'FAILED'}")
        for f in rep.failures:
            print(f"#   {f}")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_curves(args) -> int:
    from .curves import curve_graph
    g = curve_graph(_surface(args.name))
    if args.format == "json":
        print(g.to_json())
    else:
        print(g.to_text())
    return EXIT_OK


def cmd_conics(args) -> int:
    from .curves import conic_bundles
    s = _surface(args.name)
    out = []
    for cb in conic_bundles(s):
        out.append({"class": list(cb.cls.coords), "unique_reducible_fiber": cb.unique_reducible_fiber,
                    "supports": [dict(sup) for sup in cb.supports]})
    lines = []
    for cb in conic_bundles(s):
        tag = "generator" if cb.unique_reducible_fiber else f"{len(cb.supports)} reducible fibers"
        lines.append(f"{list(cb.cls.coords)}  {cb}  [{tag}]")
    _emit(out, args.format, "\n".join(lines) if lines else "no conic bundles")
    return EXIT_OK


def cmd_generators(args) -> int:
    from .generators import degree_matrix, minimal_generators
    s = _surface(args.name)
    g = minimal_generators(s, convention=args.convention)
    m = degree_matrix(g, "e")
    if args.format == "json":
        _emit(_presentation_json(s.name, g, m.rows), "json", "")
        return EXIT_OK
    for e in g:
        var = f" {e.variable}" if e.variable else ""
        print(f"{e.label:10} {e.kind:26} {list(e.degree)}{var}")
    print()
    print(m.to_text())
    return EXIT_OK


def cmd_relations(args) -> int:
    from .generators import degree_matrix, minimal_generators
    from .multipoly import weighted_grevlex
    from .relations import compute_relations, grading_weights
    from .tables import load_reference
    s = _surface(args.name)
    ref = load_reference(s.name)
    if not ref.has_sections():
        print(f"{s.name}: no plane sections are available; the relation ideal is not computed",
              file=sys.stderr)
        return EXIT_FAIL
    r = compute_relations(s, budget=args.budget, ref=ref)
    gset = minimal_generators(s, ref)
    order = None
    if r.ideal is not None:
        degs = ref.columns()
        order = weighted_grevlex(grading_weights([degs[v] for v in r.ring.names]))
    rels = [p.to_str(order) if order else p.to_str() for p in r.sorted_generators()]
    if args.format == "json":
        _emit(_presentation_json(s.name, gset, degree_matrix(gset, "e").rows, rels,
                                 r.dimension, r.certificate), "json", "")
    else:
        for p in rels:
            print(p)
        print(f"# dimension {r.dimension}; {r.certificate}")
        for stage, err in r.errors.items():
            print(f"# {stage}: {err}")
    return EXIT_OK if r.ideal is not None else EXIT_FAIL


def cmd_contract(args) -> int:
    from .contract import ContractError, contract_cox, eliminate_linear
    from .tables import GradedPresentation, load_reference
    s = _surface(args.name)
    ref = load_reference(s.name)
    pres = GradedPresentation.from_reference(ref)
    labels = [x.strip() for x in args.set.split(",") if x.strip()]
    removed = []
    for lab in labels:
        if lab in pres.ring.index:
            removed.append(lab)
        else:
            try:
                removed.append(s.curve(lab).generator)
            except Exception:
                raise UsageError(f"{lab!r} is neither a variable nor a curve of {s.name}") from None
    try:
        cp = eliminate_linear(contract_cox(pres, removed))
    except ContractError as exc:
        raise UsageError(str(exc)) from None
    g = cp.grading()
    rels = [p.to_str() for p in cp.relations]
    if args.format == "json":
        _emit({"surface": s.name, "removed": removed, "variables": cp.variables,
               "grading": {"free_rank": g.free_rank, "torsion": g.torsion},
               "degrees": {v: list(cp.degree(v)) for v in cp.variables},
               "relations": rels}, "json", "")
    else:
        print(f"variables: {' '.join(cp.variables)}")
        print(f"grading: {g}")
        for p in rels:
            print(p)
    return EXIT_OK


def cmd_hj(args) -> int:
    from .complexone import POLE, hj_eval, hj_solve_unknown, parse_quotients
    try:
        q = parse_quotients(args.quotients)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if any(a is None for a in q):
        try:
            x = hj_solve_unknown(q, args.target)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if x is None:
            print("no solution")
            return EXIT_FAIL
        print(x)
        return EXIT_OK
    v = hj_eval(q)
    print("pole" if v is POLE else v)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .acceptance import run_suite
    only = [int(x) for x in args.only.split(",")] if args.only else None

    def progress(r):
        if args.format != "json":
            print(r.line(), flush=True)
            if args.verbose or not r.passed:
                for d in r.details:
                    print(f"    {d}")

    results = run_suite(args.suite, only, progress)
    ok = all(r.passed for r in results)
    if args.format == "json":
        print(json.dumps({"suite": args.suite, "passed": ok,
                          "criteria": [r.to_json() for r in results]}, indent=2))
    else:
        print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coxsurf", description="Cox rings of extremal rational elliptic surfaces.")
    p.add_argument("--data-dir", help=f"catalog directory (default: ${ENV_VAR}, then the bundled data)")
    p.add_argument("--log-level", default="WARNING")
    sub = p.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.set_defaults(func=fn)
        return sp

    sp = add("catalog", cmd_catalog, "list surfaces or show and validate one")
    sp.add_argument("name", nargs="?")
    add("curves", cmd_curves, "negative-curve graph").add_argument("name")
    add("conics", cmd_conics, "conic bundles").add_argument("name")
    sp = add("generators", cmd_generators, "minimal generators and degree matrix")
    sp.add_argument("name")
    sp.add_argument("--convention", choices=("oriented", "symmetric"), default="oriented")
    sp = add("relations", cmd_relations, "compute the ideal of relations")
    sp.add_argument("name")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp = add("contract", cmd_contract, "set generators to 1 and eliminate linear variables")
    sp.add_argument("name")
    sp.add_argument("--set", required=True, help="comma-separated variables or curve labels")
    sp = add("hj", cmd_hj, "evaluate a continued fraction; an x entry is solved for")
    sp.add_argument("quotients")
    sp.add_argument("--target", default="0")
    sp = add("verify", cmd_verify, "run the acceptance suite")
    sp.add_argument("--suite", choices=("fast", "full"), default="fast")
    sp.add_argument("--only", help="comma-separated criterion numbers")
    sp.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING))
    if args.data_dir and not os.path.isdir(args.data_dir):
        print(f"coxsurf: data directory {args.data_dir} does not exist", file=sys.stderr)
        return EXIT_USAGE
    saved = os.environ.get(ENV_VAR)
    if args.data_dir:
        os.environ[ENV_VAR] = args.data_dir  # the flag outranks the environment
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"coxsurf: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CatalogError as exc:
        print(f"coxsurf: {exc}", file=sys.stderr)
        return EXIT_FAIL
    finally:
        if saved is None:
            os.environ.pop(ENV_VAR, None)
        else:
            os.environ[ENV_VAR] = saved


if __name__ == "__main__":
    sys.exit(main())
