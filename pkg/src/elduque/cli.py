"""Command line front end.

Subcommands map one-to-one onto the library surface: list (registry),
build (superdimension and roots), invert (inverse Cartan matrix mod p),
render (Dynkin-style diagram), reflect (one odd reflection), orbit and
table (reflection closure), verify (relation residuals).

Exit codes: 0 success (all residuals zero for verify), 1 verify found a
nonzero residual, 2 usage or input error, 3 build or inversion failure,
4 reflection at a non-isotropic root.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import cartan
from .cartan import (
    CartanSpec,
    UnknownId,
    UnsupportedDiagonal,
    cartan_to_dict,
    equivalent,
    invert_mod_p,
    load_cartan_file,
    registry,
    registry_ids,
)
from .contragredient import (
    DEFAULT_MAX_HEIGHT,
    NonTerminated,
    NoUniqueMaximum,
    build,
)
from .expr import IndexOutOfRange, RelationSyntaxError
from .fp import SingularMatrix
from .reflections import (
    NotIsotropic,
    odd_reflect,
    orbit,
    reflection_table,
    registry_numbered_table,
    render_orbit_dot,
    render_table_text,
)
from .relations import relation_source, verify

__all__ = ["main"]


class SourceError(ValueError):
    """Missing or conflicting matrix source flags."""


def _fmt_vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _signed_matrix_lines(spec: CartanSpec) -> list[str]:
    rows = spec.matrix.signed_rows()
    width = max(len(str(x)) for row in rows for x in row)
    return ["  " + " ".join(f"{x:>{width}}" for x in row) for row in rows]


def _parity_line(spec: CartanSpec) -> str:
    names = ["odd" if q else "even" for q in spec.parity]
    return "  parity: " + " ".join(names)


def _add_source(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("-m", "--matrix-id", type=int, metavar="ID",
                     help="registry matrix id (1..7)")
    sub.add_argument("-f", "--file", metavar="PATH",
                     help="JSON Cartan matrix file")
    sub.add_argument("--p", type=int, metavar="PRIME",
                     help="prime override (file source only)")


def _add_format(sub: argparse.ArgumentParser, choices, default) -> None:
    sub.add_argument("--format", choices=choices, default=default)
    sub.add_argument("--json", action="store_true",
                     help="shorthand for --format json")


def _fmt(args) -> str:
    if getattr(args, "json", False):
        return "json"
    return args.format


def _resolve_source(args, required: bool = True) -> CartanSpec | None:
    has_m = args.matrix_id is not None
    has_f = args.file is not None
    if has_m and has_f:
        raise SourceError("give either -m or -f, not both")
    if args.p is not None and not has_f:
        raise SourceError("--p applies only to a file source")
    if has_m:
        return registry(args.matrix_id)
    if has_f:
        return load_cartan_file(args.file, p_override=args.p)
    if required:
        raise SourceError("need a matrix source: -m ID or -f PATH")
    return None


# -- subcommands -------------------------------------------------------------


def cmd_list(args) -> int:
    ids = registry_ids()
    if args.dump_registry or _fmt(args) == "json":
        _emit_json([
            {"id": k, **cartan_to_dict(registry(k))} for k in ids
        ])
        return 0
    for k in ids:
        spec = registry(k)
        iso = ",".join(str(i) for i in spec.isotropic_roots())
        print(f"{k}) over GF({spec.p}), isotropic roots {{{iso}}}")
        for line in _signed_matrix_lines(spec):
            print(line)
        print(_parity_line(spec))
    return 0


def cmd_build(args) -> int:
    spec = _resolve_source(args)
    model = build(spec, args.max_height)
    if _fmt(args) == "json":
        _emit_json(model.to_json_dict())
        return 0
    sdim = model.superdimension()
    roots = model.positive_roots()
    even = sum(1 for r in roots if r.parity == cartan.EVEN)
    odd = len(roots) - even
    print(f"superdimension {sdim}")
    print(f"positive roots {len(roots)} ({even} even, {odd} odd)")
    try:
        top = model.maximal_root()
        print(
            f"maximal root {_fmt_vec(top.coeffs)}"
            f"  height {top.height}"
            f"  weight {_fmt_vec(top.weight_mod_p)}"
        )
    except NoUniqueMaximum as exc:
        print(f"maximal root undefined: {exc}")
    return 0


def cmd_invert(args) -> int:
    spec = _resolve_source(args)
    inv = invert_mod_p(spec)
    if _fmt(args) == "json":
        _emit_json({"p": spec.p, "inverse": inv.tolist()})
        return 0
    for row in inv.tolist():
        print(" ".join(str(x) for x in row))
    return 0


def cmd_render(args) -> int:
    spec = _resolve_source(args)
    graph = cartan.to_dynkin(spec)
    if args.format == "dot":
        sys.stdout.write(cartan.render_dot(graph))
    else:
        sys.stdout.write(cartan.render_ascii(graph))
    return 0


def cmd_reflect(args) -> int:
    spec = _resolve_source(args)
    refl = odd_reflect(spec, args.index)
    match = None
    witness = None
    if refl.p == 5 and refl.n == 5:
        for k in registry_ids():
            w = equivalent(refl, registry(k))
            if w is not None:
                match, witness = k, w
                break
    if _fmt(args) == "json":
        out: dict = {"matrix": cartan_to_dict(refl), "equivalent_to": match}
        if witness is not None:
            out["witness"] = {
                "permutation": list(witness.permutation),
                "row_scalings": list(witness.row_scalings),
            }
        _emit_json(out)
        return 0
    print(f"reflection at root {args.index}:")
    for line in _signed_matrix_lines(refl):
        print(line)
    print(_parity_line(refl))
    if match is not None:
        print(f"equivalent to registry {match}")
        print(
            f"witness: permutation {_fmt_vec(witness.permutation)}"
            f" row scalings {_fmt_vec(witness.row_scalings)}"
        )
    return 0


def cmd_orbit(args) -> int:
    spec = _resolve_source(args)
    graph = orbit(spec)
    if _fmt(args) == "json":
        _emit_json({
            "classes": [cartan_to_dict(s) for s in graph.nodes],
            "edges": [
                {"from": frm + 1, "root": root, "to": to + 1}
                for frm, root, to in graph.edges
            ],
        })
        return 0
    sys.stdout.write(render_orbit_dot(graph))
    return 0


def cmd_table(args) -> int:
    spec = _resolve_source(args, required=False)
    if spec is None:
        graph = orbit(registry(1))
        table = registry_numbered_table(graph)
    else:
        graph = orbit(spec)
        table = reflection_table(graph)
    if _fmt(args) == "json":
        _emit_json({
            "classes": [cartan_to_dict(s) for s in table.representatives],
            "cells": [list(row) for row in table.cells],
        })
        return 0
    sys.stdout.write(render_table_text(table))
    return 0


def cmd_verify(args) -> int:
    spec = _resolve_source(args)
    relset = relation_source(args.relations, spec)
    report = verify(spec, relset, args.max_height)
    if _fmt(args) == "json":
        _emit_json({
            "provenance": report.provenance,
            "all_zero": report.all_zero,
            "relations": report.to_json_list(),
        })
        return 0 if report.all_zero else 1
    width = max((len(r.label) for r in report.records), default=1)
    for r in report.records:
        if r.error is not None:
            print(f"{r.label:<{width}}  error: {r.error}")
        elif r.zero:
            print(f"{r.label:<{width}}  w{_fmt_vec(r.weight)}  zero")
        else:
            print(
                f"{r.label:<{width}}  w{_fmt_vec(r.weight)}"
                f"  NONZERO residual {_fmt_vec(r.residual)}"
            )
    nonzero = sum(1 for r in report.records if not r.zero)
    if nonzero:
        print(f"{nonzero} of {len(report.records)} relations nonzero")
        return 1
    print(f"all {len(report.records)} relations zero")
    return 0


# -- parser ------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="el",
        description="Exact workbench for Cartan-matrix Lie superalgebras "
                    "over GF(p).",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("list", help="print the bundled matrix registry")
    _add_format(s, ("text", "json"), "text")
    s.add_argument("--dump-registry", action="store_true",
                   help="emit the full registry as JSON")
    s.set_defaults(func=cmd_list)

    s = subs.add_parser("build", help="build the algebra and report roots")
    _add_source(s)
    _add_format(s, ("text", "json"), "text")
    s.add_argument("--max-height", type=int, default=DEFAULT_MAX_HEIGHT)
    s.set_defaults(func=cmd_build)

    s = subs.add_parser("invert", help="inverse of the Cartan matrix mod p")
    _add_source(s)
    _add_format(s, ("text", "json"), "text")
    s.set_defaults(func=cmd_invert)

    s = subs.add_parser("render", help="Dynkin-style diagram")
    _add_source(s)
    s.add_argument("--format", choices=("dot", "ascii"), default="dot")
    s.set_defaults(func=cmd_render)

    s = subs.add_parser("reflect", help="odd reflection at one root")
    _add_source(s)
    s.add_argument("-i", "--index", type=int, required=True,
                   help="1-based root index")
    _add_format(s, ("text", "json"), "text")
    s.set_defaults(func=cmd_reflect)

    s = subs.add_parser("orbit", help="closure under odd reflections")
    _add_source(s)
    s.add_argument("--format", choices=("dot", "json"), default="dot")
    s.add_argument("--json", action="store_true",
                   help="shorthand for --format json")
    s.set_defaults(func=cmd_orbit)

    s = subs.add_parser("table", help="reflection table of the orbit")
    _add_source(s)
    _add_format(s, ("text", "json"), "text")
    s.set_defaults(func=cmd_table)

    s = subs.add_parser("verify", help="evaluate relations in the model")
    _add_source(s)
    s.add_argument("--relations", required=True, metavar="SRC",
                   help="paper:K, serre, or file:PATH")
    s.add_argument("--max-height", type=int, default=DEFAULT_MAX_HEIGHT)
    _add_format(s, ("text", "json"), "text")
    s.set_defaults(func=cmd_verify)

    return parser


def _message(exc: BaseException) -> str:
    # str(KeyError) wraps the message in repr quotes
    if isinstance(exc, KeyError) and exc.args:
        return str(exc.args[0])
    return str(exc)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotIsotropic as exc:
        print(f"el: {_message(exc)}", file=sys.stderr)
        return 4
    except (NonTerminated, SingularMatrix) as exc:
        print(f"el: {_message(exc)}", file=sys.stderr)
        return 3
    except (
        UnknownId,
        UnsupportedDiagonal,
        RelationSyntaxError,
        IndexOutOfRange,
        SourceError,
        OSError,
        ValueError,
        KeyError,
    ) as exc:
        print(f"el: {_message(exc)}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
