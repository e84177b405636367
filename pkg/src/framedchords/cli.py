"""Command-line surface: enumerate, dims, check, render.

Reports are deterministic JSON on stdout (sorted keys, fixed layout), so
repeated runs and different --jobs settings produce identical bytes.  The
optional run manifest (command, parameters, fingerprints, timing, result
digests) goes to a separate file and is the only place timing appears.

Exit codes: 0 verdict as expected, 1 verdict violated, 2 usage or input
error, 3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .algebra import (
    commutator_check,
    intertwine_report,
    schema_search,
    well_defined_check,
)
from .diagrams import (
    CapacityError,
    enumerate_chord_diagrams,
    enumerate_framed_diagrams,
    parse_arc,
    parse_chord,
)
from .linalg import normalize_field, quotient_basis
from .realisability import RealisabilityModel, restricted_quotient
from .relations import (
    SignSchema,
    assemble_relations,
    family_fingerprint,
    relations_to_text,
)
from .render import render

_DOUBLE_FACTORIALS = {0: 1}


def _double_factorial(k: int) -> int:
    if k <= 0:
        return 1
    if k not in _DOUBLE_FACTORIALS:
        _DOUBLE_FACTORIALS[k] = k * _double_factorial(k - 2)
    return _DOUBLE_FACTORIALS[k]


def _capacity_guard(order: int, framed: bool, capacity: int) -> None:
    cost = _double_factorial(2 * order - 1) * (2 ** order if framed else 1)
    if cost > capacity:
        raise CapacityError(
            f"order {order} ({'framed' if framed else 'unframed'}) needs "
            f"{cost} raw objects, above the capacity limit {capacity}; "
            "raise --capacity to override")


def _load_schema(text: str) -> SignSchema:
    if text == "uniform":
        return SignSchema.uniform()
    if text == "starred":
        return SignSchema.starred()
    if text.endswith(".json") or os.path.sep in text:
        data = json.loads(Path(text).read_text())
        return SignSchema.from_json_dict(data)
    if "/" in text:  # sector pattern like "+-+-/+-+-/-+-+"
        sectors = text.split("/")
        if len(sectors) != 3 or any(len(s) != 4 for s in sectors):
            raise ValueError(f"bad schema pattern {text!r}")
        as_signs = [tuple(1 if ch == "+" else -1 for ch in s) for s in sectors]
        return SignSchema.from_sectors(*as_signs)
    raise ValueError(f"unknown schema {text!r}")


def _parse_kinds(text: str) -> list[str]:
    if text.strip().lower() in ("", "none"):
        return []
    return [k.strip().lower() for k in text.split(",")]


def _json_out(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _metadata() -> dict:
    return {
        "tool": "framedchords",
        "version": __version__,
        "framings_fixed_across_terms": True,
    }


# ---------------------------------------------------------------------------
# subcommands


def _cmd_enumerate(args) -> tuple[str, dict]:
    _capacity_guard(args.order, args.framed, args.capacity)
    diagrams = enumerate_framed_diagrams(args.order) if args.framed \
        else enumerate_chord_diagrams(args.order)
    encodings = [d.encoding() for d in diagrams]
    if args.format == "json":
        return _json_out(encodings if not args.count else
                         {"count": len(encodings), "diagrams": encodings}), {}
    return "\n".join(encodings) + "\n", {}


def _cmd_dims(args) -> tuple[str, dict]:
    field = normalize_field(args.field)
    framed = args.framed or args.schema is not None or args.model is not None
    _capacity_guard(args.order, framed, args.capacity)
    kinds = _parse_kinds(args.relations)
    schema = None
    if framed:
        schema = _load_schema(args.schema or "uniform")

    extra: dict = {}
    if args.model is not None:
        model = RealisabilityModel(args.model)
        include_1t = "1t" in kinds
        qb, lemma, restricted = restricted_quotient(
            args.order, schema, model, field, include_1t)
        extra = {
            "model": model.to_json_dict(),
            "lemma_violations": lemma.violation_count,
        }
        row = {
            "n": args.order,
            "diagrams": len(qb.columns),
            "relations": len(restricted),
            "rank": qb.rank,
            "dim": qb.dimension,
        }
    else:
        relations = assemble_relations(args.order, kinds, schema, framed=framed)
        if args.dump_relations:
            Path(args.dump_relations).write_text(relations_to_text(relations) + "\n")
        qb = quotient_basis(
            args.order, relations, field, framed=framed,
            fingerprint=family_fingerprint(relations),
            cache_dir=args.cache_dir,
        )
        row = {
            "n": args.order,
            "diagrams": len(qb.columns),
            "relations": len(relations),
            "rank": qb.rank,
            "dim": qb.dimension,
        }
        extra = {"fingerprint": qb.fingerprint}

    fingerprints = {"relations": extra.get("fingerprint", "")}
    if args.format == "json":
        payload = dict(row)
        payload.update({
            "field": field,
            "framed": framed,
            "relation_kinds": sorted(kinds),
            "schema": schema.name if schema else None,
            **extra,
            "metadata": _metadata(),
        })
        return _json_out(payload), fingerprints
    header = "n,diagrams,relations,rank,dim"
    line = ",".join(str(row[k]) for k in ("n", "diagrams", "relations", "rank", "dim"))
    return f"{header}\n{line}\n", fingerprints


_EXPECTS = ("pass", "fail", "any")


def _verdict_exit(verdict: bool, expect: str) -> int:
    if expect == "any":
        return 0
    return 0 if verdict == (expect == "pass") else 1


def _cmd_check(args) -> tuple[str, dict, int]:
    field = normalize_field(args.field)
    fingerprints: dict = {}

    if args.name == "phi-iso":
        schema_a = _load_schema(args.schema_a)
        schema_b = _load_schema(args.schema_b)
        _capacity_guard(args.order, True, args.capacity)
        report = intertwine_report(schema_a, schema_b, args.order, field)
        verdict = report.intertwined
        payload = report.to_json_dict()

    elif args.name == "well-defined":
        order_a, order_b = args.order_pair
        framed = args.framed or args.schema is not None
        _capacity_guard(order_a + order_b, framed, args.capacity)
        kinds = _parse_kinds(args.relations)
        schema = _load_schema(args.schema or "uniform") if framed else None
        relations = assemble_relations(order_a + order_b, kinds, schema, framed=framed)
        fingerprints["relations"] = family_fingerprint(relations)
        report = well_defined_check(order_a, order_b, relations, field,
                                    framed=framed, jobs=args.jobs)
        verdict = report.failure_count == 0
        payload = report.to_json_dict()
        payload["relation_kinds"] = sorted(kinds)
        payload["schema"] = schema.name if schema else None
        if args.expect is None:
            args.expect = "pass" if (not framed and "4t" in kinds) else "any"

    elif args.name == "commutativity":
        order_a, order_b = args.order_pair
        framed = args.framed or args.schema is not None
        _capacity_guard(order_a + order_b, framed, args.capacity)
        kinds = _parse_kinds(args.relations)
        schema = _load_schema(args.schema or "uniform") if framed else None
        relations = assemble_relations(order_a + order_b, kinds, schema,
                                       space=args.space, framed=framed)
        fingerprints["relations"] = family_fingerprint(relations)
        report = commutator_check(order_a, order_b, relations, field,
                                  space=args.space, framed=framed, jobs=args.jobs)
        verdict = report.non_commuting == 0 and not report.convention_dependent
        payload = report.to_json_dict()
        payload["relation_kinds"] = sorted(kinds)
        payload["schema"] = schema.name if schema else None
        if args.expect is None:
            args.expect = "pass" if (args.space == "circle" and not framed
                                     and "4t" in kinds) else "any"

    elif args.name == "lemma-4t":
        from .realisability import lemma_4t_closure_check

        schema = _load_schema(args.schema or "uniform")
        model = RealisabilityModel(args.model or "single-class")
        _capacity_guard(args.order, True, args.capacity)
        report = lemma_4t_closure_check(args.order, schema, model)
        verdict = report.violation_count == 0
        payload = report.to_json_dict()

    elif args.name == "schema-search":
        _capacity_guard(args.order, True, args.capacity)
        base = _load_schema(args.base_schema)
        result = schema_search(args.order, args.retest_order, base,
                               field=field, jobs=args.jobs)
        verdict = result["stable"]
        payload = {"check": "schema-search", **result}

    else:
        raise ValueError(f"unknown check {args.name!r}")

    expect = args.expect or "pass"
    payload["verdict"] = "pass" if verdict else "fail"
    payload["expected"] = expect
    payload["metadata"] = _metadata()
    return _json_out(payload), fingerprints, _verdict_exit(verdict, expect)


def _cmd_render(args) -> tuple[str, dict]:
    parse = parse_arc if args.space == "arc" else parse_chord
    d = parse(args.diagram)
    return render(d, args.format) + "\n", {}


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="framedchords",
        description="Exact computations on framed chord diagrams.",
    )
    parser.add_argument("--version", action="version", version=__version__)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=1,
                        help="worker processes; output is independent of this")
    common.add_argument("--cache-dir", default=os.environ.get("FRAMEDCHORDS_CACHE_DIR"),
                        help="directory for quotient basis caches")
    common.add_argument("--manifest", help="write a run manifest JSON to this path")
    common.add_argument("--capacity", type=int, default=4_000_000,
                        help="raw enumeration size limit before a capacity error")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common],
                       help="list canonical diagrams of one order")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--framed", action="store_true")
    p.add_argument("--count", action="store_true", help="include the count (json)")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("dims", parents=[common],
                       help="quotient dimension table row")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--relations", default="4t", help="comma set from {4t,1t}, or none")
    p.add_argument("--framed", action="store_true")
    p.add_argument("--schema", help="uniform | starred | pattern | file.json")
    p.add_argument("--field", default="q")
    p.add_argument("--model", choices=("trivial", "single-class"),
                   help="restrict to realisable diagrams under this model")
    p.add_argument("--dump-relations", help="write the relation file here")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("check", parents=[common], help="run a structural check")
    p.add_argument("name", choices=("phi-iso", "well-defined", "commutativity",
                                    "lemma-4t", "schema-search"))
    p.add_argument("--order", type=int, help="diagram order (single-order checks)")
    p.add_argument("--orders", help="pair like 2,2 (product checks)")
    p.add_argument("--relations", default="4t", help="comma set from {4t,1t}, or none")
    p.add_argument("--framed", action="store_true")
    p.add_argument("--schema", help="schema for framed relation families")
    p.add_argument("--schema-a", default="uniform")
    p.add_argument("--schema-b", default="uniform")
    p.add_argument("--base-schema", default="uniform",
                   help="schema-search: intertwine partner")
    p.add_argument("--retest-order", type=int,
                   help="schema-search: re-test survivors at this order")
    p.add_argument("--space", choices=("arc", "circle"), default="arc",
                   help="commutativity: which product to test")
    p.add_argument("--model", choices=("trivial", "single-class"))
    p.add_argument("--field", default="q")
    p.add_argument("--expect", choices=_EXPECTS, default=None,
                   help="expected verdict; default depends on the check")

    p = sub.add_parser("render", parents=[common], help="draw one diagram")
    p.add_argument("diagram", help="encoding like AA|1 or ABAB")
    p.add_argument("--space", choices=("circle", "arc"), default="circle")
    p.add_argument("--format", choices=("dot", "tikz", "svg-via-dot"), default="dot")

    return parser


def _write_manifest(args, argv: list[str], output: str, fingerprints: dict,
                    elapsed: float) -> None:
    if not getattr(args, "manifest", None):
        return
    params = {k: v for k, v in vars(args).items()
              if k not in ("manifest",) and not callable(v)}
    manifest = {
        "command": args.command,
        "argv": argv,
        "parameters": {k: params[k] for k in sorted(params)},
        "fingerprints": {k: fingerprints[k] for k in sorted(fingerprints)},
        "version": __version__,
        "timing_seconds": round(elapsed, 6),
        "digests": {"stdout_sha256": hashlib.sha256(output.encode()).hexdigest()},
    }
    Path(args.manifest).write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)

    started = time.perf_counter()
    code = 0
    try:
        if args.command == "check":
            if args.name in ("well-defined", "commutativity"):
                if not args.orders:
                    parser.error(f"check {args.name} needs --orders A,B")
                args.order_pair = tuple(int(x) for x in args.orders.split(","))
                if len(args.order_pair) != 2:
                    parser.error("--orders wants exactly two orders")
            elif args.order is None:
                parser.error(f"check {args.name} needs --order")
            output, fingerprints, code = _cmd_check(args)
        elif args.command == "enumerate":
            output, fingerprints = _cmd_enumerate(args)
        elif args.command == "dims":
            output, fingerprints = _cmd_dims(args)
        elif args.command == "render":
            output, fingerprints = _cmd_render(args)
        else:  # pragma: no cover - argparse enforces choices
            parser.error(f"unknown command {args.command!r}")
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    sys.stdout.write(output)
    _write_manifest(args, argv, output, fingerprints, time.perf_counter() - started)
    return code


if __name__ == "__main__":
    sys.exit(main())
