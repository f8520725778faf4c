"""Command-line interface: eval, suite, hochschild.

Exit codes: 0 success, 1 identity or associativity failure, 2 usage, parse
or validation errors.  All JSON output is emitted with sorted keys and
compact separators, so equal inputs and seeds produce byte-identical bytes.

Positions are 0-based (``o_0`` composes into the first input); note that a
sizeable part of the literature shifts composition indices by one.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys

from .endomodel import EndoContext, hom_from_json
from .errors import CompCalcError, FormatError
from .exprlang import EvalError, ParseError, Session, eval_expr, parse
from .freemodel import FreeContext
from .hochschild import hochschild_report, load_algebra
from .ring import ring_from_token
from .suite import (
    IDENTITY_IDS,
    all_passed,
    default_model_specs,
    parse_model_token,
    run_suite,
    summary_table,
)


def _json_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _bind_rng(seed: int, name: str) -> random.Random:
    digest = hashlib.sha256(f"{seed}|bind|{name}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _resolve_binding(ctx, name: str, spec: str, seed: int):
    spec = spec.strip()
    if spec.startswith("random:"):
        return ctx.random_element(int(spec[7:]), _bind_rng(seed, name))
    if spec.startswith("zero:"):
        return ctx.zero(int(spec[5:]))
    if spec.startswith("@"):
        path = spec[1:]
        if isinstance(ctx, EndoContext):
            with open(path, "r", encoding="utf-8") as fh:
                try:
                    obj = json.load(fh)
                except json.JSONDecodeError as exc:
                    raise FormatError(f"{path}: {exc}") from exc
            return hom_from_json(obj, ctx)
        with open(path, "r", encoding="utf-8") as fh:
            return ctx.from_text(fh.read().strip())
    if isinstance(ctx, FreeContext):
        return ctx.from_text(spec)
    if "@" in spec:
        value_text, _, deg_text = spec.rpartition("@")
        if ctx.d != 1:
            raise FormatError(
                f"scalar binding {spec!r} needs the rank-1 model; use @file.json for d={ctx.d}"
            )
        try:
            degree = int(deg_text)
        except ValueError as exc:
            raise FormatError(f"bad degree in binding {spec!r}") from exc
        return ctx.element(degree, [ctx.ring.parse(value_text)])
    raise FormatError(
        f"cannot interpret binding {spec!r}; use random:<deg>, zero:<deg>, "
        f"<scalar>@<deg> (endo d=1), @<file>, or a tree term (free model)"
    )


def _build_context(model_token: str, ring_token: str):
    ring = ring_from_token(ring_token)
    spec = parse_model_token(model_token)
    return spec.build(ring)


def _cmd_eval(args) -> int:
    ctx = _build_context(args.model, args.ring)
    bindings = {}
    for item in args.bind or []:
        if "=" not in item:
            raise FormatError(f"binding {item!r} must look like name=spec")
        name, spec = item.split("=", 1)
        name = name.strip()
        if not name.isidentifier() or name == "I":
            raise FormatError(f"bad variable name {name!r}")
        bindings[name] = _resolve_binding(ctx, name, spec, args.seed)
    mu = _resolve_binding(ctx, "mu", args.mu, args.seed) if args.mu else None
    if mu is not None and mu.degree != 2:
        raise FormatError(f"mu must have degree 2, got {mu.degree}")
    session = Session(ctx=ctx, bindings=bindings, mu=mu)

    ast = parse(args.expression)
    result = eval_expr(session, ast)
    if isinstance(ctx, EndoContext):
        payload = result.to_json_obj()
        rendered = _json_dumps(payload)
    else:
        payload = result.serialize()
        rendered = payload
    if args.json:
        print(_json_dumps({"degree": result.degree, "element": payload}))
    else:
        print(f"degree: {result.degree}")
        print(rendered)
    return 0


def _cmd_suite(args) -> int:
    models = [parse_model_token(tok) for tok in (args.model or [])] or default_model_specs()
    ring_tokens = args.ring or ["q", "zmod:2", "zmod:3"]
    rings = [ring_from_token(tok) for tok in ring_tokens]
    only = None
    if args.only:
        only = [item for group in args.only for item in group.split(",") if item]
    reports = run_suite(
        models,
        rings,
        seed=args.seed,
        trials=args.trials,
        max_degree=args.max_degree,
        only=only,
        per_cell=args.per_cell,
        sign_bug=args.inject_bug == "flip-endo-sign",
    )
    if args.json:
        for report in reports:
            print(report.to_json_line())
    else:
        print(summary_table(reports))
    return 0 if all_passed(reports) else 1


def _cmd_hochschild(args) -> int:
    spec = load_algebra(args.spec)
    report = hochschild_report(spec, args.n_max)
    if args.json:
        print(_json_dumps(report))
    else:
        print(f"algebra: dim {report['dim']} over {report['ring']}")
        if report["associative"]:
            print("associative: yes")
            dims = " ".join(str(v) for v in report["dims"])
            print(f"cohomology dims H^0..H^{args.n_max}: [{dims}]")
            print(f"oracle agreement: {'yes' if report['oracle_agree'] else 'NO'}")
        else:
            print("associative: NO")
            i, j, k = report["witness"]
            print(f"witness basis triple: (e{i} e{j}) e{k} != e{i} (e{j} e{k})")
    if not report["associative"] and args.require_assoc:
        return 1
    if report["associative"] and not report["oracle_agree"]:
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compcalc",
        description="Composition calculus for pre-operads: evaluate expressions, "
        "verify the identity suite, compute Hochschild cohomology.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate an expression in a model")
    p_eval.add_argument("expression", help="expression, e.g. '(h o_2 f) o_0 g'")
    p_eval.add_argument("--ring", default="q", help="q | z | zmod:<p> (default q)")
    p_eval.add_argument(
        "--model", default="endo:1", help="endo:<d> | free | free:<sigfile> (default endo:1)"
    )
    p_eval.add_argument("--seed", type=int, default=0, help="seed for random:<deg> bindings")
    p_eval.add_argument(
        "--bind",
        action="append",
        metavar="NAME=SPEC",
        help="bind a variable: random:<deg>, zero:<deg>, <scalar>@<deg> (endo d=1), "
        "@<file>, or a tree term such as 'm(_,_)' (free model); repeatable",
    )
    p_eval.add_argument("--mu", metavar="SPEC", help="bind mu (degree 2), same spec forms")
    p_eval.add_argument("--json", action="store_true", help="emit a single JSON object")
    p_eval.set_defaults(fn=_cmd_eval)

    p_suite = sub.add_parser("suite", help="run the randomized identity suite")
    p_suite.add_argument(
        "--ring", action="append", help="ring token; repeatable (default q, zmod:2, zmod:3)"
    )
    p_suite.add_argument(
        "--model", action="append", help="model token; repeatable (default endo:1, endo:2, free)"
    )
    p_suite.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p_suite.add_argument(
        "--trials", type=int, default=200, help="trials per identity (default 200)"
    )
    p_suite.add_argument(
        "--per-cell",
        action="store_true",
        help="run --trials in every (model, ring) cell instead of splitting them",
    )
    p_suite.add_argument("--max-degree", type=int, default=4, help="degree cap (default 4)")
    p_suite.add_argument(
        "--only",
        action="append",
        metavar="IDS",
        help=f"comma-separated identity filter; known ids: {', '.join(IDENTITY_IDS)}",
    )
    p_suite.add_argument("--json", action="store_true", help="emit JSON lines instead of a table")
    p_suite.add_argument(
        "--inject-bug",
        choices=["flip-endo-sign"],
        help="deliberately corrupt the endomorphism composition sign "
        "(self-test: the suite must fail)",
    )
    p_suite.set_defaults(fn=_cmd_suite)

    p_hoch = sub.add_parser("hochschild", help="analyze an algebra spec file")
    p_hoch.add_argument("spec", help="JSON file: {dim, ring, mu, labels?}")
    p_hoch.add_argument("--n-max", type=int, default=3, help="top cohomology degree (default 3)")
    p_hoch.add_argument(
        "--require-assoc", action="store_true", help="exit 1 when the algebra is not associative"
    )
    p_hoch.add_argument("--json", action="store_true", help="emit the report as JSON")
    p_hoch.set_defaults(fn=_cmd_hochschild)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return 2 if exc.code not in (0,) else 0
    try:
        return args.fn(args)
    except (ParseError, EvalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CompCalcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
