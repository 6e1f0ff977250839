"""Command-line interface.

Subcommands:

  wone eval TERM             evaluate a term to its W1 morphism
  wone equal T1 T2           decide equality of denotations
  cdc check FILE...          CD.1-CD.7 on maps from spec files (+ --random N)
  tangent check -n N         tangent axioms at the object Q^N
  algebroid check FILE       structure equations + involution axioms
  algebroid bracket FILE X Y σ-based section bracket (X, Y section files)
  nerve object FILE -V ALG   describe the prolongation A.V
  nerve functoriality FILE   seeded equal-denotation pairs get equal images
  lie-tangent FILE           derive L'(A) and check it
  selftest                   the full acceptance suite (seeded, deterministic)

Exit codes: 0 all checks passed, 1 some check failed, 2 input error.
JSON output (--json) is deterministic for a fixed seed.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import algebroid as AL
from . import nerve as NV
from . import specfiles
from . import tangent as TG
from . import weil, wterm
from .poly import PolyError, check_cdc_axioms, random_map
from .report import CheckReport
from .selftest import DEFAULT_SEED, run_selftest


class InputError(Exception):
    pass


def _emit(report: CheckReport, as_json: bool) -> int:
    print(report.to_json() if as_json else report.render())
    return 0 if report.passed else 1


def _parse_term(text: str) -> wterm.WTerm:
    try:
        return wterm.parse_term(text)
    except wterm.WTermError as exc:
        raise InputError(f"bad term {text!r}: {exc}")


def cmd_wone(args) -> int:
    if args.action == "eval":
        term = _parse_term(args.term)
        morphism = wterm.eval_weil(term)
        if args.json:
            print(json.dumps({
                "term": wterm.print_term(term),
                "source": str(term.source), "target": str(term.target),
                "morphism": str(morphism),
            }, sort_keys=True, indent=2))
        else:
            print(f"{wterm.print_term(term)} : {term.source} -> {term.target}")
            print(f"  {morphism}")
        return 0
    t1 = _parse_term(args.term)
    t2 = _parse_term(args.term2)
    try:
        equal = wterm.terms_equal(t1, t2)
    except wterm.WTermError as exc:
        raise InputError(str(exc))
    report = CheckReport("wone equal")
    report.add(f"{args.term} = {args.term2}", equal,
               f"{wterm.eval_weil(t1)} vs {wterm.eval_weil(t2)}")
    return _emit(report, args.json)


def cmd_cdc(args) -> int:
    sample = [specfiles.load(path, expect_kind="map") for path in args.files]
    if args.random:
        rng = random.Random(args.seed)
        sample += [random_map(rng, rng.randint(1, 3), rng.randint(1, 3), 3)
                   for _ in range(args.random)]
    if not sample:
        raise InputError("cdc check needs at least one map file or --random N")
    return _emit(check_cdc_axioms(sample, seed=args.seed).sort(), args.json)


def cmd_tangent(args) -> int:
    return _emit(TG.check_tangent_axioms(args.n).sort(), args.json)


def cmd_algebroid(args) -> int:
    A = specfiles.load(args.file, expect_kind="algebroid")
    if args.action == "check":
        report = CheckReport(f"algebroid checks for {args.file}")
        report.merge(AL.check_structure_equations(A))
        sigma = AL.involution_from_bracket(A)
        report.merge(AL.check_involution_axioms(A, sigma))
        report.merge(AL.check_lambda_hat_coassociativity(A))
        return _emit(report.sort(), args.json)
    x_doc = specfiles.load_document(args.x)
    y_doc = specfiles.load_document(args.y)
    X = specfiles.load_section(x_doc, A.base_dim)
    Y = specfiles.load_section(y_doc, A.base_dim)
    if X.tgt_dim != A.rank or Y.tgt_dim != A.rank:
        raise InputError(f"sections must have {A.rank} components")
    bracket = AL.section_bracket(A, X, Y)
    if args.json:
        print(json.dumps({"bracket": [str(c) for c in bracket.components]},
                         sort_keys=True, indent=2))
    else:
        print(f"[X, Y] = {bracket}")
    return 0


def cmd_nerve(args) -> int:
    A = specfiles.load(args.file, expect_kind="algebroid")
    if args.action == "object":
        try:
            V = weil.parse_algebra(args.algebra)
        except weil.WeilError as exc:
            raise InputError(str(exc))
        space = NV.nerve_object(A, V)
        blocks = [{"label": V.monomial_str(b.label), "size": b.size,
                   "offset": b.offset} for b in space.blocks]
        if args.json:
            print(json.dumps({"algebra": str(V), "dimension": space.dim,
                              "blocks": blocks,
                              "embedding": str(space.embedding)},
                             sort_keys=True, indent=2))
        else:
            print(f"A.{V}: dimension {space.dim}")
            for b in blocks:
                print(f"  block {b['label']:>8}  size {b['size']}  offset {b['offset']}")
            print(f"  embedding: {space.embedding}")
        return 0
    rng = random.Random(args.seed)
    pairs = []
    while len(pairs) < args.pairs:
        t1, t2 = wterm.random_equal_pair(rng, depth=2, rewrites=2)
        if wterm.print_term(t1) != wterm.print_term(t2):
            pairs.append((t1, t2))
    report = NV.check_functoriality(A, pairs)
    report.merge(NV.check_compose_functoriality(A, rng, cases=5))
    report.merge(NV.check_cartesian_p(A))
    return _emit(report.sort(), args.json)


def cmd_lie_tangent(args) -> int:
    A = specfiles.load(args.file, expect_kind="algebroid")
    try:
        prime = NV.lie_tangent(A)
    except ValueError as exc:
        raise InputError(str(exc))
    report = CheckReport(f"L' of {args.file}")
    report.merge(NV.check_lie_table(A))
    report.merge(AL.check_structure_equations(prime), prefix="L'(A) ")
    payload = {
        "base_dim": prime.base_dim,
        "rank": prime.rank,
        "anchor": [[str(e) for e in row] for row in prime.rho],
        "bracket": [[[str(e) for e in cell] for cell in row] for row in prime.bracket],
    }
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"kind": "algebroid", **payload}, fh, sort_keys=True, indent=2)
    if args.json:
        print(json.dumps({"derived": payload, "report": report.sort().as_dict()},
                         sort_keys=True, indent=2))
        return 0 if report.passed else 1
    print(f"L'(A): base_dim {prime.base_dim}, rank {prime.rank}")
    return _emit(report.sort(), False)


def cmd_selftest(args) -> int:
    report = run_selftest(seed=args.seed, cases=args.cases, mutate=args.mutate)
    return _emit(report, args.json)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tancat",
        description="exact checkers for tangent-categorical structures")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable deterministic output")
    sub = parser.add_subparsers(dest="command", required=True)

    env_seed = int(os.environ.get("TANCAT_SEED", DEFAULT_SEED))

    wone = sub.add_parser("wone", help="the free tangent category")
    wone_sub = wone.add_subparsers(dest="action", required=True)
    w_eval = wone_sub.add_parser("eval")
    w_eval.add_argument("term")
    w_eq = wone_sub.add_parser("equal")
    w_eq.add_argument("term")
    w_eq.add_argument("term2")
    wone.set_defaults(func=cmd_wone)

    cdc = sub.add_parser("cdc", help="cartesian differential axioms")
    cdc_sub = cdc.add_subparsers(dest="action", required=True)
    c_check = cdc_sub.add_parser("check")
    c_check.add_argument("files", nargs="*")
    c_check.add_argument("--random", type=int, default=0, metavar="N")
    c_check.add_argument("--seed", type=int, default=env_seed)
    cdc.set_defaults(func=cmd_cdc)

    tangent = sub.add_parser("tangent", help="tangent structure on the polynomial model")
    tangent_sub = tangent.add_subparsers(dest="action", required=True)
    t_check = tangent_sub.add_parser("check")
    t_check.add_argument("-n", type=int, default=1)
    tangent.set_defaults(func=cmd_tangent)

    alg = sub.add_parser("algebroid", help="involution algebroid checks")
    alg_sub = alg.add_subparsers(dest="action", required=True)
    a_check = alg_sub.add_parser("check")
    a_check.add_argument("file")
    a_br = alg_sub.add_parser("bracket")
    a_br.add_argument("file")
    a_br.add_argument("x")
    a_br.add_argument("y")
    alg.set_defaults(func=cmd_algebroid)

    nerve = sub.add_parser("nerve", help="the Weil nerve")
    nerve_sub = nerve.add_subparsers(dest="action", required=True)
    n_obj = nerve_sub.add_parser("object")
    n_obj.add_argument("file")
    n_obj.add_argument("-V", dest="algebra", required=True)
    n_fun = nerve_sub.add_parser("functoriality")
    n_fun.add_argument("file")
    n_fun.add_argument("--pairs", type=int, default=25)
    n_fun.add_argument("--seed", type=int, default=env_seed)
    nerve.set_defaults(func=cmd_nerve)

    lie = sub.add_parser("lie-tangent", help="the prolongation tangent structure")
    lie.add_argument("file")
    lie.add_argument("--out", help="write the derived algebroid as JSON")
    lie.set_defaults(func=cmd_lie_tangent)

    selftest = sub.add_parser("selftest", help="run the acceptance suite")
    selftest.add_argument("--seed", type=int, default=env_seed)
    selftest.add_argument("--cases", type=int, default=200)
    selftest.add_argument("--mutate", choices=["bianchi", "alternating", "leibniz"])
    selftest.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (specfiles.SpecFileError, PolyError, weil.WeilError,
            wterm.WTermError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
