"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 on unreadable or inconsistent input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import __version__
from ._expr import ParseError
from .bvgen import (
    basis_multivectors,
    check_generates,
    connection_from_generator,
    flatness_check,
    generator_from_connection,
    right_action,
    square_zero_on_basis,
)
from .document import InputError, Problem, load_document, parse_document
from .exterior import Multivector, basis_index_sets, format_multivector, gbracket, parse_multivector
from .homology import GradingError, NonFlatError, cohomology_dims, duality_check, homology_dims, boundary_equality
from .lralg import check_axioms
from .poisson import PoissonError, canonical_right_connection, jacobi_check, poisson_bracket, truncation_is_poisson_stable
from .presets import get_preset, list_presets
from .ring import monomials_up_to
from .topconn import right_from_top, top_flatness_check, top_from_right

COMMANDS = ("check", "bracket", "generator", "flatness", "homology", "cohomology", "duality", "poisson", "roundtrip")

SQUARE_CUTOFF = 4
SAMPLE_PAIRS = 200


class Failure(Exception):
    """A mathematical precondition failed; maps to exit code 1."""


def _idx(I) -> list[int]:
    return [i + 1 for i in I]


def _basis_label(I) -> str:
    return "e[" + ",".join(str(i) for i in _idx(I)) + "]" if I else "1"


def _cmd_check(pb: Problem, args) -> tuple[dict, bool]:
    out = {}
    ok = True
    if pb.poisson is not None:
        witness = jacobi_check(pb.poisson)
        stable = truncation_is_poisson_stable(pb.poisson)
        out["poisson_jacobi"] = {"passed": witness is None, "witness": list(witness) if witness else None}
        out["poisson_truncation_stable"] = stable
        ok = witness is None and stable
    axioms = check_axioms(pb.P)
    out["axioms"] = axioms.to_dict()
    return out, ok and axioms.passed


def _cmd_bracket(pb: Problem, args) -> tuple[dict, bool]:
    if args.u is None or args.v is None:
        raise InputError("bracket needs --u EXPR and --v EXPR")
    u, v = parse_multivector(args.u, pb.P), parse_multivector(args.v, pb.P)
    return {"u": format_multivector(u), "v": format_multivector(v), "bracket": format_multivector(gbracket(pb.P, u, v))}, True


def _sample_pairs(pb: Problem, rng: random.Random) -> list[tuple[Multivector, Multivector]]:
    items = [Multivector._raw(pb.ring, pb.P.rank, {I: mono}) for mono, I in basis_multivectors(pb.P, 1) if len(I) <= 2]
    pairs = [(u, v) for u in items for v in items if u.degree() + v.degree() <= 3]
    if len(pairs) > SAMPLE_PAIRS:
        pairs = rng.sample(pairs, SAMPLE_PAIRS)
    return pairs


def _cmd_generator(pb: Problem, args) -> tuple[dict, bool]:
    P = pb.P
    D = generator_from_connection(P, pb.right)
    images = []
    if args.u is not None:
        u = parse_multivector(args.u, P)
        images.append({"input": format_multivector(u), "image": format_multivector(D(u))})
    else:
        for I in basis_index_sets(P.rank):
            images.append({"input": _basis_label(I), "image": format_multivector(D.on_term(pb.ring.one, I))})
    bad = None
    pairs = _sample_pairs(pb, random.Random(0))
    for u, v in pairs:
        if check_generates(P, D, u, v):
            bad = [format_multivector(u), format_multivector(v)]
            break
    return {"images": images, "generation_identity": {"pairs": len(pairs), "passed": bad is None, "witness": bad}}, bad is None


def _cmd_flatness(pb: Problem, args) -> tuple[dict, bool]:
    P = pb.P
    witnesses = flatness_check(P, pb.right)
    D = generator_from_connection(P, pb.right)
    sq = square_zero_on_basis(P, D, SQUARE_CUTOFF)
    out = {
        "right_connection": {
            "flat": not witnesses,
            "witnesses": [{"pair": list(w.pair), "value": str(w.value)} for w in witnesses],
        },
        "square_zero": {
            "cutoff": SQUARE_CUTOFF,
            "passed": sq is None,
            "witness": None
            if sq is None
            else {
                "input": format_multivector(Multivector._raw(pb.ring, P.rank, {sq[1]: sq[0]})),
                "image": format_multivector(D(D(Multivector._raw(pb.ring, P.rank, {sq[1]: sq[0]})))),
            },
        },
    }
    ok = not witnesses and sq is None
    if pb.top_given and pb.top is not None:
        tw = top_flatness_check(P, pb.top)
        out["top_connection"] = {"flat": not tw, "witnesses": [{"pair": list(p), "value": str(v)} for p, v in tw]}
        ok = ok and not tw
    return out, ok


def _window(pb: Problem, args):
    return args.window if args.window is not None else pb.window


def _require_poisson_valid(pb: Problem):
    if pb.poisson is not None:
        witness = jacobi_check(pb.poisson)
        if witness is not None:
            raise Failure(f"Poisson bracket fails the Jacobi identity on generators {witness}")


def _cmd_homology(pb: Problem, args) -> tuple[dict, bool]:
    _require_poisson_valid(pb)
    rep = homology_dims(pb.P, pb.right, _window(pb, args), pb.grading)
    return {"report": rep.to_dict(), "dims": list(rep.dims())}, True


def _cmd_cohomology(pb: Problem, args) -> tuple[dict, bool]:
    _require_poisson_valid(pb)
    if pb.top is None:
        raise InputError("cohomology needs rank >= 1")
    rep = cohomology_dims(pb.P, pb.top, _window(pb, args), pb.grading)
    return {"report": rep.to_dict(), "dims": list(rep.dims())}, True


def _cmd_duality(pb: Problem, args) -> tuple[dict, bool]:
    _require_poisson_valid(pb)
    if pb.top is None:
        raise InputError("duality needs rank >= 1")
    rep = duality_check(pb.P, pb.top, _window(pb, args), pb.grading)
    out = rep.to_dict()
    out["dims"] = {"homology": list(rep.homology.dims()), "cohomology": list(rep.cohomology.dims())}
    return out, rep.passed


def _cmd_poisson(pb: Problem, args) -> tuple[dict, bool]:
    S = pb.poisson
    if S is None:
        raise InputError("the poisson command needs a \"poisson\" block")
    out: dict = {}
    witness = jacobi_check(S)
    out["jacobi"] = {"passed": witness is None, "witness": list(witness) if witness else None}
    stable = truncation_is_poisson_stable(S)
    out["truncation_stable"] = stable
    if witness is not None or not stable:
        return out, False
    P = pb.P
    axioms = check_axioms(P)
    out["axioms"] = axioms.to_dict()
    # a o (b dx_i) = {ab, x_i} on monomials of degree <= 2
    exps = monomials_up_to(S.ring.nvars, 2)
    bad = None
    zero = pb.ring.zero
    canonical = canonical_right_connection(S)
    for ea in exps:
        for eb in exps:
            a, b = pb.ring.monomial(ea), pb.ring.monomial(eb)
            for i in range(S.ring.nvars):
                alpha = tuple(b if k == i else zero for k in range(P.rank))
                if bad is None and right_action(P, canonical, a, alpha) != poisson_bracket(S, a * b, pb.ring.var(i)):
                    bad = [str(a), str(b), i + 1]
    out["right_action_identity"] = {"passed": bad is None, "witness": bad}
    D = generator_from_connection(P, pb.right)
    sq = square_zero_on_basis(P, D, SQUARE_CUTOFF)
    out["square_zero"] = {"cutoff": SQUARE_CUTOFF, "passed": sq is None}
    ok = axioms.passed and bad is None and sq is None
    if sq is not None or flatness_check(P, pb.right):
        return out, False
    mismatch = boundary_equality(P, pb.right, SQUARE_CUTOFF)
    out["boundary_equality"] = {"cutoff": SQUARE_CUTOFF, "passed": mismatch is None}
    rep = homology_dims(P, pb.right, _window(pb, args), pb.grading)
    out["report"] = rep.to_dict()
    out["dims"] = list(rep.dims())
    return out, ok and mismatch is None


def _cmd_roundtrip(pb: Problem, args) -> tuple[dict, bool]:
    P = pb.P
    C = pb.right
    D = generator_from_connection(P, C)
    back = connection_from_generator(P, D)
    t1a = back == C
    D2 = generator_from_connection(P, back)
    t1b = all(D.on_term(mono, I) == D2.on_term(mono, I) for mono, I in basis_multivectors(P, 2))
    out = {"connection_generator_connection": t1a, "generator_connection_generator": t1b}
    ok = t1a and t1b
    if P.rank >= 1:
        nabla = top_from_right(P, C)
        t3a = right_from_top(P, nabla) == C
        t3b = top_from_right(P, right_from_top(P, pb.top)) == pb.top
        t3c = (not flatness_check(P, C)) == (not top_flatness_check(P, nabla))
        out.update({"right_top_right": t3a, "top_right_top": t3b, "flatness_transport": t3c})
        ok = ok and t3a and t3b and t3c
    return out, ok


_HANDLERS = {
    "check": _cmd_check,
    "bracket": _cmd_bracket,
    "generator": _cmd_generator,
    "flatness": _cmd_flatness,
    "homology": _cmd_homology,
    "cohomology": _cmd_cohomology,
    "duality": _cmd_duality,
    "poisson": _cmd_poisson,
    "roundtrip": _cmd_roundtrip,
}


def _text_lines(command: str, body: dict, ok: bool) -> list[str]:
    lines = [f"{command}: {'PASS' if ok else 'FAIL'}"]

    def walk(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(f"{prefix}{k}.", v)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for i, v in enumerate(value):
                walk(f"{prefix}{i}.", v)
        else:
            lines.append(f"  {prefix.rstrip('.')} = {json.dumps(value) if not isinstance(value, str) else value}")

    if "report" in body:
        rep = body["report"]
        lines.append(f"  mode = {rep['mode']}")
        lines.append("  k  weight  dim_chain  dim_homology  stable")
        for b in rep["blocks"]:
            w = "-" if b["weight"] is None else b["weight"]
            lines.append(f"  {b['k']:<2} {w!s:>6}  {b['dim_chain']:>9}  {b['dim_homology']:>12}  {'yes' if b['stable'] else 'no'}")
        body = {k: v for k, v in body.items() if k != "report"}
    if "pairs" in body:
        lines.append("  k  weight  H_k  H^(n-k)  stable  match")
        for r in body["pairs"]:
            w = "-" if r["weight"] is None else r["weight"]
            lines.append(
                f"  {r['k']:<2} {w!s:>6}  {r['dim_homology']!s:>3}  {r['dim_cohomology_dual']!s:>7}  "
                f"{'yes' if r['stable'] else 'no':>6}  {'yes' if r['match'] else 'no'}"
            )
        body = {k: v for k, v in body.items() if k not in ("pairs", "homology", "cohomology")}
    walk("", body)
    return lines


def run(command: str, problem: Problem, args) -> tuple[dict, int]:
    """Execute one command; returns the report body and the exit code."""
    try:
        body, ok = _HANDLERS[command](problem, args)
    except (NonFlatError, Failure, PoissonError) as exc:
        return {"error": str(exc)}, 1
    return body, 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrbv", description="Exact Lie-Rinehart, Gerstenhaber and BV computations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("presets", help="list the built-in example documents")
    for name in COMMANDS:
        p = sub.add_parser(name)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--input", metavar="PATH", help="JSON input document")
        src.add_argument("--preset", metavar="NAME", help="built-in example document")
        p.add_argument("--json", action="store_true", help="emit the machine-readable report")
        p.add_argument("--window", type=int, metavar="N", help="coefficient-degree or weight window")
        p.add_argument("--u", metavar="EXPR", help="multivector, e.g. 'x*e[1,2] - e[3]'")
        p.add_argument("--v", metavar="EXPR", help="second multivector for bracket")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "presets":
        for name, desc in list_presets():
            print(f"{name:<18} {desc}")
        return 0
    start = time.perf_counter()
    try:
        if args.window is not None and args.window < 0:
            raise InputError("--window must be non-negative")
        if args.preset is not None:
            problem = parse_document(get_preset(args.preset).doc())
            source = f"preset:{args.preset}"
        else:
            problem = load_document(args.input)
            source = args.input
        body, code = run(args.command, problem, args)
    except (InputError, ParseError, GradingError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) else str(exc)
        if args.json:
            print(json.dumps({"command": args.command, "error": msg, "exit_code": 2, "version": __version__}, indent=2))
        else:
            print(f"error: {msg}", file=sys.stderr)
        return 2
    if args.json:
        # no timing here: reports must be byte-identical across runs
        report = {"command": args.command, "source": source, "version": __version__, "exit_code": code}
        report.update(body)
        print(json.dumps(report, indent=2))
    else:
        if "error" in body:
            print(f"{args.command}: FAIL\n  {body['error']}")
        else:
            print("\n".join(_text_lines(args.command, body, code == 0)))
        print(f"  ({source}, lrbv {__version__}, {time.perf_counter() - start:.2f}s)")
    return code


if __name__ == "__main__":
    sys.exit(main())
