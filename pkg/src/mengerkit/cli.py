"""Command line: mengerkit check|represent|decompose|enumerate|random.

Exit status: 0 when every check passes, 1 on a mathematical failure
(including a closure cap), 2 on unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import documents
from .algebra import (
    AlgebraTable,
    algebra_from_functions,
    check_axioms,
    check_representability,
    find_selectors,
)
from .errors import ClosureCapError, DocumentError, MengerError, PreconditionError
from .generators import enumerate_abstract, enumerate_function_algebras, random_algebra
from .nfun import FunctionSet
from .relations import (
    OrderedAlgebra,
    check_orbit_condition,
    decompose_rep,
    inclusion_order,
    order_represent,
    relation_properties,
)
from .represent import (
    Representation,
    completion_of_rep,
    rep_general,
    rep_unitary,
    unitary_extension,
    verify_representation,
)


class InputError(Exception):
    pass


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, separators=(",", ":")) + "\n")


def _as_algebra(obj):
    """(algebra, order or None) from any algebra-like document."""
    if isinstance(obj, AlgebraTable):
        return obj, None
    if isinstance(obj, OrderedAlgebra):
        return obj.alg, obj.zeta
    if isinstance(obj, FunctionSet):
        alg, images = algebra_from_functions(obj)
        return alg, inclusion_order(images)
    raise InputError("expected an algebra, ordered algebra, or function set document")


def cmd_check(args) -> int:
    obj = documents.load(args.path)
    alg, zeta = _as_algebra(obj)
    axioms = check_axioms(alg)
    reps = check_representability(alg)
    sel = find_selectors(alg)
    out = {
        "command": "check",
        "kind": {FunctionSet: "functions", OrderedAlgebra: "ordered"}.get(type(obj), "abstract"),
        "size": alg.size,
        "axioms": axioms.to_dict(),
        "representability": reps.to_dict(),
        "selectors": list(sel) if sel is not None else None,
    }
    ok = axioms.ok and reps.ok
    if isinstance(obj, OrderedAlgebra):
        props = relation_properties(alg, zeta)
        orbit = check_orbit_condition(alg, zeta)
        order = {
            "reflexive": zeta.is_reflexive(),
            "transitive": zeta.is_transitive(),
            "antisymmetric": zeta.is_antisymmetric(),
            **props.to_dict(),
            "orbit_condition": orbit.to_dict(),
        }
        out["order"] = order
        ok = ok and zeta.is_order() and props.stable.passed and orbit.passed
    out["ok"] = ok
    _emit(out)
    return 0 if ok else 1


def cmd_represent(args) -> int:
    obj = documents.load(args.path)
    alg, zeta = _as_algebra(obj)
    if args.method == "unitary":
        P = rep_unitary(alg)
    elif args.method == "general":
        P = rep_general(alg)
    else:
        if zeta is None:
            raise InputError("--method ordered needs an ordered or function set document")
        P = order_represent(OrderedAlgebra(alg, zeta))
    out = {"command": "represent", "method": args.method, "representation": documents.to_document(P)}
    if args.complete:
        P = completion_of_rep(P)
        out["completed"] = documents.to_document(P)
    if args.extend:
        if not all(f.is_full for f in P.images):
            raise InputError("--extend needs full images; add --complete")
        levels = unitary_extension(FunctionSet(tuple(dict.fromkeys(P.images))), from_completion=args.complete)
        out["extension"] = {
            "level_sizes": [len(level) for level in levels.levels],
            "closure": documents.to_document(levels.closure),
        }
    out["ok"] = True
    _emit(out)
    return 0


def cmd_decompose(args) -> int:
    alg, _ = _as_algebra(documents.load(args.algebra))
    P = documents.load(args.representation)
    if not isinstance(P, Representation):
        raise InputError("second argument must be a representation document")
    if P.source != alg:
        raise InputError("representation source differs from the algebra")
    check = verify_representation(alg, P)
    if not check.ok:
        _emit({"command": "decompose", "ok": False, "representation": check.to_dict()})
        return 1
    D = decompose_rep(alg, P)
    out = {
        "command": "decompose",
        "star_size": D.star.size,
        "parts": [
            {
                "point": list(part.point),
                "determining_pair": part.report.to_dict(),
                "representation": documents.to_document(part.rep),
            }
            for part in D.parts
        ],
        "union_matches": D.union_matches,
        "ok": D.union_matches,
    }
    _emit(out)
    return 0 if D.union_matches else 1


def cmd_enumerate(args) -> int:
    if args.mode == "abstract":
        if args.gsize is None:
            raise InputError("--mode abstract needs --gsize")
        for alg in enumerate_abstract(args.n, args.gsize, up_to_iso=not args.labelled, limit=args.limit):
            _emit(documents.to_document(alg))
    else:
        if args.carrier is None:
            raise InputError("--mode functions needs --carrier")
        for fs in enumerate_function_algebras(args.carrier, args.n, partial=args.partial, limit=args.limit):
            _emit(documents.to_document(fs))
    return 0


def cmd_random(args) -> int:
    alg = random_algebra(args.n, args.gsize, args.seed)
    _emit(documents.to_document(alg, selectors=find_selectors(alg)))
    return 0


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mengerkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="axioms, representability, selectors (and order conditions)")
    p.add_argument("path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("represent", help="build and verify a representation")
    p.add_argument("path")
    p.add_argument("--method", choices=("unitary", "general", "ordered"), default="general")
    p.add_argument("--complete", action="store_true", help="complete every image with a sink value")
    p.add_argument("--extend", action="store_true", help="close the images with the projectors")
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("decompose", help="split a representation into simplest ones")
    p.add_argument("algebra")
    p.add_argument("representation")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("enumerate", help="list small algebras as JSON lines")
    p.add_argument("--n", type=_positive, default=2)
    p.add_argument("--mode", choices=("abstract", "functions"), default="abstract")
    p.add_argument("--gsize", type=_positive)
    p.add_argument("--carrier", type=_positive)
    p.add_argument("--partial", action="store_true", help="functions mode: allow partial functions")
    p.add_argument("--labelled", action="store_true", help="abstract mode: keep isomorphic copies")
    p.add_argument("--limit", type=_positive)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("random", help="seeded random representable algebra")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gsize", type=_positive, default=3)
    p.add_argument("--n", type=_positive, default=2)
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (InputError, DocumentError) as exc:
        print(f"mengerkit: {exc}", file=sys.stderr)
        return 2
    except ClosureCapError as exc:
        _emit({"command": args.command, "ok": False, "error": str(exc)})
        return 1
    except PreconditionError as exc:
        out = {"command": args.command, "ok": False, "error": str(exc)}
        if exc.report is not None:
            out["report"] = exc.report.to_dict()
        _emit(out)
        return 1
    except MengerError as exc:
        _emit({"command": args.command, "ok": False, "error": str(exc)})
        return 1


if __name__ == "__main__":
    sys.exit(main())
