"""Command-line front end: ``nabla <command> ...``.

Exit codes: 0 success (VALID for ``valid``), 1 negative verdict (INVALID or
a rejected proof), 2 any error.
"""
import argparse
import json
import sys

from .config import ENV_VAR, default_limit
from .core import base
from .elements import Inner, format_atom
from .errors import NablaError
from .functors import FinBag, FinDist, parse_functor, with_props
from .lexer import TokenStream
from .lifting import in_lifting, lifted_members, lifting_witness, load_relation
from .literals import format_element, parse_atom, parse_element, read_element
from .onestep import neg_dual, slim_redistributions
from .proof import check_derivation, parse_proof
from .semantics import (
    decide_valid, final_sequence, format_coalgebra, load_coalgebra, model_check,
)
from .syntax import FormulaParser, Nabla, depth, parse_formula, print_formula, subformulas


def _functor(args):
    if not args.functor:
        raise NablaError("--functor is required for this command")
    F = parse_functor(args.functor)
    props = _props(args)
    return (with_props(F, props) if props else F), props


def _props(args):
    if not args.props:
        return ()
    return tuple(p for p in args.props.replace(",", " ").split() if p)


def _formula_text(a):
    return print_formula(a)


def _emit(args, text_lines, payload):
    if args.output == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def cmd_parse(args):
    F, props = _functor(args)
    a = parse_formula(args.formula, F, props)
    text = _formula_text(a)
    n, k = depth(a), len(subformulas(a))
    _emit(args, [text, f"depth: {n}", f"subformulas: {k}"],
          {"formula": text, "depth": n, "subformulas": k})
    return 0


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_check(args):
    M = load_coalgebra(_read(args.coalgebra))
    a = parse_formula(args.formula, M.functor, M.props)
    verdict = model_check(M, args.state, a)
    _emit(args, ["true" if verdict else "false"], {"holds": verdict})
    return 0


def cmd_valid(args):
    F, props = _functor(args)
    ts = TokenStream(args.inequality)
    p = FormulaParser(F, props)
    a = p.formula(ts)
    ts.expect("<=")
    b = p.formula(ts)
    ts.expect_eof()
    v = decide_valid(F, a, b, args.max_enum, props)
    if v.valid:
        _emit(args, ["VALID"], {"valid": True, "level": v.level})
        return 0
    cm = v.countermodel
    dump = format_coalgebra(cm.coalgebra, cm.state, cm.labels)
    _emit(args, ["INVALID"] + dump.rstrip("\n").split("\n"),
          {"valid": False, "level": v.level, "witness": cm.state, "countermodel": dump})
    return 1


def _element_set(text, F, leaf):
    ts = TokenStream(text)
    ts.expect("{")
    items = ts.sep_list("}", lambda: read_element(ts, F, leaf))
    ts.expect_eof()
    return items


def _atom_leaf(ts):
    return Inner(parse_atom(ts))


def _subset_text(x):
    v = x.value
    if isinstance(v, frozenset):
        return format_atom(v)
    return str(v)


def cmd_srd(args):
    F, _ = _functor(args)
    A = _element_set(args.elements, F, _atom_leaf)
    result = [format_element(F, phi, _subset_text)
              for phi in slim_redistributions(F, A, args.max_enum)]
    _emit(args, result, {"srd": result})
    return 0


def cmd_members(args):
    F, _ = _functor(args)
    phi = parse_element(args.phi, F)
    for U in base(F, phi):
        if not isinstance(U, frozenset):
            raise NablaError("Phi must hold sets of atoms, e.g. {{a},{a,b}}")
    X = frozenset().union(*base(F, phi))
    result = [format_element(F, m) for m in lifted_members(F, X, phi, args.max_enum)]
    _emit(args, result, {"members": result})
    return 0


def cmd_lift(args):
    F, _ = _functor(args)
    R = load_relation(_read(args.relation))
    e1 = parse_element(args.left, F)
    e2 = parse_element(args.right, F)
    holds = in_lifting(F, R, e1, e2)
    lines = ["true" if holds else "false"]
    payload = {"holds": holds}
    if holds and isinstance(F, (FinBag, FinDist)):
        rho = lifting_witness(F, R, e1, e2)
        pairs = sorted(rho.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))
        lines += [f"rho {x} {y} {w}" for (x, y), w in pairs]
        payload["witness"] = [[str(x), str(y), str(w)] for (x, y), w in pairs]
    _emit(args, lines, payload)
    return 0


def cmd_nnf(args):
    F, props = _functor(args)
    ts = TokenStream(args.formula)
    a = FormulaParser(F, props, free_variables=True).formula(ts)
    ts.expect_eof()
    if not isinstance(a, Nabla):
        raise NablaError("nnf expects a formula of the form 'nab <element>'")
    result = [print_formula(Nabla(beta, F)) for beta in neg_dual(F, a.arg, args.max_enum)]
    _emit(args, result, {"dual": result})
    return 0


def cmd_finalseq(args):
    F, _ = _functor(args)
    fs = final_sequence(F, args.max_enum)
    sizes = [len(fs.carrier(k)) for k in range(args.n + 1)]
    _emit(args, [f"level {k}: {s}" for k, s in enumerate(sizes)], {"sizes": sizes})
    return 0


def cmd_checkproof(args):
    F = None
    props = _props(args)
    if args.functor:
        F = parse_functor(args.functor)
        if props:
            F = with_props(F, props)
    pf = parse_proof(_read(args.proof), F, props)
    res = check_derivation(pf.root, pf.functor, args.max_enum)
    payload = {"ok": res.ok}
    if not res.ok:
        payload.update(path=res.path, reason=res.reason, detail=res.detail)
    _emit(args, [str(res)], payload)
    return 0 if res.ok else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--functor", help="functor expression, e.g. 'P' or 'Const(c)*Id*Id'")
    common.add_argument("--props", help="proposition letters, e.g. 'p,q' (wraps the functor)")
    common.add_argument("--max-enum", type=int, default=None,
                        help=f"enumeration cap (default ${ENV_VAR} or 1000000)")
    common.add_argument("--output", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="nabla", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and print a formula")
    p.add_argument("formula")
    p.set_defaults(run=cmd_parse)

    p = sub.add_parser("check", parents=[common], help="model-check a state of a coalgebra file")
    p.add_argument("coalgebra")
    p.add_argument("state")
    p.add_argument("formula")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("valid", parents=[common], help="decide an inequality 'a <= b'")
    p.add_argument("inequality")
    p.set_defaults(run=cmd_valid)

    p = sub.add_parser("srd", parents=[common], help="slim redistributions of a set of elements")
    p.add_argument("elements")
    p.set_defaults(run=cmd_srd)

    p = sub.add_parser("members", parents=[common], help="lifted members of Phi")
    p.add_argument("phi")
    p.set_defaults(run=cmd_members)

    p = sub.add_parser("lift", parents=[common], help="decide membership in a lifted relation")
    p.add_argument("relation")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(run=cmd_lift)

    p = sub.add_parser("nnf", parents=[common], help="nabla arguments of the negation dual")
    p.add_argument("formula")
    p.set_defaults(run=cmd_nnf)

    p = sub.add_parser("finalseq", parents=[common], help="sizes of the final sequence levels")
    p.add_argument("n", type=int)
    p.set_defaults(run=cmd_finalseq)

    p = sub.add_parser("checkproof", parents=[common], help="check a derivation file")
    p.add_argument("proof")
    p.set_defaults(run=cmd_checkproof)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.max_enum is None:
            args.max_enum = default_limit()
        elif args.max_enum < 1:
            raise NablaError("--max-enum must be at least 1")
        return args.run(args)
    except (NablaError, ValueError, OSError, RecursionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
