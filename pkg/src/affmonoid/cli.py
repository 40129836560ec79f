"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails
(the report carries a witness), 2 for usage and parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog, classify, structure
from .derivations import Grading
from .monoids import MonoidStructure, verify_all

FAMILIES = ("rank0", "toric", "corank1", "a3-mbaca", "a3-mbabca", "a3-mmbca",
            "bilinear", "truncated", "hirzebruch")
ACTIONS = ("wpp", "hirzebruch", "translation")


class UsageError(Exception):
    pass


def _ints(text: str | None) -> list[int]:
    if text is None or text == "":
        return []
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _fracs(text: str) -> list[Fraction]:
    try:
        return [Fraction(v) for v in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected comma-separated rationals, got {text!r}") from None


def _need(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name} is required for family {args.family}")
    return value


def _single(args, name: str) -> int:
    vals = _ints(_need(args, name))
    if len(vals) != 1:
        raise UsageError(f"--{name} takes a single integer here")
    return vals[0]


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if not text.strip():
        raise UsageError(f"{path} is empty")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def build_family(args) -> MonoidStructure:
    fam = args.family
    if fam == "rank0":
        return catalog.make_rank0(_need(args, "n"))
    if fam == "toric":
        return catalog.make_toric(_need(args, "n"))
    if fam == "corank1":
        b = _ints(_need(args, "b"))
        n = args.n if args.n is not None else len(b) + 1
        return catalog.make_corank1(n, b)
    if fam in ("a3-mbaca", "a3-mbabca"):
        tag = "MbAcA" if fam == "a3-mbaca" else "MbAbcA"
        return catalog.make_A3(tag, _single(args, "b"), _need(args, "c"))
    if fam == "a3-mmbca":
        return catalog.make_corank1(3, [_single(args, "b"), _need(args, "c")])
    if fam == "bilinear":
        if args.constants:
            alg = catalog.AlgebraStructureConstants.from_json(_read_json(args.constants))
            return catalog.make_bilinear(alg)
        return catalog.make_bilinear_preset(_need(args, "algebra"))
    if fam == "truncated":
        return catalog.make_truncated(_need(args, "n"))
    if fam == "hirzebruch":
        return catalog.make_hirzebruch(_need(args, "d"), args.normalized)
    raise UsageError(f"unknown family {fam!r}")


def load_monoid(args) -> MonoidStructure:
    if getattr(args, "monoid", None):
        data = _read_json(args.monoid)
        try:
            return MonoidStructure.from_json(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{args.monoid} is not a monoid description: {exc}") from None
    if not getattr(args, "family", None):
        raise UsageError("give --monoid FILE or --family NAME")
    return build_family(args)


# -- commands ---------------------------------------------------------------------

def cmd_catalog(args):
    if args.action == "list":
        fams = [{"family": f, "constraints": catalog.FAMILY_CONSTRAINTS[f]} for f in FAMILIES]
        text = "\n".join(f"{f['family']:<11} {f['constraints']}" for f in fams)
        return {"families": fams}, text, 0
    S = build_family(args)
    return S.to_json(), render_monoid(S), 0


def render_monoid(S: MonoidStructure) -> str:
    lines = [f"family: {S.family.label()}" if S.family else "family: none"]
    for i, p in enumerate(S.components, 1):
        lines.append(f"(x*y)_{i} = {p}")
    unit = "none" if S.unit is None else "(" + ", ".join(str(v) for v in S.unit) + ")"
    zero = "none" if S.zero is None else "(" + ", ".join(str(v) for v in S.zero) + ")"
    lines += [f"unit: {unit}", f"zero: {zero}"]
    if S.family is not None:
        lines.append(f"rank: {S.family.rank}  corank: {S.family.corank}")
    return "\n".join(lines)


def cmd_verify(args):
    data = _read_json(args.file)
    try:
        S = MonoidStructure.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{args.file} is not a monoid description: {exc}") from None
    checks = verify_all(S, args.seed)
    ok = all(checks)
    lines = []
    for c in checks:
        if c:
            lines.append(f"{c.axiom}: pass")
        else:
            w = c.to_json()
            lines.append(f"{c.axiom}: FAIL component {w.get('component')} at point "
                         f"{w.get('point')} lhs={w.get('lhs')} rhs={w.get('rhs')}")
    return {"ok": ok, "checks": [c.to_json() for c in checks]}, "\n".join(lines), 0 if ok else 1


def _action_for(args):
    kind = args.action_family
    if kind == "wpp":
        b, c = _need(args, "b"), _need(args, "c")
        return [(f"wpp({b},{c}) action {i}", a, Grading.of([1, b, c]))
                for i, a in enumerate(classify.wpp_actions(b, c), 1)]
    if kind == "hirzebruch":
        d = _need(args, "d")
        g = Grading.of(catalog.hirzebruch_weights(d))
        return [(f"hirzebruch d={d} {'normalized' if args.normalized else 'non-normalized'}",
                 catalog.hirzebruch_unipotent_action(d, args.normalized), g)]
    n = _need(args, "n")
    return [(f"translation n={n}", classify.translation_action(n), Grading.of([1] * n))]


def cmd_classify(args):
    sub = args.action
    if sub == "normalize":
        data = _read_json(_need(args, "pair"))
        if args.weights:
            data = {**data, "weights": _ints(args.weights)}
        try:
            pair = classify.CommutingPair.from_json(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad pair description: {exc}") from None
        diag = classify.validate_pair(pair)
        if not diag:
            return ({"valid": False, "diagnostics": diag.to_json()},
                    "invalid pair: " + "; ".join(diag.failures), 1)
        res = classify.normalize_pair(pair)
        j = res.to_json()
        text = "\n".join([
            f"type {res.type} (case {res.case})",
            f"b={res.b} c={res.c} d={res.d} e={res.e}",
            f"beta = ({', '.join(j['params']['beta'])})  gamma = ({', '.join(j['params']['gamma'])})",
            "change of variables: (" + ", ".join(j["change_of_variables"]) + ")",
            f"delta1: {res.normalized.delta1}",
            f"delta2: {res.normalized.delta2}",
        ])
        return j, text, 0
    if sub == "distinguish":
        samples = _fracs(args.samples)
        v = classify.distinguish_rank1_families(_need(args, "b"), _need(args, "c"), samples)
        text = "\n".join([f"verdict: {v.verdict}",
                          "MbAbcA stabilizer lines: " + "; ".join(v.mbabca_lines),
                          "MbAcA stabilizer lines: " + "; ".join(v.mbaca_lines)])
        return v.to_json(), text, 0 if v.verdict.startswith("non-isomorphic") else 1
    if sub == "stabilizer":
        tag = "MbAcA" if args.family == "a3-mbaca" else "MbAbcA"
        lams = _fracs(args.lams) if args.lams else []
        rep = classify.unipotent_stabilizer(tag, _need(args, "b"), _need(args, "c"),
                                            Fraction(args.lam), lams)
        return rep.to_json(), f"f = {rep.f}\nstabilizer: {rep.describe()}", 0
    if sub == "wpp":
        args.action_family = "wpp"
    reports = []
    lines = []
    for label, action, g in _action_for(args):
        rep = classify.verify_additive_action(action, g, args.seed)
        reports.append({"action": label, "components": [str(p) for p in action.components],
                        "report": rep.to_json()})
        lines.append(f"{label}: {'verified' if rep else 'FAILED ' + ','.join(rep.failed)}")
        lines += [f"  x{i} -> {p}" for i, p in enumerate(action.components, 1)]
    ok = all(r["report"]["ok"] for r in reports)
    return {"ok": ok, "actions": reports}, "\n".join(lines), 0 if ok else 1


def cmd_structure(args):
    S = load_monoid(args)
    sub = args.action
    if sub == "idempotents":
        ids = structure.idempotents(S)
        out = ids.to_json()
        ok = True
        if S.family is not None and S.family.rank is not None:
            bound = structure.check_idempotent_bound(S)
            out["bound"] = bound.to_json()
            ok = bound.holds
        text = f"{len(ids)} idempotents" + ("" if ids.complete else " (candidate scan only)")
        text += "".join("\n  (" + ", ".join(str(v) for v in p) + ")" for p in ids.points)
        return out, text, 0 if ok else 1
    if sub == "nilpotent":
        rep = structure.is_nilpotent(S, _fracs(_need(args, "point")))
        text = (f"nilpotent: p^{rep.index_bound} = 0" if rep.nilpotent
                else f"not nilpotent (p^{rep.bound} != 0)")
        return rep.to_json(), text, 0
    if sub == "dichotomy":
        rep = structure.dichotomy_rank1(S, structure.grid(S.dim, args.grid))
        return rep.to_json(), f"dichotomy {rep.summary()}", 0 if rep.ok else 1
    if sub == "group-like":
        m, q = structure.group_like_power(S, _fracs(_need(args, "point")))
        pt = [str(v) for v in q]
        return {"m": m, "power": pt}, f"p^{m} = ({', '.join(pt)}) is group-like", 0
    raise UsageError(f"unknown structure subcommand {sub!r}")


# -- parser -----------------------------------------------------------------------

def _family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int)
    p.add_argument("--b", help="integer, or comma list for corank1")
    p.add_argument("--c", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--normalized", dest="normalized", action="store_true", default=True)
    p.add_argument("--non-normalized", dest="normalized", action="store_false")
    p.add_argument("--algebra", choices=catalog.PRESET_ALGEBRAS)
    p.add_argument("--constants", metavar="FILE", help="structure constants JSON")


def build_parser() -> argparse.ArgumentParser:
    def globals_parser(default):
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--seed", type=int, default=default(0),
                       help="seed for every randomized check")
        p.add_argument("--format", choices=("json", "text"), default=default("json"))
        p.add_argument("--out", metavar="PATH", default=default(None),
                       help="write the report here instead of stdout")
        return p

    # global flags may appear before or after the subcommand; the copies on
    # the subparsers suppress their defaults so they never clobber the former
    common = globals_parser(lambda v: argparse.SUPPRESS)
    parser = argparse.ArgumentParser(prog="affmonoid", parents=[globals_parser(lambda v: v)],
                                     description="Commutative monoid structures on affine spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    cat = sub.add_parser("catalog", parents=[common], help="list or build catalog monoids")
    cat_sub = cat.add_subparsers(dest="action", required=True)
    cat_sub.add_parser("list", parents=[common])
    build = cat_sub.add_parser("build", parents=[common])
    build.add_argument("family", choices=FAMILIES)
    _family_flags(build)

    ver = sub.add_parser("verify", parents=[common], help="check the monoid axioms")
    ver.add_argument("file")

    cls = sub.add_parser("classify", parents=[common], help="normal forms and invariants on A^3")
    cls_sub = cls.add_subparsers(dest="action", required=True)
    norm = cls_sub.add_parser("normalize", parents=[common])
    norm.add_argument("--pair", metavar="FILE")
    norm.add_argument("--weights", help="a,b,c (overrides the pair file)")
    dist = cls_sub.add_parser("distinguish", parents=[common])
    dist.add_argument("--b", type=int)
    dist.add_argument("--c", type=int)
    dist.add_argument("--samples", default="0,1,2")
    stab = cls_sub.add_parser("stabilizer", parents=[common])
    stab.add_argument("--family", choices=("a3-mbaca", "a3-mbabca"), required=True)
    stab.add_argument("--b", type=int)
    stab.add_argument("--c", type=int)
    stab.add_argument("--lam", default="0", help="coefficient of x3")
    stab.add_argument("--lams", help="lambda_1..lambda_d, comma separated")
    wpp = cls_sub.add_parser("wpp", parents=[common])
    wpp.add_argument("--b", type=int)
    wpp.add_argument("--c", type=int)
    va = cls_sub.add_parser("verify-action", parents=[common])
    va.add_argument("--family", dest="action_family", choices=ACTIONS, required=True)
    for flag in ("--n", "--b", "--c", "--d"):
        va.add_argument(flag, type=int)
    va.add_argument("--normalized", dest="normalized", action="store_true", default=True)
    va.add_argument("--non-normalized", dest="normalized", action="store_false")

    st = sub.add_parser("structure", parents=[common], help="idempotents, nilpotents, dichotomy")
    st_sub = st.add_subparsers(dest="action", required=True)
    for name in ("idempotents", "nilpotent", "dichotomy", "group-like"):
        sp = st_sub.add_parser(name, parents=[common])
        sp.add_argument("--monoid", metavar="FILE")
        sp.add_argument("--family", choices=FAMILIES)
        _family_flags(sp)
        if name in ("nilpotent", "group-like"):
            sp.add_argument("--point", help="comma-separated rational coordinates")
        if name == "dichotomy":
            sp.add_argument("--grid", type=int, default=1, help="radius of the integer grid")
    return parser


COMMANDS = {"catalog": cmd_catalog, "verify": cmd_verify,
            "classify": cmd_classify, "structure": cmd_structure}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload, text, code = COMMANDS[args.command](args)
    except (UsageError, catalog.ConstraintError, catalog.AlgebraError,
            structure.WrongFamily, structure.MissingMetadata, classify.NormalizationError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _emit(text + "\n", args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
