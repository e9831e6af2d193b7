"""Command-line front end.

    pluralsem analyze [--lexicon PATH] [--budget N] [--union-groups]
                      [--format plain|records] [--unicode] SENTENCE
    pluralsem check-lexicon --lexicon PATH
    pluralsem eval --model PATH [--lexicon PATH] FORMULA
    pluralsem oracle {covering|member-oplus} [--bounds e=K,g=K]

Exit codes: 0 success / at least one unblocked reading; 1 failed checks
or diagnostics; 2 all readings blocked (or none derivable); 3 no parse;
4 unknown token; 5 unreadable input (missing file, syntax error, unknown
suite).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import lexicon as lexmod
from . import modeleval
from .grammar import NoParse, UnknownToken
from .kernel import App, Arrow, Base, Const, KernelError, Lam, TyApp, TypingContext, Var, type_of, types_equal
from .logic import pretty
from .readings import LABEL_ORDER, enumerate_readings
from .syntax import ElaborationError, ParseError, parse_term

_PACKAGED = ("english.lex", "french.lex", "japanese.lex")


def _load_lexicon(path: str) -> lexmod.Lexicon:
    candidate = Path(path)
    if not candidate.exists() and path in _PACKAGED:
        candidate = lexmod.packaged_lexicon_path(path)
    if not candidate.exists():
        raise FileNotFoundError(path)
    return lexmod.load_path(candidate)


def _validated_lexicon(path: str, errstream) -> lexmod.Lexicon | None:
    try:
        lex = _load_lexicon(path)
    except FileNotFoundError:
        print(f"error: lexicon file not found: {path}", file=errstream)
        return None
    except lexmod.LexSyntaxError as exc:
        print(f"error: {path}: {exc}", file=errstream)
        return None
    diags = lexmod.validate(lex)
    if diags:
        for diag in diags:
            print(f"{path}: {diag}", file=errstream)
        return None
    return lex


def cmd_analyze(args, out=sys.stdout, err=sys.stderr) -> int:
    lex = _validated_lexicon(args.lexicon, err)
    if lex is None:
        return 5
    if args.union_groups:
        lex = lex.with_union_groups()
    try:
        readings = enumerate_readings(args.sentence, lex, budget=args.budget)
    except UnknownToken as exc:
        print(f"error: {exc}", file=err)
        return 4
    except NoParse as exc:
        print(f"error: no parse: {exc}", file=err)
        return 3
    if not readings:
        print("NoReading: parse succeeded but no well-typed reading exists", file=err)
        return 2
    for i, reading in enumerate(readings, start=1):
        labels = ",".join(l for l in LABEL_ORDER if l in reading.labels)
        status = "blocked" if reading.blocked else "ok"
        formula = pretty(reading.formula, unicode=args.unicode)
        if args.format == "records":
            print(f"R{i}\t{labels}\t{status}\t{formula}", file=out)
        else:
            print(f"R{i} [{labels}] {status}", file=out)
            print(f"    {formula}", file=out)
            if reading.trace:
                shown = ", ".join(f"{name} @ {occ[0]}-{occ[1]}" for occ, name in reading.trace)
                print(f"    coercions: {shown}", file=out)
    return 0 if any(not r.blocked for r in readings) else 2


def cmd_check_lexicon(args, out=sys.stdout, err=sys.stderr) -> int:
    try:
        lex = _load_lexicon(args.lexicon)
    except FileNotFoundError:
        print(f"error: lexicon file not found: {args.lexicon}", file=err)
        return 5
    except lexmod.LexSyntaxError as exc:
        print(f"error: {args.lexicon}: {exc}", file=err)
        return 5
    diags = lexmod.validate(lex)
    for diag in diags:
        print(str(diag), file=out)
    if diags:
        return 1
    print(f"ok: {len(lex.entries)} entries, {len(lex.coercions)} coercions", file=out)
    return 0


def cmd_eval(args, out=sys.stdout, err=sys.stderr) -> int:
    lex = _validated_lexicon(args.lexicon, err)
    if lex is None:
        return 5
    sig = lex.signature
    try:
        formula = parse_term(args.formula, sig)
        ty = type_of(TypingContext(sig), formula)
        if not types_equal(ty, Base("t")):
            print(f"error: formula has type {ty!r}, not t", file=err)
            return 5
    except (ParseError, ElaborationError, KernelError) as exc:
        print(f"error: {exc}", file=err)
        return 5
    try:
        model = modeleval.load_model_path(args.model, sig)
    except (FileNotFoundError, modeleval.EvalError) as exc:
        print(f"error: model: {exc}", file=err)
        return 5
    try:
        value = modeleval.eval_formula(model, formula)
    except modeleval.EvalError as exc:
        print(f"error: {exc}", file=err)
        return 1
    print("true" if value else "false", file=out)
    return 0


def _parse_bounds(text: str) -> dict[str, int]:
    bounds: dict[str, int] = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        sort, _, size = chunk.partition("=")
        bounds[sort.strip()] = int(size)
    return bounds


def _covering_suite(out, err, e_max: int) -> int:
    """Check that the covering form is entailed by both the collective and
    the distributive form, and strictly weaker than the collective one."""
    sig = lexmod.builtin_signature().extended(
        (),
        (
            ("j", Base("e")),
            ("d", Base("e")),
            ("piano", Arrow(Arrow(Base("e"), Base("t")), Base("t"))),
        ),
    )
    enum = "lam y:e. (y == j) || (y == d)"
    collective = parse_term(f"piano({enum})", sig)
    covering = parse_term(
        f"all x:e. ((x == j) || (x == d)) => "
        f"(some Q:(e -> t). Q x && subset Q ({enum}) && piano Q)",
        sig,
    )
    distributive = parse_term(
        "all x:e. ((x == j) || (x == d)) => piano(lam y:e. y == x)", sig
    )
    vocab = {
        "j": Base("e"),
        "d": Base("e"),
        "piano": Arrow(Arrow(Base("e"), Base("t")), Base("t")),
    }
    ok = True
    for size in range(1, e_max + 1):
        bounds = {"e": size, "g": 0}
        checks = [
            ("collective entails covering", modeleval.entails(bounds, vocab, collective, covering), True),
            ("distributive entails covering", modeleval.entails(bounds, vocab, distributive, covering), True),
        ]
        if size >= 2:
            checks.append(
                ("covering entails collective", modeleval.entails(bounds, vocab, covering, collective), False)
            )
        for name, got, want in checks:
            verdict = "ok" if got == want else "FAIL"
            print(f"covering |e|={size}: {name}: expected {want}, got {got}: {verdict}", file=out)
            if got != want:
                ok = False
    return 0 if ok else 1


def _member_oplus_suite(out, err, e_max: int) -> int:
    """Union-of-members equivalence on lattice models, plus a violation."""
    ok = True
    for size in range(1, e_max + 1):
        model = modeleval.make_link_model(size)
        got = modeleval.check_member_oplus(model)
        verdict = "ok" if got else "FAIL"
        print(f"member-oplus lattice |e|={size}: holds: {got}: {verdict}", file=out)
        ok = ok and got
    broken = modeleval.FiniteModel(
        {"e": ("a1", "a2"), "g": ("G1", "G2")},
        {"G1": frozenset({"a1"}), "G2": frozenset({"a2"})},
        {
            "oplus": modeleval.FrozenFunc(
                (
                    ("G1", modeleval.FrozenFunc((("G1", "G1"), ("G2", "G1")))),
                    ("G2", modeleval.FrozenFunc((("G1", "G1"), ("G2", "G2")))),
                )
            )
        },
    )
    got = modeleval.check_member_oplus(broken)
    verdict = "ok" if not got else "FAIL"
    print(f"member-oplus violation model: holds: {got}: {verdict}", file=out)
    ok = ok and not got
    return 0 if ok else 1


def cmd_oracle(args, out=sys.stdout, err=sys.stderr) -> int:
    bounds = _parse_bounds(args.bounds)
    e_max = bounds.get("e", 3)
    if args.suite == "covering":
        return _covering_suite(out, err, e_max)
    if args.suite == "member-oplus":
        return _member_oplus_suite(out, err, e_max)
    print(f"error: unknown suite {args.suite!r}", file=err)
    return 5


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pluralsem")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="enumerate the readings of a sentence")
    analyze.add_argument("--lexicon", default="english.lex")
    analyze.add_argument("--budget", type=int, default=1)
    analyze.add_argument("--union-groups", action="store_true")
    analyze.add_argument("--format", choices=("plain", "records"), default="records")
    analyze.add_argument("--unicode", action="store_true")
    analyze.add_argument("sentence")
    analyze.set_defaults(fn=cmd_analyze)

    check = sub.add_parser("check-lexicon", help="load and validate a lexicon")
    check.add_argument("--lexicon", default="english.lex")
    check.set_defaults(fn=cmd_check_lexicon)

    ev = sub.add_parser("eval", help="evaluate a formula against a model file")
    ev.add_argument("--lexicon", default="english.lex")
    ev.add_argument("--model", required=True)
    ev.add_argument("formula")
    ev.set_defaults(fn=cmd_eval)

    oracle = sub.add_parser("oracle", help="run a finite-model oracle suite")
    oracle.add_argument("suite")
    oracle.add_argument("--bounds", default="e=3,g=2")
    oracle.set_defaults(fn=cmd_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
