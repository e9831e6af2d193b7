"""Lexicon data model and loader.

A lexicon file declares extra sorts and constants, named coercions with a
rigidity flag and a scope, entries pairing (possibly multi-word) forms
with a category and a term, and plural derivations:

    sort e_phys
    const entourage : e -> g
    coercion q      rigid=false scope=local  : Lam a. lam x:a. lam y:a. eq y x
    entry "met" : np\\s = lam P:(e -> t). (|P| > 1) && meet P  with [hash]
    plural "student" => "students"

Loading is staged: `load` fails only on grammar-level syntax errors;
name-resolution and typing problems surface as diagnostics from
`validate`.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, replace
from pathlib import Path

from . import syntax
from .grammar import Cat, CatAtom, parse_cat_stream
from .kernel import (
    App,
    Arrow,
    Base,
    Const,
    KernelError,
    Lam,
    Pi,
    Signature,
    Term,
    TyApp,
    TyLam,
    TyVar,
    Type,
    TypingContext,
    Var,
    fresh_name,
    normalize,
    subst_type,
    type_of,
    types_equal,
)
from .logic import builtin_signature
from .syntax import ElaborationError, ParseError, TokenStream, lex

LOCAL = "local"
GLOBAL = "global"


class LexSyntaxError(Exception):
    """Raised by `load` for malformed lexicon text."""

    def __init__(self, message: str, line: int, col: int = 0):
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col


class NotANoun(Exception):
    pass


class NotPredicative(Exception):
    pass


@dataclass(frozen=True)
class Coercion:
    name: str
    term: Term
    rigid: bool
    scope: str  # LOCAL or GLOBAL


@dataclass(frozen=True)
class LexEntry:
    tokens: tuple[str, ...]
    form: str
    cat: Cat
    term: Term | None
    coercions: tuple[str, ...] = ()
    line: int = 0


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    message: str
    line: int = 0

    def __str__(self) -> str:
        return f"line {self.line}: {self.kind}: {self.message}"


# Kernel failure classes mapped to diagnostic vocabulary: any failed
# application reads as an ApplicationMismatch at the lexicon level.
_DIAG_KINDS = {
    "NoInstantiation": "ApplicationMismatch",
    "ApplicationMismatch": "ApplicationMismatch",
    "UnboundName": "UnboundName",
    "NotAPi": "NotAPi",
    "TyLamEscape": "TyLamEscape",
    "ElaborationError": "UnboundName",
}


def _diag_kind(exc: Exception) -> str:
    name = exc.kind if isinstance(exc, ElaborationError) else type(exc).__name__
    return _DIAG_KINDS.get(name, name)


def plural_shift_term() -> Term:
    """The plural suffix: shifts a predicative noun over sort a to a
    predicate over a-sets of cardinality greater than one."""
    a = TyVar("a")
    pred = Arrow(a, Base("t"))
    card_q = App(TyApp(Const("card"), a), Var("Q"))
    bigger_than_one = App(App(Const("gt"), card_q), Const("1"))
    all_in_noun = App(
        TyApp(Const("forall"), a),
        Lam(
            "x",
            a,
            App(App(Const("implies"), App(Var("Q"), Var("x"))), App(Var("P"), Var("x"))),
        ),
    )
    conj = App(App(Const("and"), bigger_than_one), all_in_noun)
    return TyLam("a", Lam("P", pred, Lam("Q", pred, conj)))


class Lexicon:
    """Immutable after load + validate; concurrent readers are safe."""

    def __init__(
        self,
        entries: list[LexEntry],
        coercions: dict[str, Coercion],
        extra_sorts: tuple[str, ...],
        extra_constants: tuple[tuple[str, Type], ...],
        pending: list[Diagnostic],
    ):
        self.entries = list(entries)
        self.coercions = dict(coercions)
        self.extra_sorts = extra_sorts
        self.extra_constants = extra_constants
        self._pending = list(pending)
        self.signature = builtin_signature().extended(extra_sorts, extra_constants)
        self._index: dict[tuple[str, ...], list[LexEntry]] = {}
        for entry in self.entries:
            self._index.setdefault(entry.tokens, []).append(entry)
        self._max_form = max((len(e.tokens) for e in self.entries), default=0)

    def lookup(self, tokens) -> list[LexEntry]:
        return list(self._index.get(tuple(tokens), ()))

    def max_form_length(self) -> int:
        return self._max_form

    def global_coercions(self) -> list[Coercion]:
        return [c for c in self.coercions.values() if c.scope == GLOBAL]

    def rigid_names(self) -> frozenset[str]:
        return frozenset(n for n, c in self.coercions.items() if c.rigid)

    def context(self) -> TypingContext:
        return TypingContext(self.signature)

    def with_union_groups(self) -> Lexicon:
        """Swap the universal group flattener for its existential variant:
        membership in some selected group rather than in all of them."""
        co = self.coercions.get("grpflat")
        if co is None:
            return self
        term = Lam(
            "G",
            Arrow(Base("g"), Base("t")),
            Lam(
                "x",
                Base("e"),
                App(
                    TyApp(Const("exists"), Base("g")),
                    Lam(
                        "y",
                        Base("g"),
                        App(
                            App(Const("and"), App(Var("G"), Var("y"))),
                            App(App(Const("member_of"), Var("x")), Var("y")),
                        ),
                    ),
                ),
            ),
        )
        coercions = dict(self.coercions)
        coercions["grpflat"] = replace(co, term=term)
        return Lexicon(
            self.entries, coercions, self.extra_sorts, self.extra_constants, self._pending
        )


# ---------------------------------------------------------------- loading


def load(text: str) -> Lexicon:
    """Parse lexicon text; typing problems are deferred to `validate`."""
    sorts: list[str] = []
    constants: list[tuple[str, Type]] = []
    coercions: dict[str, Coercion] = {}
    entries: list[LexEntry] = []
    plurals: list[tuple[str, str, int]] = []
    pending: list[Diagnostic] = []

    base_sig = builtin_signature()

    def current_sig() -> Signature:
        return base_sig.extended(tuple(sorts), tuple(constants))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        try:
            toks = TokenStream(lex(raw, line_offset=lineno))
        except ParseError as exc:
            raise LexSyntaxError(exc.message, lineno, exc.col) from exc
        if toks.at_eof():
            continue
        head = toks.peek()
        try:
            if head.kind == "ident" and head.text == "sort":
                toks.next()
                name = toks.expect("ident").text
                if name in current_sig().sorts:
                    pending.append(
                        Diagnostic("DuplicateSort", f"sort {name!r} already declared", lineno)
                    )
                else:
                    sorts.append(name)
                _expect_eol(toks)
            elif head.kind == "ident" and head.text == "const":
                toks.next()
                name = toks.expect("ident").text
                toks.expect("punct", ":")
                try:
                    ty = syntax.parse_type_stream(toks, current_sig(), frozenset())
                    _expect_eol(toks)
                    if name in current_sig():
                        pending.append(
                            Diagnostic(
                                "DuplicateConstant",
                                f"constant {name!r} already declared",
                                lineno,
                            )
                        )
                    else:
                        constants.append((name, ty))
                except ElaborationError as exc:
                    pending.append(Diagnostic(_diag_kind(exc), exc.message, lineno))
            elif head.kind == "ident" and head.text == "coercion":
                toks.next()
                name = toks.expect("ident").text
                _expect_word(toks, "rigid")
                toks.expect("punct", "=")
                rigid = _expect_bool(toks)
                _expect_word(toks, "scope")
                toks.expect("punct", "=")
                scope_tok = toks.expect("ident")
                if scope_tok.text not in (LOCAL, GLOBAL):
                    raise ParseError(
                        f"scope must be local or global, got {scope_tok.text!r}",
                        scope_tok.line,
                        scope_tok.col,
                    )
                toks.expect("punct", ":")
                try:
                    term = syntax.parse_term_stream(toks, current_sig())
                    _expect_eol(toks)
                    coercions[name] = Coercion(name, term, rigid, scope_tok.text)
                except (ElaborationError, KernelError) as exc:
                    pending.append(
                        Diagnostic(_diag_kind(exc), f"coercion {name!r}: {exc}", lineno)
                    )
            elif head.kind == "ident" and head.text == "entry":
                toks.next()
                form = toks.expect("string").text
                tokens = tuple(w.lower() for w in form.split())
                if not tokens:
                    raise ParseError("empty entry form", head.line, head.col)
                toks.expect("punct", ":")
                cat = parse_cat_stream(toks)
                toks.expect("punct", "=")
                term: Term | None
                try:
                    term = syntax.parse_term_stream(toks, current_sig())
                except (ElaborationError, KernelError) as exc:
                    pending.append(
                        Diagnostic(_diag_kind(exc), f"entry {form!r}: {exc}", lineno)
                    )
                    term = None
                    _skip_to_with(toks)
                names: tuple[str, ...] = ()
                if toks.accept("kw", "with"):
                    toks.expect("punct", "[")
                    parts = [toks.expect("ident").text]
                    while toks.accept("punct", ","):
                        parts.append(toks.expect("ident").text)
                    toks.expect("punct", "]")
                    names = tuple(parts)
                _expect_eol(toks)
                entries.append(LexEntry(tokens, form, cat, term, names, lineno))
            elif head.kind == "ident" and head.text == "plural":
                toks.next()
                noun = toks.expect("string").text
                toks.expect("punct", "=>")
                derived = toks.expect("string").text
                _expect_eol(toks)
                plurals.append((noun, derived, lineno))
            else:
                raise ParseError(
                    f"expected sort/const/coercion/entry/plural, found {head.text!r}",
                    head.line,
                    head.col,
                )
        except ParseError as exc:
            raise LexSyntaxError(exc.message, exc.line, exc.col) from exc

    lexicon = Lexicon(entries, coercions, tuple(sorts), tuple(constants), pending)

    # plural directives run last so they see the final signature
    sig = lexicon.signature
    for noun, derived_form, lineno in plurals:
        noun_tokens = tuple(noun.lower().split())
        matches = [
            e for e in lexicon.entries if e.tokens == noun_tokens and e.cat == CatAtom("n")
        ]
        if not matches or matches[0].term is None:
            lexicon._pending.append(
                Diagnostic("UnknownNoun", f"plural of unknown noun {noun!r}", lineno)
            )
            continue
        try:
            derived = derive_plural(matches[0], sig, form=derived_form)
        except (NotANoun, NotPredicative, KernelError) as exc:
            lexicon._pending.append(Diagnostic(type(exc).__name__, str(exc), lineno))
            continue
        lexicon.entries.append(derived)
        lexicon._index.setdefault(derived.tokens, []).append(derived)
        lexicon._max_form = max(lexicon._max_form, len(derived.tokens))
    return lexicon


def _expect_eol(toks: TokenStream) -> None:
    if not toks.at_eof():
        tok = toks.peek()
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)


def _expect_word(toks: TokenStream, word: str) -> None:
    tok = toks.peek()
    if tok.kind == "ident" and tok.text == word:
        toks.next()
        return
    raise ParseError(f"expected {word!r}", tok.line, tok.col)


def _expect_bool(toks: TokenStream) -> bool:
    tok = toks.expect("ident")
    if tok.text in ("true", "false"):
        return tok.text == "true"
    raise ParseError(f"expected true or false, got {tok.text!r}", tok.line, tok.col)


def _skip_to_with(toks: TokenStream) -> None:
    while not toks.at_eof():
        tok = toks.peek()
        if tok.kind == "kw" and tok.text == "with":
            return
        toks.next()


def load_path(path: str | Path) -> Lexicon:
    return load(Path(path).read_text(encoding="utf-8"))


def packaged_lexicon_path(name: str) -> Path:
    """Path of a lexicon shipped inside the package (english/french/japanese)."""
    return Path(str(importlib.resources.files("pluralsem").joinpath("data", name)))


# -------------------------------------------------------- plural derivation


def derive_plural(entry: LexEntry, sig: Signature, form: str | None = None) -> LexEntry:
    """Derive the plural entry of a predicative noun via the plural shift."""
    if entry.cat != CatAtom("n"):
        raise NotANoun(f"entry {entry.form!r} has category {entry.cat!r}, not n")
    if entry.term is None:
        raise NotPredicative(f"entry {entry.form!r} has no well-typed term")
    ctx = TypingContext(sig)
    ty = type_of(ctx, entry.term)
    if not (isinstance(ty, Arrow) and isinstance(ty.dom, Base) and types_equal(ty.cod, Base("t"))):
        raise NotPredicative(f"noun term must have type <sort> -> t, got {ty!r}")
    shifted = App(TyApp(plural_shift_term(), ty.dom), entry.term)
    term = normalize(shifted, ctx)
    plural_form = form if form is not None else entry.form + "s"
    tokens = tuple(w.lower() for w in plural_form.split())
    return LexEntry(tokens, plural_form, CatAtom("n"), term, entry.coercions, entry.line)


# ------------------------------------------------------------- validation


def validate(lexicon: Lexicon) -> list[Diagnostic]:
    """Empty iff every term type-checks, every coercion is functional and
    resolvable, and the kernel's typechecker agrees with the naive one."""
    diags = list(lexicon._pending)
    ctx = lexicon.context()
    for entry in lexicon.entries:
        if entry.term is not None:
            try:
                ty = type_of(ctx, entry.term)
            except KernelError as exc:
                diags.append(
                    Diagnostic(_diag_kind(exc), f"entry {entry.form!r}: {exc}", entry.line)
                )
            else:
                naive = _type_of_naive(lexicon.signature, entry.term)
                if naive is None or not types_equal(ty, naive):
                    diags.append(
                        Diagnostic(
                            "TypecheckerDisagreement",
                            f"entry {entry.form!r}: kernel says {ty!r}, naive says {naive!r}",
                            entry.line,
                        )
                    )
        for name in entry.coercions:
            if name not in lexicon.coercions:
                diags.append(
                    Diagnostic(
                        "UnknownCoercion",
                        f"entry {entry.form!r} lists unknown coercion {name!r}",
                        entry.line,
                    )
                )
    for co in lexicon.coercions.values():
        try:
            ty = type_of(ctx, co.term)
        except KernelError as exc:
            diags.append(Diagnostic(_diag_kind(exc), f"coercion {co.name!r}: {exc}", 0))
            continue
        stripped = ty
        while isinstance(stripped, Pi):
            stripped = subst_type(stripped.body, stripped.var, TyVar(fresh_name("a")))
        if not isinstance(stripped, Arrow):
            diags.append(
                Diagnostic(
                    "NotFunctional",
                    f"coercion {co.name!r} has non-functional type {ty!r}",
                    0,
                )
            )
        naive = _type_of_naive(lexicon.signature, co.term)
        if naive is None or not types_equal(ty, naive):
            diags.append(
                Diagnostic(
                    "TypecheckerDisagreement",
                    f"coercion {co.name!r}: kernel says {ty!r}, naive says {naive!r}",
                    0,
                )
            )
    return diags


# A deliberately separate typechecker used as a cross-check at validation
# time.  It translates to de Bruijn indices first, so it shares no scoping
# machinery with the kernel.


def _type_of_naive(sig: Signature, term: Term) -> Type | None:
    def conv_ty(ty: Type, tenv: list[str]) -> tuple:
        match ty:
            case Base(name):
                return ("b", name)
            case TyVar(name):
                if name in tenv:
                    return ("v", len(tenv) - 1 - _rindex(tenv, name))
                return ("fv", name)
            case Arrow(d, c):
                return ("->", conv_ty(d, tenv), conv_ty(c, tenv))
            case Pi(v, b):
                return ("pi", conv_ty(b, tenv + [v]))
        raise TypeError(ty)

    def shift(t: tuple, by: int, cutoff: int = 0) -> tuple:
        match t:
            case ("b", _) | ("fv", _):
                return t
            case ("v", i):
                return ("v", i + by) if i >= cutoff else t
            case ("->", d, c):
                return ("->", shift(d, by, cutoff), shift(c, by, cutoff))
            case ("pi", b):
                return ("pi", shift(b, by, cutoff + 1))
        raise TypeError(t)

    def substi(t: tuple, idx: int, repl: tuple) -> tuple:
        match t:
            case ("b", _) | ("fv", _):
                return t
            case ("v", i):
                if i == idx:
                    return repl
                return ("v", i - 1) if i > idx else t
            case ("->", d, c):
                return ("->", substi(d, idx, repl), substi(c, idx, repl))
            case ("pi", b):
                return ("pi", substi(b, idx + 1, shift(repl, 1)))
        raise TypeError(t)

    def infer(t: Term, venv: list[tuple[str, tuple]], tenv: list[str]) -> tuple:
        match t:
            case Var(name):
                for n, ty in reversed(venv):
                    if n == name:
                        return ty
                raise ValueError(name)
            case Const(name):
                ty = sig.type_of_const(name)
                if ty is None:
                    raise ValueError(name)
                return conv_ty(ty, [])
            case App(fn, arg):
                fty = infer(t=fn, venv=venv, tenv=tenv)
                aty = infer(t=arg, venv=venv, tenv=tenv)
                if not (isinstance(fty, tuple) and fty[0] == "->" and fty[1] == aty):
                    raise ValueError("application mismatch")
                return fty[2]
            case Lam(x, ty, body):
                dom = conv_ty(ty, tenv)
                cod = infer(body, venv + [(x, dom)], tenv)
                return ("->", dom, cod)
            case TyApp(fn, ty):
                fty = infer(fn, venv, tenv)
                if not (isinstance(fty, tuple) and fty[0] == "pi"):
                    raise ValueError("not a Pi")
                return substi(fty[1], 0, conv_ty(ty, tenv))
            case TyLam(a, body):
                inner = infer(body, [(n, shift(ty, 1)) for n, ty in venv], tenv + [a])
                return ("pi", inner)
        raise TypeError(t)

    def back(t: tuple, names: list[str]) -> Type:
        match t:
            case ("b", name):
                return Base(name)
            case ("fv", name):
                return TyVar(name)
            case ("v", i):
                return TyVar(names[len(names) - 1 - i])
            case ("->", d, c):
                return Arrow(back(d, names), back(c, names))
            case ("pi", b):
                v = fresh_name("a")
                return Pi(v, back(b, names + [v]))
        raise TypeError(t)

    try:
        return back(infer(term, [], []), [])
    except (ValueError, TypeError):
        return None


def _rindex(items: list[str], item: str) -> int:
    for i in range(len(items) - 1, -1, -1):
        if items[i] == item:
            return i
    raise ValueError(item)
