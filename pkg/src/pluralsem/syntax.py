"""Surface syntax for types and terms: lexer, parser, canonical printer.

The term parser elaborates directly to kernel terms against a signature:
identifiers resolve to bound variables or constants, and applications of
Pi-typed functors are implicitly type-instantiated (explicit `f{T}` is
also accepted).  The printer emits the same grammar back, with canonical
bound-variable names, so `parse(pretty(t))` is alpha-equal to `t`.

Grammar sketch (ASCII forms; the unicode aliases are accepted on input):

    term   := 'lam' x ':' ann '.' term | 'Lam' a '.' term
            | 'all' x ':' ann '.' term | 'some' x ':' ann '.' term | impl
    impl   := disj ('=>' term)?                      -- right-associative
    disj   := conj (('||') conj)*
    conj   := cmp (('&&') cmp)*
    cmp    := app (('==' | '=' | '>') app)?
    app    := atom (atom | '{' type '}' | '(' term (',' term)* ')')*
    atom   := ident | number | '(' term ')' | '|' term '|'
    ann    := ident | '(' type ')'
    type   := 'Pi' a '.' type | tyatom ('->' type)?
    tyatom := ident | '(' type ')'
"""

from __future__ import annotations

from dataclasses import dataclass

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
    constants_of,
    free_vars,
    instantiate_and_apply,
    is_numeral,
    types_equal,
)


class ParseError(Exception):
    """A grammar-level failure, with position information."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col


class ElaborationError(Exception):
    """A name-resolution or typing failure while building a term."""

    def __init__(self, message: str, line: int = 0, col: int = 0, kind: str = "UnboundName"):
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col
        self.kind = kind


# ------------------------------------------------------------------ lexer

_KEYWORDS = {"lam", "Lam", "all", "some", "Pi", "with"}

_UNICODE_PUNCT = {
    "λ": ("kw", "lam"),
    "Λ": ("kw", "Lam"),
    "∀": ("kw", "all"),
    "∃": ("kw", "some"),
    "Π": ("kw", "Pi"),
    "∧": ("punct", "&&"),
    "∨": ("punct", "||"),
    "⇒": ("punct", "=>"),
    "→": ("punct", "->"),
}

_MULTI_PUNCT = ("->", "=>", "==", "&&", "||")
_SINGLE_PUNCT = "(){}[].:,=>|\\/"


@dataclass(frozen=True)
class Token:
    kind: str  # ident | number | string | kw | punct | eof
    text: str
    line: int
    col: int


def lex(text: str, line_offset: int = 1) -> list[Token]:
    """Tokenize; `#` starts a comment running to end of line."""
    toks: list[Token] = []
    line = line_offset
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    raise ParseError("unterminated string", line, start_col)
                j += 1
            if j >= n:
                raise ParseError("unterminated string", line, start_col)
            toks.append(Token("string", text[i + 1 : j], line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch in _UNICODE_PUNCT:
            kind, mapped = _UNICODE_PUNCT[ch]
            toks.append(Token(kind, mapped, line, start_col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("number", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "kw" if word in _KEYWORDS else "ident"
            toks.append(Token(kind, word, line, start_col))
            col += j - i
            i = j
            continue
        two = text[i : i + 2]
        if two in _MULTI_PUNCT:
            toks.append(Token("punct", two, line, start_col))
            i += 2
            col += 2
            continue
        if ch in _SINGLE_PUNCT:
            toks.append(Token("punct", ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    toks.append(Token("eof", "", line, col))
    return toks


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        tok = self.peek()
        if tok.kind == kind and (text is None or tok.text == text):
            return self.next()
        return None

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.accept(kind, text)
        if tok is None:
            got = self.peek()
            want = text if text is not None else kind
            raise ParseError(f"expected {want!r}, found {got.text or got.kind!r}", got.line, got.col)
        return tok

    def at_eof(self) -> bool:
        return self.peek().kind == "eof"


# ------------------------------------------------------------ type parser


def parse_type_stream(ts: TokenStream, sig: Signature, tyvars: frozenset[str]) -> Type:
    if ts.accept("kw", "Pi"):
        name = ts.expect("ident").text
        ts.expect("punct", ".")
        return Pi(name, parse_type_stream(ts, sig, tyvars | {name}))
    left = _type_atom(ts, sig, tyvars)
    if ts.accept("punct", "->"):
        return Arrow(left, parse_type_stream(ts, sig, tyvars))
    return left


def _type_atom(ts: TokenStream, sig: Signature, tyvars: frozenset[str]) -> Type:
    if ts.accept("punct", "("):
        ty = parse_type_stream(ts, sig, tyvars)
        ts.expect("punct", ")")
        return ty
    tok = ts.peek()
    if tok.kind == "ident":
        ts.next()
        if tok.text in tyvars:
            return TyVar(tok.text)
        if tok.text in sig.sorts:
            return Base(tok.text)
        raise ElaborationError(f"unknown sort or type variable {tok.text!r}", tok.line, tok.col)
    raise ParseError(f"expected a type, found {tok.text or tok.kind!r}", tok.line, tok.col)


def parse_type(text: str, sig: Signature, tyvars: frozenset[str] = frozenset()) -> Type:
    ts = TokenStream(lex(text))
    ty = parse_type_stream(ts, sig, tyvars)
    tok = ts.peek()
    if not ts.at_eof():
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return ty


# ------------------------------------------------------------ term parser


class _TermParser:
    def __init__(self, ts: TokenStream, sig: Signature):
        self.ts = ts
        self.sig = sig
        self.env: list[tuple[str, Type]] = []
        self.tyvars: list[str] = []

    def ctx(self) -> TypingContext:
        return TypingContext(self.sig, tuple(self.env), frozenset(self.tyvars))

    def apply(self, f: Term, a: Term, tok: Token) -> Term:
        try:
            return instantiate_and_apply(f, a, self.ctx())
        except KernelError as exc:
            raise ElaborationError(str(exc), tok.line, tok.col, kind=type(exc).__name__) from exc

    def term(self) -> Term:
        ts = self.ts
        tok = ts.peek()
        if tok.kind == "kw" and tok.text in ("lam", "Lam", "all", "some"):
            ts.next()
            if tok.text == "Lam":
                name = ts.expect("ident").text
                ts.expect("punct", ".")
                self.tyvars.append(name)
                body = self.term()
                self.tyvars.pop()
                return TyLam(name, body)
            name = ts.expect("ident").text
            ts.expect("punct", ":")
            ann = self._annotation()
            ts.expect("punct", ".")
            self.env.append((name, ann))
            body = self.term()
            self.env.pop()
            lam = Lam(name, ann, body)
            if tok.text == "lam":
                return lam
            quant = "forall" if tok.text == "all" else "exists"
            return App(TyApp(Const(quant), ann), lam)
        return self.impl()

    def _annotation(self) -> Type:
        ts = self.ts
        if ts.accept("punct", "("):
            ty = parse_type_stream(ts, self.sig, frozenset(self.tyvars))
            ts.expect("punct", ")")
            return ty
        return _type_atom(ts, self.sig, frozenset(self.tyvars))

    def impl(self) -> Term:
        left = self.disj()
        if self.ts.accept("punct", "=>"):
            right = self.term()
            return App(App(Const("implies"), left), right)
        return left

    def disj(self) -> Term:
        left = self.conj()
        while self.ts.accept("punct", "||"):
            left = App(App(Const("or"), left), self.conj())
        return left

    def conj(self) -> Term:
        left = self.cmp()
        while self.ts.accept("punct", "&&"):
            left = App(App(Const("and"), left), self.cmp())
        return left

    def cmp(self) -> Term:
        left = self.app()
        tok = self.ts.peek()
        if self.ts.accept("punct", "==") or self.ts.accept("punct", "="):
            right = self.app()
            return self.apply(self.apply(Const("eq"), left, tok), right, tok)
        if self.ts.accept("punct", ">"):
            right = self.app()
            return self.apply(self.apply(Const("gt"), left, tok), right, tok)
        return left

    def app(self) -> Term:
        out = self.atom()
        while True:
            nxt = self.ts.peek()
            if nxt.kind == "punct" and nxt.text == "{":
                self.ts.next()
                ty = parse_type_stream(self.ts, self.sig, frozenset(self.tyvars))
                self.ts.expect("punct", "}")
                out = TyApp(out, ty)
            elif nxt.kind == "punct" and nxt.text == "(":
                self.ts.next()
                args = [self.term()]
                while self.ts.accept("punct", ","):
                    args.append(self.term())
                self.ts.expect("punct", ")")
                for arg in args:
                    out = self.apply(out, arg, nxt)
            elif self._starts_atom(nxt):
                arg = self.atom()
                out = self.apply(out, arg, nxt)
            else:
                return out

    @staticmethod
    def _starts_atom(tok: Token) -> bool:
        # `|...|` and `(...)` arguments must use call syntax, f(|P|), so a
        # closing bar or paren never reads as the start of a new argument
        return tok.kind in ("ident", "number")

    def atom(self) -> Term:
        ts = self.ts
        tok = ts.peek()
        if tok.kind == "number":
            ts.next()
            return Const(tok.text)
        if tok.kind == "ident":
            ts.next()
            for name, _ in reversed(self.env):
                if name == tok.text:
                    return Var(tok.text)
            if tok.text in self.sig:
                return Const(tok.text)
            raise ElaborationError(f"unknown constant {tok.text!r}", tok.line, tok.col)
        if ts.accept("punct", "("):
            inner = self.term()
            ts.expect("punct", ")")
            return inner
        if ts.accept("punct", "|"):
            inner = self.term()
            closing = ts.expect("punct", "|")
            return self.apply(Const("card"), inner, closing)
        raise ParseError(f"expected a term, found {tok.text or tok.kind!r}", tok.line, tok.col)


def parse_term_stream(ts: TokenStream, sig: Signature) -> Term:
    return _TermParser(ts, sig).term()


def parse_term(text: str, sig: Signature) -> Term:
    ts = TokenStream(lex(text))
    term = parse_term_stream(ts, sig)
    tok = ts.peek()
    if not ts.at_eof():
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return term


# --------------------------------------------------------------- printing


def _canonicalize(term: Term) -> Term:
    """Rename bound variables positionally: x0, x1, ... and a0, a1, ...

    Names already taken by constants, free variables, or sorts occurring
    in the term are skipped, so the output reparses to the same term.
    """
    used = set(constants_of(term)) | set(free_vars(term))

    def collect_type_names(ty: Type) -> None:
        match ty:
            case Base(name) | TyVar(name):
                used.add(name)
            case Arrow(dom, cod):
                collect_type_names(dom)
                collect_type_names(cod)
            case Pi(_, body):
                collect_type_names(body)

    def collect_term_types(t: Term) -> None:
        match t:
            case App(fn, arg):
                collect_term_types(fn)
                collect_term_types(arg)
            case Lam(_, ty, body):
                collect_type_names(ty)
                collect_term_types(body)
            case TyApp(fn, ty):
                collect_term_types(fn)
                collect_type_names(ty)
            case TyLam(_, body):
                collect_term_types(body)

    collect_term_types(term)
    counters = {"x": 0, "a": 0}

    def pick(base: str) -> str:
        while True:
            name = f"{base}{counters[base]}"
            counters[base] += 1
            if name not in used:
                used.add(name)
                return name

    def go_ty(ty: Type, tyenv: dict[str, str]) -> Type:
        match ty:
            case Base():
                return ty
            case TyVar(name):
                return TyVar(tyenv.get(name, name))
            case Arrow(dom, cod):
                return Arrow(go_ty(dom, tyenv), go_ty(cod, tyenv))
            case Pi(var, body):
                new = pick("a")
                return Pi(new, go_ty(body, {**tyenv, var: new}))
        raise TypeError(ty)

    def go(t: Term, env: dict[str, str], tyenv: dict[str, str]) -> Term:
        match t:
            case Var(name):
                return Var(env.get(name, name))
            case Const():
                return t
            case App(fn, arg):
                return App(go(fn, env, tyenv), go(arg, env, tyenv))
            case Lam(x, ty, body):
                new = pick("x")
                return Lam(new, go_ty(ty, tyenv), go(body, {**env, x: new}, tyenv))
            case TyApp(fn, ty):
                return TyApp(go(fn, env, tyenv), go_ty(ty, tyenv))
            case TyLam(a, body):
                new = pick("a")
                return TyLam(new, go(body, env, {**tyenv, a: new}))
        raise TypeError(t)

    return go(term, {}, {})


_ASCII_GLYPHS = {"lam": "lam ", "Lam": "Lam ", "all": "all ", "some": "some ",
                 "and": "&&", "or": "||", "implies": "=>"}
_UNICODE_GLYPHS = {"lam": "λ", "Lam": "Λ", "all": "∀", "some": "∃",
                   "and": "∧", "or": "∨", "implies": "⇒"}

# precedence levels: 0 binder, 1 =>, 2 ||, 3 &&, 4 comparison, 5 application
_PREC_ATOM = 6


def pretty_type(ty: Type, prec: int = 0) -> str:
    match ty:
        case Base(name) | TyVar(name):
            return name
        case Arrow(dom, cod):
            s = f"{pretty_type(dom, 2)} -> {pretty_type(cod, 1)}"
            return f"({s})" if prec >= 2 else s
        case Pi(var, body):
            s = f"Pi {var}. {pretty_type(body, 0)}"
            return f"({s})" if prec >= 1 else s
    raise TypeError(ty)


def _type_annotation(ty: Type) -> str:
    if isinstance(ty, (Base, TyVar)):
        return pretty_type(ty)
    return f"({pretty_type(ty)})"


def pretty_term(term: Term, unicode: bool = False) -> str:
    """Deterministic, re-parseable rendering with canonical bound names."""
    glyphs = _UNICODE_GLYPHS if unicode else _ASCII_GLYPHS

    def wrap(s: str, prec: int, ctx_prec: int) -> str:
        return f"({s})" if prec < ctx_prec else s

    def pp(t: Term, ctx_prec: int) -> str:
        match t:
            case App(App(Const("and"), l), r):
                s = f"{pp(l, 3)} {glyphs['and']} {pp(r, 4)}"
                return wrap(s, 3, ctx_prec)
            case App(App(Const("or"), l), r):
                s = f"{pp(l, 2)} {glyphs['or']} {pp(r, 3)}"
                return wrap(s, 2, ctx_prec)
            case App(App(Const("implies"), l), r):
                s = f"{pp(l, 2)} {glyphs['implies']} {pp(r, 1)}"
                return wrap(s, 1, ctx_prec)
            case App(App(Const("gt"), l), r):
                s = f"{pp(l, 5)} > {pp(r, 5)}"
                return wrap(s, 4, ctx_prec)
            case App(App(TyApp(Const("eq"), _), l), r):
                s = f"{pp(l, 5)} == {pp(r, 5)}"
                return wrap(s, 4, ctx_prec)
            case App(TyApp(Const("card"), _), p):
                return f"|{pp(p, 0)}|"
            case App(TyApp(Const(("forall" | "exists") as q), ty), Lam(x, ty2, body)) if types_equal(ty, ty2):
                kw = glyphs["all"] if q == "forall" else glyphs["some"]
                s = f"{kw}{x}:{_type_annotation(ty)}. {pp(body, 0)}"
                return wrap(s, 0, ctx_prec)
            case Lam(x, ty, body):
                s = f"{glyphs['lam']}{x}:{_type_annotation(ty)}. {pp(body, 0)}"
                return wrap(s, 0, ctx_prec)
            case TyLam(a, body):
                s = f"{glyphs['Lam']}{a}. {pp(body, 0)}"
                return wrap(s, 0, ctx_prec)
            case App() | TyApp():
                return _pp_spine(t, ctx_prec)
            case Var(name) | Const(name):
                return name
        raise TypeError(t)

    def _pp_spine(t: Term, ctx_prec: int) -> str:
        # flatten into head plus interleaved term/type argument groups
        parts: list[tuple[str, object]] = []
        head = t
        while True:
            if isinstance(head, App):
                parts.append(("term", head.arg))
                head = head.fn
            elif isinstance(head, TyApp):
                parts.append(("type", head.ty))
                head = head.fn
            else:
                break
        parts.reverse()
        out = pp(head, _PREC_ATOM)
        i = 0
        while i < len(parts):
            kind, item = parts[i]
            if kind == "type":
                out += "{" + pretty_type(item, 0) + "}"
                i += 1
            else:
                args = []
                while i < len(parts) and parts[i][0] == "term":
                    args.append(pp(parts[i][1], 0))
                    i += 1
                out += "(" + ", ".join(args) + ")"
        return wrap(out, 5, ctx_prec)

    return pp(_canonicalize(term), 0)
