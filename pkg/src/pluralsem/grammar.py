"""AB categorial grammar: categories, tokenizer, and a CYK parser.

Only the two application rules exist.  `A/B` seeks a B to its right,
`B\\A` seeks a B to its left; the parser returns every derivation whose
root category is `s`, in a deterministic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .syntax import ParseError, TokenStream, lex

if TYPE_CHECKING:
    from .lexicon import LexEntry, Lexicon


class UnknownToken(Exception):
    """A word with no lexicon match; position is 1-based."""

    def __init__(self, token: str, position: int):
        super().__init__(f"unknown token {token!r} at position {position}")
        self.token = token
        self.position = position


class NoParse(Exception):
    pass


# ------------------------------------------------------------- categories

ATOM_NAMES = ("n", "np", "s")


@dataclass(frozen=True, slots=True)
class CatAtom:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Right:
    """`result/arg`: produces `result` given an `arg` on the right."""

    result: "Cat"
    arg: "Cat"

    def __repr__(self) -> str:
        return f"{_cat_atomish(self.result)}/{_cat_atomish(self.arg)}"


@dataclass(frozen=True, slots=True)
class Left:
    """`arg\\result`: produces `result` given an `arg` on the left."""

    arg: "Cat"
    result: "Cat"

    def __repr__(self) -> str:
        return f"{_cat_atomish(self.arg)}\\{_cat_atomish(self.result)}"


Cat = CatAtom | Right | Left


def _cat_atomish(c: Cat) -> str:
    return repr(c) if isinstance(c, CatAtom) else f"({c!r})"


def pretty_cat(c: Cat) -> str:
    return repr(c)


def parse_cat_stream(ts: TokenStream) -> Cat:
    node = _cat_atom(ts)
    while True:
        if ts.accept("punct", "/"):
            node = Right(node, _cat_atom(ts))
        elif ts.accept("punct", "\\"):
            node = Left(node, _cat_atom(ts))
        else:
            return node


def _cat_atom(ts: TokenStream) -> Cat:
    if ts.accept("punct", "("):
        cat = parse_cat_stream(ts)
        ts.expect("punct", ")")
        return cat
    tok = ts.peek()
    if tok.kind == "ident" and tok.text in ATOM_NAMES:
        ts.next()
        return CatAtom(tok.text)
    raise ParseError(f"expected a category, found {tok.text or tok.kind!r}", tok.line, tok.col)


def parse_cat(text: str) -> Cat:
    ts = TokenStream(lex(text))
    cat = parse_cat_stream(ts)
    if not ts.at_eof():
        tok = ts.peek()
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return cat


# -------------------------------------------------------------- tokenizer


@dataclass(frozen=True, slots=True)
class LexToken:
    """A maximal lexicon match covering words [start, end)."""

    words: tuple[str, ...]
    start: int
    end: int


def tokenize(sentence: str, lex: "Lexicon") -> list[LexToken]:
    """Whitespace split, lowercase, strip one trailing period, then match
    lexicon forms leftmost-greedy, preferring the longest multi-token hit."""
    stripped = sentence.strip()
    if stripped.endswith("."):
        stripped = stripped[:-1]
    words = [w.lower() for w in stripped.split()]
    out: list[LexToken] = []
    i = 0
    limit = max(lex.max_form_length(), 1)
    while i < len(words):
        matched = None
        for length in range(min(limit, len(words) - i), 0, -1):
            candidate = tuple(words[i : i + length])
            if lex.lookup(candidate):
                matched = LexToken(candidate, i, i + length)
                break
        if matched is None:
            raise UnknownToken(words[i], i + 1)
        out.append(matched)
        i = matched.end
    return out


# ----------------------------------------------------------------- parser


@dataclass(frozen=True, slots=True)
class Leaf:
    entry: "LexEntry"
    cat: Cat
    start: int
    end: int


@dataclass(frozen=True, slots=True)
class FwdApp:
    functor: "DerivationTree"
    arg: "DerivationTree"
    cat: Cat
    start: int
    end: int


@dataclass(frozen=True, slots=True)
class BwdApp:
    arg: "DerivationTree"
    functor: "DerivationTree"
    cat: Cat
    start: int
    end: int


DerivationTree = Leaf | FwdApp | BwdApp


def parse(tokens: list[LexToken], lex: "Lexicon") -> list[DerivationTree]:
    """All derivations of category `s` spanning the whole input (CYK)."""
    n = len(tokens)
    if n == 0:
        raise NoParse("empty input")
    chart: dict[tuple[int, int], list[DerivationTree]] = {}
    for idx, tok in enumerate(tokens):
        cell = []
        for entry in lex.lookup(tok.words):
            cell.append(Leaf(entry, entry.cat, tok.start, tok.end))
        chart[(idx, idx + 1)] = cell
    for width in range(2, n + 1):
        for i in range(0, n - width + 1):
            j = i + width
            cell = []
            for k in range(i + 1, j):
                for left in chart[(i, k)]:
                    for right in chart[(k, j)]:
                        if isinstance(left.cat, Right) and left.cat.arg == right.cat:
                            cell.append(
                                FwdApp(left, right, left.cat.result, left.start, right.end)
                            )
                        if isinstance(right.cat, Left) and right.cat.arg == left.cat:
                            cell.append(
                                BwdApp(left, right, right.cat.result, left.start, right.end)
                            )
            chart[(i, j)] = cell
    roots = [t for t in chart[(0, n)] if t.cat == CatAtom("s")]
    if not roots:
        raise NoParse("no derivation of category s")
    return roots


def check_tree(tree: DerivationTree) -> bool:
    """Soundness: every internal node obeys the two application rules."""
    match tree:
        case Leaf():
            return True
        case FwdApp(functor, arg, cat, _, _):
            return (
                isinstance(functor.cat, Right)
                and functor.cat.arg == arg.cat
                and functor.cat.result == cat
                and check_tree(functor)
                and check_tree(arg)
            )
        case BwdApp(arg, functor, cat, _, _):
            return (
                isinstance(functor.cat, Left)
                and functor.cat.arg == arg.cat
                and functor.cat.result == cat
                and check_tree(functor)
                and check_tree(arg)
            )
    raise TypeError(tree)
